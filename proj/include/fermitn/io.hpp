#pragma once

#include "fermitn/ftc.hpp"
#include "fermitn/groundstate.hpp"
#include "fermitn/lattice.hpp"
#include "fermitn/model.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermitn {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rational from a JSON integer or a "p/q" string.
inline Rational parse_rational(const json& j) {
    try {
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_string()) {
            auto s = j.get<std::string>();
            auto slash = s.find('/');
            if (slash == std::string::npos) return Rational(std::stol(s));
            return Rational(std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1)));
        }
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad rational: ") + e.what());
    }
    throw ParseError("rational must be an integer or a \"p/q\" string, got " + j.dump());
}

// Group and cocycle data with ω stored as [re, im] rational pairs.
struct ModelSpec {
    std::string name;
    FiniteGroup G;
    Cocycle2 s;
    std::vector<std::pair<Rational, Rational>> omega;  // flattened (a·n + b)·n + c
    std::optional<PhaseCocycle> phases;                // set for builtins

    template <class S>
    Model<S> to_model() const {
        if (phases) return fermitn::to_model<S>(PhaseModel{name, G, s, *phases});
        const int n = G.order();
        Cocycle3<S> w(n, scalar_traits<S>::from_int(1));
        for (std::size_t i = 0; i < omega.size(); ++i)
            w.values_mut()[i] = scalar_traits<S>::from_rational_pair(omega[i].first, omega[i].second);
        return {name, G, s, w};
    }
};

inline ModelSpec spec_from_phase_model(const PhaseModel& m) {
    ModelSpec sp{m.name, m.G, m.s, {}, m.omega};
    return sp;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

// {order, table, s?, omega?}. Group and cocycle-2 failures propagate as GroupError / ParseError.
inline ModelSpec parse_model(const json& j, const std::string& name = "file") {
    ModelSpec sp;
    sp.name = j.value("name", name);
    if (!j.contains("table")) throw ParseError("model file needs a 'table'");
    std::vector<std::vector<int>> table;
    try {
        table = j.at("table").get<std::vector<std::vector<int>>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("table: ") + e.what());
    }
    if (j.contains("order") && j.at("order").get<int>() != static_cast<int>(table.size()))
        throw ParseError("'order' does not match the table size");
    sp.G = FiniteGroup::validate(table);
    const int n = sp.G.order();
    sp.s = Cocycle2(n);
    if (j.contains("s")) {
        auto t = j.at("s").get<std::vector<std::vector<int>>>();
        if (static_cast<int>(t.size()) != n) throw ParseError("s table has the wrong size");
        try {
            sp.s = Cocycle2::from_table(t);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    sp.omega.assign(static_cast<std::size_t>(n) * n * n, {Rational(1), Rational(0)});
    if (j.contains("omega")) {
        const auto& w = j.at("omega");
        if (!w.is_array() || static_cast<int>(w.size()) != n) throw ParseError("omega must be an n×n×n array");
        for (int a = 0; a < n; ++a) {
            if (!w[a].is_array() || static_cast<int>(w[a].size()) != n) throw ParseError("omega must be an n×n×n array");
            for (int b = 0; b < n; ++b) {
                if (!w[a][b].is_array() || static_cast<int>(w[a][b].size()) != n)
                    throw ParseError("omega must be an n×n×n array");
                for (int c = 0; c < n; ++c) {
                    const auto& z = w[a][b][c];
                    if (!z.is_array() || z.size() != 2) throw ParseError("omega entries are [re, im] pairs");
                    sp.omega[(a * n + b) * n + c] = {parse_rational(z[0]), parse_rational(z[1])};
                }
            }
        }
    }
    return sp;
}

// Builtin name or path to a model file.
inline ModelSpec load_model(const std::string& ref) {
    for (const auto& n : builtin_model_names())
        if (ref == n) return spec_from_phase_model(builtin_model(n));
    if (ref == "ftc−") return spec_from_phase_model(builtin_model(ref));
    return parse_model(read_json_file(ref), ref);
}

inline BranchingGraph parse_region(const json& j) {
    BranchingGraph g;
    try {
        for (const auto& v : j.at("vertices")) g.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        for (const auto& e : j.at("edges")) g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        for (const auto& t : j.at("triangles")) g.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    } catch (const json::exception& e) {
        throw ParseError(std::string("region: ") + e.what());
    }
    const int nv = static_cast<int>(g.vertices.size());
    for (const auto& e : g.edges)
        if (e.tail < 0 || e.tail >= nv || e.head < 0 || e.head >= nv || e.tail == e.head)
            throw ParseError("region edge refers to a bad vertex");
    for (const auto& t : g.triangles)
        for (int x : t)
            if (x < 0 || x >= nv) throw ParseError("region triangle refers to a bad vertex");
    return g;
}

template <class S>
json scalar_json(const S& x) {
    if constexpr (scalar_traits<S>::exact) return json::array({x.re().str(), x.im().str()});
    else return json::array({x.real(), x.imag()});
}

// Index tuple (as "a,b,c") → [[generator codes...], [re, im]] per term.
template <class S>
json tensor_json(const FermionicTensor<S>& t) {
    json legs = json::array();
    for (const auto& l : t.legs()) legs.push_back(l.name);
    json entries = json::object();
    for (const auto& [idx, e] : t.entries()) {
        std::string key;
        for (std::size_t i = 0; i < idx.size(); ++i) key += (i ? "," : "") + std::to_string(idx[i]);
        json terms = json::array();
        for (const auto& [mono, c] : e.terms()) {
            json gens = json::array();
            for (auto code : mono) {
                auto g = GeneratorId::from_code(code);
                gens.push_back((g.conj ? "tb" : "t") + std::to_string(g.mode));
            }
            terms.push_back(json::array({gens, scalar_json(c)}));
        }
        entries[key] = terms;
    }
    return {{"legs", legs}, {"entries", entries}};
}

inline json with_schema(json j) {
    j["schema_version"] = schema_version;
    return j;
}

inline json verification_json(const std::string& axiom, const std::string& region, const json& elements, bool pass,
                              double dev) {
    return with_schema({{"axiom", axiom}, {"region", region}, {"group_elements", elements}, {"pass", pass},
                        {"max_deviation", dev}});
}

inline json degeneracy_json(const std::string& model, const std::vector<ClassInfo>& classes, int count, int rank) {
    json cl = json::array();
    for (const auto& c : classes)
        cl.push_back({{"rep", json::array({c.rep.first, c.rep.second})},
                      {"size", c.members.size()},
                      {"commuting", c.commuting},
                      {"s_symmetric", c.s_symmetric},
                      {"c_regular", c.c_regular},
                      {"mprime_nonzero", c.mprime_nonzero}});
    return with_schema({{"model", model}, {"classes", cl}, {"degeneracy", count}, {"degeneracy_rank", rank}});
}

inline json plaquette_json(const PlaquetteReport& r) {
    json per = json::array();
    for (const auto& c : r.configs) per.push_back({{"boundary", c.boundary}, {"pass", c.pass}, {"max_deviation", c.max_deviation}});
    return {{"pass", r.pass}, {"max_deviation", r.max_deviation}, {"configurations", per}};
}

inline json ftc_json(const FtcSummary& s, const std::string& alpha, const std::string& beta) {
    return with_schema({{"model", s.model},
                        {"alpha", alpha},
                        {"beta", beta},
                        {"pentagon_ok", s.pentagon_ok},
                        {"axioms_ok", s.axioms_ok},
                        {"plaquette_ok", plaquette_json(s.plaquette)},
                        {"degeneracy", s.degeneracy},
                        {"degeneracy_rank", s.degeneracy_rank},
                        {"pass", s.pass()}});
}

// ω table as [re, im] pairs when every value is a quarter turn, otherwise as turns "k/n".
inline json phase_cocycle_json(const PhaseCocycle& w) {
    const int n = w.order();
    json t = json::array();
    for (int a = 0; a < n; ++a) {
        json ta = json::array();
        for (int b = 0; b < n; ++b) {
            json tb = json::array();
            for (int c = 0; c < n; ++c) {
                const auto& p = w(a, b, c);
                if (p.is_quarter()) {
                    auto z = p.to_complex();
                    tb.push_back(json::array({static_cast<long>(std::lround(z.real())), static_cast<long>(std::lround(z.imag()))}));
                } else {
                    tb.push_back({{"turns", std::to_string(p.num()) + "/" + std::to_string(p.den())}});
                }
            }
            ta.push_back(tb);
        }
        t.push_back(ta);
    }
    return t;
}

}  // namespace fermitn
