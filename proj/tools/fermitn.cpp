#include "fermitn/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

using namespace fermitn;

namespace {

enum Exit { ok = 0, failed = 1, input_error = 2 };

struct Global {
    std::string arith = "exact";
    double tol = 1e-9;
    std::string proj_norm = "on";
    std::string berezin = "-";
    std::string json_out;
};

struct Output {
    std::vector<json> lines;
    void emit(json j) {
        std::cout << j.dump() << "\n";
        lines.push_back(std::move(j));
    }
    void write(const std::string& path) const {
        if (path.empty()) return;
        std::ofstream f(path);
        if (!f) throw ParseError("cannot write '" + path + "'");
        for (const auto& l : lines) f << l.dump() << "\n";
    }
};

AxiomOptions axiom_options(const Global& g) {
    AxiomOptions o;
    o.mpo.berezin = g.berezin == "+" ? BerezinSign::plus : BerezinSign::minus;
    o.mpo.normalized = g.proj_norm == "on";
    return o;
}

// Group, 2-cocycle and graded pentagon checks.
template <class S>
int cmd_verify(const ModelSpec& input, Output& out) {
    auto m = input.to_model<S>();
    int rc = ok;
    auto s_bad = check_cocycle2(m.G, m.s);
    out.emit(with_schema({{"check", "cocycle2"},
                          {"model", m.name},
                          {"pass", !s_bad.has_value() && is_normalized(m.s)},
                          {"witness", s_bad ? json(*s_bad) : json(nullptr)}}));
    if (s_bad || !is_normalized(m.s)) return input_error;
    auto w_bad = check_graded_pentagon(m.G, m.s, m.omega);
    bool norm = is_normalized(m.omega);
    out.emit(with_schema({{"check", "pentagon"},
                          {"model", m.name},
                          {"pass", !w_bad.has_value() && norm},
                          {"normalized", norm},
                          {"witness", w_bad ? json(*w_bad) : json(nullptr)}}));
    if (w_bad || !norm) rc = failed;
    return rc;
}

template <class S>
bool emit_region(const RegionReport& r, const std::string& region, int order, Output& out) {
    json all = json::array();
    for (int g = 0; g < order; ++g) all.push_back(g);
    json pairs = json::array();
    for (int g = 0; g < order; ++g)
        for (int h = 0; h < order; ++h) pairs.push_back(json::array({g, h}));
    out.emit(verification_json("symmetry", region, all, r.symmetry, r.max_deviation));
    out.emit(verification_json("projector", region, all, r.projector, r.max_deviation));
    out.emit(verification_json("representation", region, pairs, r.representation, r.max_deviation));
    out.emit(verification_json("injectivity", region, all, r.injectivity, r.max_deviation));
    out.emit(verification_json("concatenation-order", region, all, r.orders_agree, r.max_deviation));
    return r.pass();
}

template <class S>
int cmd_axioms(const ModelSpec& input, const Global& g, const std::string& region_file, const std::string& suite,
               bool mutate_y, Output& out) {
    auto m = input.to_model<S>();
    auto opt = axiom_options(g);
    if (mutate_y) opt.mpo.y_mutation = YMutation::flip_nontrivial;
    bool pass = true;
    if (!region_file.empty()) {
        auto graph = parse_region(read_json_file(region_file));
        if (auto v = validate_branching(graph)) {
            out.emit(with_schema({{"check", "branching"}, {"pass", false}, {"kind", v->kind}, {"face", v->face},
                                  {"edge", v->edge}, {"detail", v->detail}}));
            return input_error;
        }
        std::vector<int> region(graph.triangles.size());
        std::iota(region.begin(), region.end(), 0);
        pass = emit_region<S>(check_region(m, graph, region, opt), region_file, m.order(), out) && pass;
    } else {
        for (auto o : {Orientation::plus, Orientation::minus}) {
            auto graph = minimal_triangle(o);
            std::string name = std::string("minimal ") + to_string(o) + " triangle";
            pass = emit_region<S>(check_region(m, graph, {0}, opt, name), name, m.order(), out) && pass;
        }
        if (suite == "all") {
            auto rep = concat_case_suite(m, opt);
            for (const auto& r : rep.cases) pass = emit_region<S>(r, r.name, m.order(), out) && pass;
        }
    }
    out.emit(with_schema({{"model", m.name}, {"axioms_ok", pass}}));
    return pass ? ok : failed;
}

template <class S>
int cmd_degeneracy(const ModelSpec& input, const Global& g, Output& out) {
    auto m = input.to_model<S>();
    auto opt = axiom_options(g).mpo;
    auto classes = classify_pairs(m, true, opt);
    int count = degeneracy(m);
    int rank = degeneracy_by_rank(m, opt);
    out.emit(degeneracy_json(m.name, classes, count, rank));
    return count == rank ? ok : failed;
}

int cmd_solve(const std::string& group, const std::string& s_ref, int roots, Output& out) {
    FiniteGroup G;
    Cocycle2 s;
    if (group == "z2") G = cyclic_group(2);
    else if (group == "z3") G = cyclic_group(3);
    else if (group == "z4") G = cyclic_group(4);
    else if (group == "z2xz2") G = abelian_group(2, 2);
    else if (group == "s3") G = symmetric_group3();
    else if (group == "trivial") G = trivial_group();
    else {
        auto input = parse_model(read_json_file(group), group);
        G = input.G;
        s = input.s;
    }
    if (s_ref == "zero") s = Cocycle2(G.order());
    else if (s_ref == "ftc") {
        if (G.order() != 2) throw ParseError("the ftc 2-cocycle needs a group of order 2");
        s = ftc_s();
    } else if (!s_ref.empty()) {
        auto t = read_json_file(s_ref).at("s").get<std::vector<std::vector<int>>>();
        s = Cocycle2::from_table(t);
    }
    if (s.order() != G.order()) s = Cocycle2(G.order());
    if (auto bad = check_cocycle2(G, s)) {
        out.emit(with_schema({{"check", "cocycle2"}, {"pass", false}, {"witness", *bad}}));
        return input_error;
    }
    auto sols = solve_graded_pentagon(G, s, roots);
    json list = json::array();
    for (const auto& w : sols) list.push_back(phase_cocycle_json(w));
    out.emit(with_schema({{"order", G.order()}, {"roots", roots}, {"count", sols.size()}, {"solutions", list}}));
    return ok;
}

Complex parse_unit(const std::string& s) {
    if (s == "+i" || s == "i") return {0, 1};
    if (s == "-i") return {0, -1};
    if (s == "+1" || s == "1") return {1, 0};
    if (s == "-1") return {-1, 0};
    throw ParseError("expected one of +i, -i, +1, -1, got '" + s + "'");
}

template <class S>
int cmd_ftc(const std::string& alpha, const std::string& beta, const std::string& tensors, const Global& g,
            Output& out) {
    Complex a = parse_unit(alpha);
    Complex w = parse_unit(tensors.empty() ? alpha : tensors);
    if (w.real() != 0) throw ParseError("ftc tensors need ω(1,1,1) = ±i");
    auto m = ftc_model<S>(w.imag() > 0 ? 1 : -1);
    PlaquetteOptions p;
    p.alpha = a;
    p.beta = parse_unit(beta);
    p.berezin = axiom_options(g).mpo.berezin;
    auto summary = ftc_check(m, p, axiom_options(g));
    out.emit(ftc_json(summary, alpha, beta));
    return summary.pass() ? ok : failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fermionic MPO-injective PEPS verification"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--arith", g.arith, "exact or float arithmetic")->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--tol", g.tol, "float comparison tolerance");
    app.add_option("--proj-norm", g.proj_norm, "P = (1/|G|)ΣV(g) when on")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--berezin-sign", g.berezin, "sign of ∫dθ̄dθ θθ̄ on network bonds")->check(CLI::IsMember({"+", "-"}));
    app.add_option("--json", g.json_out, "also write the report lines to this file");

    std::string model = "ftc+";
    auto* verify = app.add_subcommand("verify", "group, 2-cocycle and graded pentagon checks");
    verify->add_option("model", model, "builtin name or model JSON")->required();

    std::string region, suite = "all";
    bool mutate_y = false;
    auto* axioms = app.add_subcommand("axioms", "projector, representation, symmetry, injectivity, concatenation");
    axioms->add_option("model", model, "builtin name or model JSON")->required();
    axioms->add_option("--region", region, "region JSON; all its triangles form the region");
    axioms->add_option("--suite", suite, "minimal or all")->check(CLI::IsMember({"minimal", "all"}));
    axioms->add_flag("--mutate-y", mutate_y, "flip the sign of every nontrivial Y entry");

    auto* degen = app.add_subcommand("degeneracy", "torus ground-state degeneracy by counting and by rank");
    degen->add_option("model", model, "builtin name or model JSON")->required();

    std::string group = "z2", s_ref = "zero";
    int roots = 2;
    auto* solve = app.add_subcommand("solve-pentagon", "all normalized graded 3-cocycles with root-of-unity values");
    solve->add_option("--group", group, "z2, z3, z4, z2xz2, s3, trivial or a model JSON");
    solve->add_option("--s", s_ref, "zero, ftc or a JSON file with an 's' table");
    solve->add_option("--roots", roots, "values are roots-th roots of unity")->check(CLI::PositiveNumber);

    std::string alpha = "+i", beta = "-i", tensors;
    auto* ftc = app.add_subcommand("ftc-check", "fermionic toric code end to end");
    ftc->add_option("--alpha", alpha, "plaquette α: +i or -i");
    ftc->add_option("--beta", beta, "gauge β: +i, -i, +1 or -1");
    ftc->add_option("--tensors", tensors, "ω(1,1,1) of the tensors, defaults to α");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : input_error;
    }
    float_tolerance() = g.tol;

    Output out;
    int rc = ok;
    try {
        const bool exact = g.arith == "exact";
        if (*verify) {
            auto input = load_model(model);
            rc = exact ? cmd_verify<GaussRational>(input, out) : cmd_verify<Complex>(input, out);
        } else if (*axioms) {
            auto input = load_model(model);
            rc = exact ? cmd_axioms<GaussRational>(input, g, region, suite, mutate_y, out)
                       : cmd_axioms<Complex>(input, g, region, suite, mutate_y, out);
        } else if (*degen) {
            auto input = load_model(model);
            rc = exact ? cmd_degeneracy<GaussRational>(input, g, out) : cmd_degeneracy<Complex>(input, g, out);
        } else if (*solve) {
            rc = cmd_solve(group, s_ref, roots, out);
        } else if (*ftc) {
            rc = exact ? cmd_ftc<GaussRational>(alpha, beta, tensors, g, out) : cmd_ftc<Complex>(alpha, beta, tensors, g, out);
        }
        out.write(g.json_out);
    } catch (const GroupError& e) {
        out.emit(with_schema({{"error", "group"}, {"message", e.what()}, {"witness", e.witness}}));
        rc = input_error;
    } catch (const ParseError& e) {
        out.emit(with_schema({{"error", "parse"}, {"message", e.what()}}));
        rc = input_error;
    } catch (const InexactValue& e) {
        out.emit(with_schema({{"error", "inexact"}, {"message", std::string(e.what()) + "; use --arith float"}}));
        rc = input_error;
    } catch (const SearchSpaceTooLarge& e) {
        out.emit(with_schema({{"error", "search-space"}, {"message", e.what()}}));
        rc = input_error;
    } catch (const RegionError& e) {
        out.emit(with_schema({{"error", "region"}, {"message", e.what()}}));
        rc = input_error;
    } catch (const json::exception& e) {
        out.emit(with_schema({{"error", "parse"}, {"message", e.what()}}));
        rc = input_error;
    } catch (const std::exception& e) {
        out.emit(with_schema({{"error", "internal"}, {"message", e.what()}}));
        rc = failed;
    }
    if (rc != ok) {
        try {
            out.write(g.json_out);
        } catch (const std::exception&) {
        }
    }
    return rc;
}
