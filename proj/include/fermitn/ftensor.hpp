#pragma once

#include "fermitn/grassmann.hpp"
#include "fermitn/model.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fermitn {

enum class LegRole { physical, virtual_in, virtual_out };
enum class ModeRole { physical, virtual_mode };
enum class Orientation { plus, minus };

inline const char* to_string(Orientation o) { return o == Orientation::plus ? "+" : "-"; }

struct Leg {
    std::string name;
    LegRole role = LegRole::virtual_in;
    int dim = 0;
};

struct ParityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LegMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SignatureMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndexHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = v.size();
        for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 1);
        return h;
    }
};

// Bosonic legs plus Grassmann-valued entries. Entries are stored sparsely by index tuple.
template <class S>
class FermionicTensor {
public:
    using Index = std::vector<int>;
    using Element = Grassmann<S>;
    using Entries = std::map<Index, Element>;

    FermionicTensor() = default;
    explicit FermionicTensor(std::vector<Leg> legs, std::map<std::uint32_t, ModeRole> modes = {})
        : legs_(std::move(legs)), modes_(std::move(modes)) {
        std::set<std::string> names;
        for (const auto& l : legs_)
            if (!names.insert(l.name).second) throw LegMismatch("duplicate leg '" + l.name + "'");
    }

    // Tensor with no legs holding a single scalar.
    static FermionicTensor scalar(const S& c) {
        FermionicTensor t;
        t.accumulate({}, Element(c));
        return t;
    }

    const std::vector<Leg>& legs() const { return legs_; }
    const std::map<std::uint32_t, ModeRole>& modes() const { return modes_; }
    const Entries& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }

    int leg_position(const std::string& name) const {
        for (std::size_t i = 0; i < legs_.size(); ++i)
            if (legs_[i].name == name) return static_cast<int>(i);
        return -1;
    }
    bool has_leg(const std::string& name) const { return leg_position(name) >= 0; }
    std::vector<std::string> leg_names() const {
        std::vector<std::string> n;
        for (const auto& l : legs_) n.push_back(l.name);
        return n;
    }

    void declare_mode(std::uint32_t id, ModeRole role) { modes_[id] = role; }

    void accumulate(const Index& idx, const Element& e) {
        if (idx.size() != legs_.size()) throw LegMismatch("index arity does not match legs");
        if (e.is_zero()) return;
        auto [it, inserted] = entries_.try_emplace(idx, e);
        if (!inserted) {
            it->second += e;
            if (it->second.is_zero()) entries_.erase(it);
        }
    }

    Element at(const Index& idx) const {
        auto it = entries_.find(idx);
        return it == entries_.end() ? Element() : it->second;
    }

    // Every entry must be even for contraction order to be immaterial.
    void check_parity() const {
        for (const auto& [idx, e] : entries_)
            if (!e.is_even()) throw ParityViolation(std::string("entry has ") + to_string(e.parity()) + " parity: " + e.str());
    }

    // Every generator must be declared.
    bool modes_declared() const {
        for (const auto& [idx, e] : entries_)
            for (auto m : e.modes())
                if (!modes_.count(m)) return false;
        return true;
    }

    FermionicTensor& operator*=(const S& c) {
        Entries out;
        for (auto& [idx, e] : entries_) {
            Element x = e * c;
            if (!x.is_zero()) out.emplace(idx, std::move(x));
        }
        entries_ = std::move(out);
        return *this;
    }

    Entries& entries_mut() { return entries_; }
    std::vector<Leg>& legs_mut() { return legs_; }
    std::map<std::uint32_t, ModeRole>& modes_mut() { return modes_; }

private:
    std::vector<Leg> legs_;
    std::map<std::uint32_t, ModeRole> modes_;
    Entries entries_;
};

// Product with same-named legs identified (kept open).
template <class S>
FermionicTensor<S> join(const FermionicTensor<S>& a, const FermionicTensor<S>& b) {
    std::vector<Leg> legs = a.legs();
    std::vector<int> a_shared, b_shared, b_rest;
    for (std::size_t j = 0; j < b.legs().size(); ++j) {
        const auto& lb = b.legs()[j];
        int i = a.leg_position(lb.name);
        if (i >= 0) {
            if (a.legs()[i].dim != lb.dim) throw LegMismatch("leg '" + lb.name + "' has mismatched dimension");
            a_shared.push_back(i);
            b_shared.push_back(static_cast<int>(j));
        } else {
            b_rest.push_back(static_cast<int>(j));
            legs.push_back(lb);
        }
    }
    auto modes = a.modes();
    for (const auto& [id, role] : b.modes()) modes[id] = role;
    FermionicTensor<S> out(std::move(legs), std::move(modes));

    std::unordered_map<std::vector<int>, std::vector<const std::pair<const std::vector<int>, Grassmann<S>>*>, IndexHash>
        groups;
    std::vector<int> key;
    for (const auto& entry : b.entries()) {
        key.clear();
        for (int j : b_shared) key.push_back(entry.first[j]);
        groups[key].push_back(&entry);
    }
    std::vector<int> idx;
    for (const auto& [ia, ea] : a.entries()) {
        key.clear();
        for (int i : a_shared) key.push_back(ia[i]);
        auto it = groups.find(key);
        if (it == groups.end()) continue;
        for (const auto* eb : it->second) {
            idx = ia;
            for (int j : b_rest) idx.push_back(eb->first[j]);
            out.accumulate(idx, ea * eb->second);
        }
    }
    return out;
}

template <class S>
FermionicTensor<S> sum_legs(const FermionicTensor<S>& t, const std::vector<std::string>& names) {
    std::vector<int> keep;
    std::vector<Leg> legs;
    std::set<std::string> drop(names.begin(), names.end());
    for (const auto& n : names)
        if (!t.has_leg(n)) throw LegMismatch("cannot sum missing leg '" + n + "'");
    for (std::size_t i = 0; i < t.legs().size(); ++i)
        if (!drop.count(t.legs()[i].name)) {
            keep.push_back(static_cast<int>(i));
            legs.push_back(t.legs()[i]);
        }
    FermionicTensor<S> out(std::move(legs), t.modes());
    std::vector<int> idx;
    for (const auto& [i, e] : t.entries()) {
        idx.clear();
        for (int k : keep) idx.push_back(i[k]);
        out.accumulate(idx, e);
    }
    return out;
}

// Bond contraction of the listed modes.
template <class S>
FermionicTensor<S> integrate_modes(const FermionicTensor<S>& t, const std::vector<std::uint32_t>& ids,
                                   BerezinSign conv = BerezinSign::minus) {
    auto modes = t.modes();
    for (auto id : ids) modes.erase(id);
    FermionicTensor<S> out(t.legs(), std::move(modes));
    for (const auto& [i, e] : t.entries()) {
        Grassmann<S> x = e;
        for (auto id : ids) {
            x = x.contract_bond(id, conv);
            if (x.is_zero()) break;
        }
        out.accumulate(i, x);
    }
    return out;
}

template <class S>
FermionicTensor<S> rename_legs(const FermionicTensor<S>& t, const std::map<std::string, std::string>& map) {
    FermionicTensor<S> out = t;
    for (auto& l : out.legs_mut()) {
        auto it = map.find(l.name);
        if (it != map.end()) l.name = it->second;
    }
    std::set<std::string> names;
    for (const auto& l : out.legs()) {
        if (!names.insert(l.name).second) throw LegMismatch("rename produces duplicate leg '" + l.name + "'");
    }
    return out;
}

template <class S>
FermionicTensor<S> rename_modes(const FermionicTensor<S>& t, const std::unordered_map<std::uint32_t, std::uint32_t>& map) {
    std::map<std::uint32_t, ModeRole> modes;
    for (const auto& [id, role] : t.modes()) {
        auto it = map.find(id);
        modes[it == map.end() ? id : it->second] = role;
    }
    FermionicTensor<S> out(t.legs(), std::move(modes));
    for (const auto& [i, e] : t.entries()) out.accumulate(i, e.rename_modes(map));
    return out;
}

// Which of θ/θ̄ a mode appears as in t: bit 0 for θ, bit 1 for θ̄.
template <class S>
int mode_usage(const FermionicTensor<S>& t, std::uint32_t id) {
    int u = 0;
    for (const auto& [i, e] : t.entries())
        for (const auto& [m, c] : e.terms())
            for (auto code : m)
                if (code / 2 == id) u |= (code & 1u) ? 2 : 1;
    return u;
}

struct BondMap {
    std::vector<std::pair<std::string, std::string>> boson;  // (leg of a, leg of b), summed
    std::vector<std::uint32_t> fermion;                      // modes shared as θ in one tensor and θ̄ in the other
};

template <class S>
FermionicTensor<S> contract(const FermionicTensor<S>& a, const FermionicTensor<S>& b, const BondMap& bonds,
                            BerezinSign conv = BerezinSign::minus) {
    std::map<std::string, std::string> rb;
    std::vector<std::string> summed;
    for (const auto& [la, lb] : bonds.boson) {
        if (!a.has_leg(la)) throw LegMismatch("missing leg '" + la + "'");
        if (!b.has_leg(lb)) throw LegMismatch("missing leg '" + lb + "'");
        rb[lb] = la;
        summed.push_back(la);
    }
    for (auto id : bonds.fermion) {
        int ua = mode_usage(a, id), ub = mode_usage(b, id);
        if ((ua & ub) != 0 || ua == 3 || ub == 3)
            throw LegMismatch("fermionic bond " + std::to_string(id) + " does not pair θ with θ̄");
    }
    auto j = join(a, rename_legs(b, rb));
    auto s = summed.empty() ? j : sum_legs(j, summed);
    auto out = integrate_modes(s, bonds.fermion, conv);
    out.check_parity();
    return out;
}

template <class S>
FermionicTensor<S> permute_legs(const FermionicTensor<S>& t, const std::vector<std::string>& order) {
    if (order.size() != t.legs().size()) throw SignatureMismatch("leg sets differ");
    std::vector<int> pos;
    std::vector<Leg> legs;
    for (const auto& n : order) {
        int p = t.leg_position(n);
        if (p < 0) throw SignatureMismatch("leg '" + n + "' missing");
        pos.push_back(p);
        legs.push_back(t.legs()[p]);
    }
    FermionicTensor<S> out(std::move(legs), t.modes());
    std::vector<int> idx(pos.size());
    for (const auto& [i, e] : t.entries()) {
        for (std::size_t k = 0; k < pos.size(); ++k) idx[k] = i[pos[k]];
        out.accumulate(idx, e);
    }
    return out;
}

// a + cb·b; b is permuted onto a's leg order.
template <class S>
FermionicTensor<S> add(const FermionicTensor<S>& a, const FermionicTensor<S>& b,
                       const S& cb = scalar_traits<S>::from_int(1)) {
    auto bp = permute_legs(b, a.leg_names());
    FermionicTensor<S> out = a;
    for (const auto& [id, role] : bp.modes()) out.declare_mode(id, role);
    for (const auto& [i, e] : bp.entries()) out.accumulate(i, e * cb);
    return out;
}

// Same legs and modes, no entries.
template <class S>
FermionicTensor<S> zero_like(const FermionicTensor<S>& t) {
    return FermionicTensor<S>(t.legs(), t.modes());
}

template <class S>
double max_deviation(const FermionicTensor<S>& a, const FermionicTensor<S>& b) {
    std::set<std::string> na, nb;
    for (const auto& l : a.legs()) na.insert(l.name);
    for (const auto& l : b.legs()) nb.insert(l.name);
    if (na != nb) throw SignatureMismatch("tensors have different legs");
    auto bp = permute_legs(b, a.leg_names());
    double d = 0;
    const Grassmann<S> zero;
    for (const auto& [i, e] : a.entries()) {
        auto it = bp.entries().find(i);
        d = std::max(d, max_deviation(e, it == bp.entries().end() ? zero : it->second));
    }
    for (const auto& [i, e] : bp.entries())
        if (!a.entries().count(i)) d = std::max(d, max_deviation(e, zero));
    return d;
}

template <class S>
bool tensor_equal(const FermionicTensor<S>& a, const FermionicTensor<S>& b) {
    double d = max_deviation(a, b);
    if constexpr (scalar_traits<S>::exact) return d == 0;
    else return d <= float_tolerance();
}

// ---- builders ----

struct TriangleLabels {
    std::array<std::string, 3> v{"v0", "v1", "v2"};
    std::array<std::string, 3> p{"p01", "p12", "p02"};
    std::array<std::uint32_t, 3> e{0, 1, 2};  // virtual modes on edges 01, 12, 02
    std::uint32_t phys = 3;
};

namespace detail {

template <class S>
FermionicTensor<S> triangle_shell(const Model<S>& m, const TriangleLabels& L) {
    const int n = m.order();
    std::vector<Leg> legs{{L.v[0], LegRole::virtual_in, n}, {L.v[1], LegRole::virtual_in, n},
                          {L.v[2], LegRole::virtual_in, n}, {L.p[0], LegRole::physical, n},
                          {L.p[1], LegRole::physical, n},   {L.p[2], LegRole::physical, n}};
    std::map<std::uint32_t, ModeRole> modes{{L.e[0], ModeRole::virtual_mode},
                                            {L.e[1], ModeRole::virtual_mode},
                                            {L.e[2], ModeRole::virtual_mode},
                                            {L.phys, ModeRole::physical}};
    return FermionicTensor<S>(std::move(legs), std::move(modes));
}

// Visits every vertex assignment with the derived physical edge values.
template <class F>
void for_triangle(const FiniteGroup& G, F f) {
    const int n = G.order();
    for (int v0 = 0; v0 < n; ++v0)
        for (int v1 = 0; v1 < n; ++v1)
            for (int v2 = 0; v2 < n; ++v2)
                f(v0, v1, v2, G.mul(G.inv(v0), v1), G.mul(G.inv(v1), v2), G.mul(G.inv(v0), v2));
}

}  // namespace detail

template <class S>
FermionicTensor<S> build_a(const Model<S>& m, Orientation o, const TriangleLabels& L = {}) {
    auto t = detail::triangle_shell(m, L);
    const auto& s = m.s;
    detail::for_triangle(m.G, [&](int v0, int v1, int v2, int p01, int p12, int p02) {
        std::vector<GeneratorId> raw;
        S w;
        if (o == Orientation::plus) {
            w = m.omega(v0, p01, p12);
            push_pow(raw, theta(L.phys), s(p01, p12));
            push_pow(raw, theta(L.e[2]), s(v0, p02));
            push_pow(raw, theta_bar(L.e[1]), s(v1, p12));
            push_pow(raw, theta_bar(L.e[0]), s(v0, p01));
        } else {
            w = m.omega_inv(v0, p01, p12);
            push_pow(raw, theta(L.e[0]), s(v0, p01));
            push_pow(raw, theta(L.e[1]), s(v1, p12));
            push_pow(raw, theta_bar(L.e[2]), s(v0, p02));
            push_pow(raw, theta_bar(L.phys), s(p01, p12));
        }
        t.accumulate({v0, v1, v2, p01, p12, p02}, Grassmann<S>::canonicalize(raw, w));
    });
    t.check_parity();
    return t;
}

// Pseudo-inverse; `norm` multiplies every entry (1/|G| makes ÃA the normalized projector).
template <class S>
FermionicTensor<S> build_a_tilde(const Model<S>& m, Orientation o, const TriangleLabels& L = {},
                                 const S& norm = scalar_traits<S>::from_int(1)) {
    auto t = detail::triangle_shell(m, L);
    const auto& s = m.s;
    detail::for_triangle(m.G, [&](int v0, int v1, int v2, int p01, int p12, int p02) {
        std::vector<GeneratorId> raw;
        S w;
        if (o == Orientation::plus) {
            w = m.omega_inv(v0, p01, p12);
            push_pow(raw, theta(L.e[0]), s(v0, p01));
            push_pow(raw, theta(L.e[1]), s(v1, p12));
            push_pow(raw, theta_bar(L.e[2]), s(v0, p02));
            push_pow(raw, theta_bar(L.phys), s(p01, p12));
        } else {
            w = m.omega(v0, p01, p12);
            push_pow(raw, theta(L.phys), s(p01, p12));
            push_pow(raw, theta(L.e[2]), s(v0, p02));
            push_pow(raw, theta_bar(L.e[1]), s(v1, p12));
            push_pow(raw, theta_bar(L.e[0]), s(v0, p01));
        }
        w = w * sign_pow<S>(s(v0, p02)) * norm;
        t.accumulate({v0, v1, v2, p01, p12, p02}, Grassmann<S>::canonicalize(raw, w));
    });
    t.check_parity();
    return t;
}

// T± on a ring edge between walk positions 0 and 1. T+ lives on an edge 0→1, T− on an edge 1→0.
struct TLabels {
    std::string ket0 = "v0", ket1 = "v1", bra0 = "w0", bra1 = "w1";
    std::uint32_t ket = 0, bra = 1, bond0 = 2, bond1 = 3;
};

template <class S>
FermionicTensor<S> build_t(const Model<S>& m, int g, Orientation o, const TLabels& L = {}) {
    const auto& G = m.G;
    const auto& s = m.s;
    const int n = m.order();
    FermionicTensor<S> t({{L.ket0, LegRole::virtual_in, n},
                          {L.ket1, LegRole::virtual_in, n},
                          {L.bra0, LegRole::virtual_out, n},
                          {L.bra1, LegRole::virtual_out, n}},
                         {{L.ket, ModeRole::virtual_mode},
                          {L.bra, ModeRole::virtual_mode},
                          {L.bond0, ModeRole::virtual_mode},
                          {L.bond1, ModeRole::virtual_mode}});
    for (int v0 = 0; v0 < n; ++v0)
        for (int v1 = 0; v1 < n; ++v1) {
            std::vector<GeneratorId> raw;
            S w;
            if (o == Orientation::plus) {
                int p = G.mul(G.inv(v0), v1);
                w = m.omega(g, v0, p);
                push_pow(raw, theta(L.ket), s(v0, p));
                push_pow(raw, theta(L.bond1), s(g, v1));
                push_pow(raw, theta_bar(L.bra), s(G.mul(g, v0), p));
                push_pow(raw, theta_bar(L.bond0), s(g, v0));
            } else {
                int p = G.mul(G.inv(v1), v0);
                w = m.omega_inv(g, v1, p);
                push_pow(raw, theta(L.bond1), s(g, v1));
                push_pow(raw, theta(L.bra), s(G.mul(g, v1), p));
                push_pow(raw, theta_bar(L.bond0), s(g, v0));
                push_pow(raw, theta_bar(L.ket), s(v1, p));
            }
            t.accumulate({v0, v1, G.mul(g, v0), G.mul(g, v1)}, Grassmann<S>::canonicalize(raw, w));
        }
    t.check_parity();
    return t;
}

enum class YMutation { none, flip_nontrivial };

// Diagonal sign (-1)^{s(w v^-1, v)} on ket v and bra w.
template <class S>
FermionicTensor<S> build_y(const Model<S>& m, const std::string& ket = "v", const std::string& bra = "w",
                           YMutation mut = YMutation::none) {
    const auto& G = m.G;
    const int n = m.order();
    FermionicTensor<S> t({{ket, LegRole::virtual_in, n}, {bra, LegRole::virtual_out, n}});
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
            int g = G.mul(w, G.inv(v));
            int e = m.s(g, v);
            if (mut == YMutation::flip_nontrivial && g != 0) ++e;
            t.accumulate({v, w}, Grassmann<S>(sign_pow<S>(e)));
        }
    return t;
}

}  // namespace fermitn
