#pragma once

#include "fermitn/groundstate.hpp"
#include "fermitn/lattice.hpp"

#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fermitn {

// ---- plaquette table ----

struct FermionOp {
    int label = 1;  // c_1 .. c_6
    bool dagger = false;
};

struct PlaquetteRow {
    const char* spins;  // g_1 .. g_6
    int sign;
    int alpha_pow;
    int beta_pow;
    std::vector<FermionOp> ops;  // applied right to left
};

inline const std::vector<PlaquetteRow>& plaquette_rows() {
    auto c = [](int k) { return FermionOp{k, true}; };
    auto a = [](int k) { return FermionOp{k, false}; };
    static const std::vector<PlaquetteRow> rows{
        {"000000", -1, 1, -1, {c(3), c(6)}},
        {"100000", 1, 0, 0, {c(3), a(1)}},
        {"010000", 1, 0, -2, {c(1), c(2), c(3), c(6)}},
        {"001000", 1, 0, 0, {c(6), a(2)}},
        {"000100", 1, 0, 0, {c(6), a(4)}},
        {"000010", -1, 0, -2, {c(3), c(4), c(5), c(6)}},
        {"000001", 1, 0, 0, {c(3), a(5)}},
        {"110000", -1, 0, -1, {c(2), c(3)}},
        {"011000", -1, 0, -1, {c(1), c(6)}},
        {"001100", -1, 0, 1, {c(6), a(4), a(3), a(2)}},
        {"000110", 1, 0, -1, {c(5), c(6)}},
        {"000011", -1, 0, -1, {c(3), c(4)}},
        {"100001", 1, 0, 1, {c(3), a(6), a(5), a(1)}},
        {"101000", -1, 1, 1, {a(2), a(1)}},
        {"010100", 1, 1, -1, {c(1), c(2), c(6), a(4)}},
        {"001010", -1, 1, -1, {c(4), c(5), c(6), a(2)}},
        {"000101", 1, 1, 1, {a(5), a(4)}},
        {"100010", -1, 1, -1, {c(3), c(4), c(5), a(1)}},
        {"010001", 1, 1, -1, {c(1), c(2), c(3), a(5)}},
        {"100100", -1, 1, 1, {a(4), a(1)}},
        // β-power (#annihilators − #creators)/2 like every other row; the sign keeps the closed-loop factor trivial.
        {"010010", -1, 1, -3, {c(1), c(2), c(3), c(4), c(5), c(6)}},
        {"001001", 1, 1, 1, {a(5), a(2)}},
        {"000111", 1, 0, 0, {}},
        {"001110", -1, 0, 0, {c(5), c(6), a(3), a(2)}},
        {"011100", 1, 0, 0, {c(1), c(6), a(4), a(3)}},
        {"101100", 1, 1, 2, {a(4), a(3), a(2), a(1)}},
        {"010110", 1, 1, -2, {c(1), c(2), c(5), c(6)}},
        {"001011", -1, 1, 0, {c(4), a(2)}},
        {"100101", -1, 1, 2, {a(6), a(5), a(4), a(1)}},
        {"110010", 1, 1, -2, {c(2), c(3), c(4), c(5)}},
        {"011001", -1, 1, 0, {c(1), a(5)}},
        // Annihilates c1, c2 and creates c4, c5, which only fits spins 101010; its conjugate lands on 010101.
        {"101010", -1, 0, 0, {c(4), c(5), a(2), a(1)}},
    };
    return rows;
}

inline int spin_bits(const char* s) {
    int b = 0;
    for (int k = 0; k < 6; ++k)
        if (s[k] == '1') b |= 1 << k;
    return b;
}

// Hexagon Hilbert space basis: index = spins | (fermion mask << 6). Spin k sits at bit k-1; fermion c_k sits at
// bit order-position of k, so the Jordan-Wigner string follows `order`.
struct FockLayout {
    std::array<int, 6> order{1, 2, 3, 4, 5, 6};  // order[j] = label at position j

    int position(int label) const {
        for (int j = 0; j < 6; ++j)
            if (order[j] == label) return j;
        throw std::invalid_argument("fermion label " + std::to_string(label) + " missing from order");
    }
    static int index(int spins, int mask) { return spins | (mask << 6); }
    static int spins_of(int idx) { return idx & 63; }
    static int mask_of(int idx) { return idx >> 6; }
};

// Applies ops right to left with sign (−1)^{occupied modes below}; nullopt if the state is annihilated.
inline std::optional<std::pair<int, int>> apply_fermion_ops(const std::vector<FermionOp>& ops, int mask,
                                                            const FockLayout& F) {
    int sign = 1;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        int bit = 1 << F.position(it->label);
        bool occ = mask & bit;
        if (it->dagger == occ) return std::nullopt;
        if (__builtin_popcount(mask & (bit - 1)) & 1) sign = -sign;
        mask ^= bit;
    }
    return std::make_pair(mask, sign);
}

// Sparse operator on the 4096-dimensional hexagon space, stored by column.
template <class S>
struct FockOperator {
    static constexpr int dim = 1 << 12;
    std::vector<std::map<int, S>> cols = std::vector<std::map<int, S>>(dim);

    void add(int row, int col, const S& v) {
        auto& c = cols[col];
        auto [it, ins] = c.try_emplace(row, v);
        if (!ins) it->second += v;
        if (scalar_traits<S>::is_zero(it->second)) c.erase(it);
    }
    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& c : cols) n += c.size();
        return n;
    }
};

template <class S>
FockOperator<S> operator*(const FockOperator<S>& A, const FockOperator<S>& B) {
    FockOperator<S> C;
    for (int j = 0; j < FockOperator<S>::dim; ++j)
        for (const auto& [k, b] : B.cols[j])
            for (const auto& [i, a] : A.cols[k]) C.add(i, j, a * b);
    return C;
}

template <class S>
FockOperator<S> operator+(const FockOperator<S>& A, const FockOperator<S>& B) {
    FockOperator<S> C = A;
    for (int j = 0; j < FockOperator<S>::dim; ++j)
        for (const auto& [i, b] : B.cols[j]) C.add(i, j, b);
    return C;
}

template <class S>
FockOperator<S> scaled(const FockOperator<S>& A, const S& c) {
    FockOperator<S> C;
    for (int j = 0; j < FockOperator<S>::dim; ++j)
        for (const auto& [i, a] : A.cols[j]) C.add(i, j, a * c);
    return C;
}

template <class S>
FockOperator<S> adjoint(const FockOperator<S>& A) {
    FockOperator<S> C;
    for (int j = 0; j < FockOperator<S>::dim; ++j)
        for (const auto& [i, a] : A.cols[j]) C.add(j, i, scalar_traits<S>::conj(a));
    return C;
}

template <class S>
double max_deviation(const FockOperator<S>& A, const FockOperator<S>& B) {
    double d = 0;
    for (int j = 0; j < FockOperator<S>::dim; ++j) {
        for (const auto& [i, a] : A.cols[j]) {
            auto it = B.cols[j].find(i);
            d = std::max(d, scalar_traits<S>::abs(it == B.cols[j].end() ? a : a - it->second));
        }
        for (const auto& [i, b] : B.cols[j])
            if (!A.cols[j].count(i)) d = std::max(d, scalar_traits<S>::abs(b));
    }
    return d;
}

namespace detail {
template <class S>
S int_pow(const S& x, int e) {
    S r = scalar_traits<S>::from_int(1);
    S b = e < 0 ? scalar_traits<S>::from_int(1) / x : x;
    for (int i = 0; i < std::abs(e); ++i) r = r * b;
    return r;
}
}  // namespace detail

struct PlaquetteEntry {
    int spins_in = 0;
    int spins_out = 0;
    std::vector<FermionOp> ops;
};

// The 32 listed rows plus their Hermitian conjugates on the complementary spin rows, each with its coefficient.
template <class S>
std::vector<std::pair<PlaquetteEntry, S>> plaquette_entries(const S& alpha, const S& beta) {
    if (scalar_traits<S>::is_zero(beta)) throw std::invalid_argument("beta must be nonzero");
    std::vector<std::pair<PlaquetteEntry, S>> out;
    for (const auto& r : plaquette_rows()) {
        int in = spin_bits(r.spins);
        S coef = scalar_traits<S>::from_int(r.sign) * detail::int_pow(alpha, r.alpha_pow) *
                 detail::int_pow(beta, r.beta_pow);
        out.push_back({{in, in ^ 63, r.ops}, coef});
        std::vector<FermionOp> adj;
        for (auto it = r.ops.rbegin(); it != r.ops.rend(); ++it) adj.push_back({it->label, !it->dagger});
        out.push_back({{in ^ 63, in, adj}, scalar_traits<S>::conj(coef)});
    }
    return out;
}

// B_p = Σ p F_p |g ⊕ 1⟩⟨g|, flipping all six spins.
template <class S>
FockOperator<S> build_plaquette(const S& alpha, const S& beta, const FockLayout& F = {}) {
    FockOperator<S> B;
    for (const auto& [e, coef] : plaquette_entries(alpha, beta))
        for (int mask = 0; mask < 64; ++mask) {
            auto r = apply_fermion_ops(e.ops, mask, F);
            if (!r) continue;
            B.add(FockLayout::index(e.spins_out, r->first), FockLayout::index(e.spins_in, mask),
                  coef * scalar_traits<S>::from_int(r->second));
        }
    return B;
}

// ---- hexagon patch ----

// Fan around the centre z: triangle t lies between directions t and t+1 (a, b, c, −a, −b, −c).
struct Hexagon {
    TriLattice lattice;
    int center = 0;
    std::array<int, 6> outer{};        // w_d = z + direction d
    std::array<int, 6> inner_edge{};   // z-w_d
    std::array<int, 6> outer_edge{};   // w_t-w_{t+1}
    std::array<int, 6> fan{};          // triangle t
    FockLayout fock;
    ModeLayout modes;

    // Spin k lives on inner edge direction 6−k; fermion c_k on triangle (5−k) mod 6.
    static int spin_direction(int k) { return (6 - k) % 6; }
    static int fermion_triangle(int k) { return ((5 - k) % 6 + 6) % 6; }
    std::vector<int> region() const { return {fan.begin(), fan.end()}; }
};

inline Hexagon build_hexagon_geometry(const FockLayout& F = {}) {
    Hexagon H;
    H.lattice = triangular_patch(-1, 1, -1, 1);
    const auto& L = H.lattice;
    H.center = L.vertex(0, 0);
    const std::array<std::pair<int, int>, 6> dir{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
    for (int d = 0; d < 6; ++d) H.outer[d] = L.vertex(dir[d].first, dir[d].second);
    for (int d = 0; d < 6; ++d) {
        H.inner_edge[d] = L.graph.edge_between(H.center, H.outer[d]);
        H.outer_edge[d] = L.graph.edge_between(H.outer[d], H.outer[(d + 1) % 6]);
    }
    H.fan = {L.U(0, 0), L.D(-1, 0), L.U(-1, 0), L.D(-1, -1), L.U(0, -1), L.D(0, -1)};
    H.fock = F;
    // Physical modes first, numbered by Fock position.
    std::vector<int> phys;
    for (int j = 0; j < 6; ++j) phys.push_back(H.fan[Hexagon::fermion_triangle(F.order[j])]);
    for (int t = 0; t < static_cast<int>(L.graph.triangles.size()); ++t)
        if (std::find(phys.begin(), phys.end(), t) == phys.end()) phys.push_back(t);
    H.modes = ModeLayout(L.graph, phys);
    return H;
}

// Hexagon state for one boundary configuration: amplitudes keyed by (Fock index, boundary monomial).
template <class S>
using HexState = std::map<std::pair<int, Monomial>, S>;

template <class S>
void add_to(HexState<S>& st, const std::pair<int, Monomial>& key, const S& v) {
    auto [it, ins] = st.try_emplace(key, v);
    if (!ins) it->second += v;
    if (scalar_traits<S>::is_zero(it->second)) st.erase(it);
}

template <class S>
double max_deviation(const HexState<S>& a, const HexState<S>& b) {
    double d = 0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        d = std::max(d, scalar_traits<S>::abs(it == b.end() ? v : v - it->second));
    }
    for (const auto& [k, v] : b)
        if (!a.count(k)) d = std::max(d, scalar_traits<S>::abs(v));
    return d;
}

// A_hex with the centre vertex open (leg v<z>) and all inner bonds contracted.
template <class S>
FermionicTensor<S> hexagon_tensor(const Model<S>& m, const Hexagon& H, BerezinSign conv = BerezinSign::minus) {
    return region_tensor(m, H.lattice.graph, H.region(), H.modes, {false, conv});
}

// Slice of A_hex at boundary values w (bit d = w_d) and centre value v0 (-1 sums it), mapped to Fock space:
// θ_{i1}…θ_{ik} on physical modes ↦ c†_{i1}…c†_{ik}|vac⟩, θ̄ treated as θ.
template <class S>
HexState<S> hexagon_state(const FermionicTensor<S>& A, const Hexagon& H, int w, int v0) {
    const int zc = A.leg_position(ket_leg(H.center));
    std::array<int, 6> wl{}, pl{};
    for (int d = 0; d < 6; ++d) {
        wl[d] = A.leg_position(ket_leg(H.outer[d]));
        pl[d] = A.leg_position(phys_leg(H.inner_edge[d]));
    }
    HexState<S> st;
    for (const auto& [idx, e] : A.entries()) {
        if (v0 >= 0 && idx[zc] != v0) continue;
        bool match = true;
        for (int d = 0; d < 6; ++d) match = match && idx[wl[d]] == ((w >> d) & 1);
        if (!match) continue;
        int spins = 0;
        for (int k = 1; k <= 6; ++k)
            if (idx[pl[Hexagon::spin_direction(k)]] != 0) spins |= 1 << (k - 1);
        for (const auto& [mono, c] : e.terms()) {
            int mask = 0;
            Monomial rest;
            for (auto code : mono) {
                auto gid = GeneratorId::from_code(code);
                if (gid.mode < 6) mask |= 1 << gid.mode;
                else rest.push_back(code);
            }
            add_to(st, {FockLayout::index(spins, mask), rest}, c);
        }
    }
    return st;
}

template <class S>
HexState<S> apply_operator(const FockOperator<S>& O, const HexState<S>& st) {
    HexState<S> out;
    for (const auto& [key, v] : st)
        for (const auto& [row, a] : O.cols[key.first]) add_to(out, {row, key.second}, a * v);
    return out;
}

// Occupation of c_k required by its two adjacent spins (vertex constraint).
inline int required_occupation(const Hexagon& H, int spins, int k) {
    const auto& g = H.lattice.graph;
    int t = H.fan[Hexagon::fermion_triangle(k)];
    auto r = triangle_roles(g, t);
    // Z2 values with the centre at 0 and w_d = spin on direction d.
    auto value = [&](int x) {
        if (x == H.center) return 0;
        for (int d = 0; d < 6; ++d)
            if (H.outer[d] == x) {
                for (int kk = 1; kk <= 6; ++kk)
                    if (Hexagon::spin_direction(kk) == d) return (spins >> (kk - 1)) & 1;
            }
        return 0;
    };
    int v0 = value(r->v[0]), v1 = value(r->v[1]), v2 = value(r->v[2]);
    return ftc_s()(v0 ^ v1, v1 ^ v2);
}

inline bool vertex_consistent(const Hexagon& H, int idx) {
    int spins = FockLayout::spins_of(idx), mask = FockLayout::mask_of(idx);
    for (int k = 1; k <= 6; ++k)
        if (((mask >> H.fock.position(k)) & 1) != required_occupation(H, spins, k)) return false;
    return true;
}

template <class S>
FockOperator<S> vertex_projector(const Hexagon& H) {
    FockOperator<S> P;
    for (int i = 0; i < FockOperator<S>::dim; ++i)
        if (vertex_consistent(H, i)) P.add(i, i, scalar_traits<S>::from_int(1));
    return P;
}

// Q_p = Π_v (1 + B_p) Π_v / 2.
template <class S>
FockOperator<S> plaquette_projector(const FockOperator<S>& B, const Hexagon& H) {
    auto Pv = vertex_projector<S>(H);
    return scaled(Pv + Pv * B * Pv, scalar_traits<S>::ratio(1, 2));
}

struct ConfigResult {
    int boundary = 0;
    bool pass = true;
    double max_deviation = 0;
};

struct PlaquetteReport {
    bool pass = true;
    double max_deviation = 0;
    std::vector<ConfigResult> configs;
    void merge(int w, double dev, bool ok) {
        configs.push_back({w, ok, dev});
        pass = pass && ok;
        max_deviation = std::max(max_deviation, dev);
    }
};

template <class S>
bool within_tolerance(double dev) {
    if constexpr (scalar_traits<S>::exact) return dev == 0;
    else return dev <= float_tolerance();
}

struct PlaquetteOptions {
    std::optional<Complex> alpha;  // defaults to ω(1,1,1)
    Complex beta{0, -1};
    FockLayout fock;
    BerezinSign berezin = BerezinSign::minus;
};

template <class S>
S scalar_from(const Complex& z) {
    if constexpr (scalar_traits<S>::exact) {
        auto r = std::round(z.real()), i = std::round(z.imag());
        if (std::abs(z.real() - r) > 1e-12 || std::abs(z.imag() - i) > 1e-12)
            throw InexactValue("value is not a Gaussian integer in exact mode");
        return scalar_traits<S>::from_rational_pair(Rational(static_cast<long>(r)), Rational(static_cast<long>(i)));
    } else {
        return z;
    }
}

// Q_p A_hex = A_hex (centre summed) for all 64 boundary configurations.
template <class S>
PlaquetteReport verify_plaquette_eigenstate(const Model<S>& m, const PlaquetteOptions& opt = {}) {
    auto H = build_hexagon_geometry(opt.fock);
    S alpha = opt.alpha ? scalar_from<S>(*opt.alpha) : m.omega(1, 1, 1);
    auto Q = plaquette_projector(build_plaquette(alpha, scalar_from<S>(opt.beta), H.fock), H);
    auto A = hexagon_tensor(m, H, opt.berezin);
    PlaquetteReport rep;
    for (int w = 0; w < 64; ++w) {
        auto st = hexagon_state(A, H, w, -1);
        double d = max_deviation(apply_operator(Q, st), st);
        rep.merge(w, d, within_tolerance<S>(d) && !st.empty());
    }
    return rep;
}

// B_p A_hex(v0) = A_hex(1 − v0): the flip of the centre value is absorbed by the plaquette operator.
template <class S>
PlaquetteReport verify_loop_insertion(const Model<S>& m, int v0, const PlaquetteOptions& opt = {}) {
    auto H = build_hexagon_geometry(opt.fock);
    S alpha = opt.alpha ? scalar_from<S>(*opt.alpha) : m.omega(1, 1, 1);
    auto B = build_plaquette(alpha, scalar_from<S>(opt.beta), H.fock);
    auto A = hexagon_tensor(m, H, opt.berezin);
    PlaquetteReport rep;
    for (int w = 0; w < 64; ++w) {
        auto lhs = apply_operator(B, hexagon_state(A, H, w, v0));
        auto rhs = hexagon_state(A, H, w, 1 - v0);
        double d = max_deviation(lhs, rhs);
        rep.merge(w, d, within_tolerance<S>(d));
    }
    return rep;
}

// Every nonzero amplitude of A_hex obeys the vertex constraint.
template <class S>
bool verify_vertex_consistency(const Model<S>& m, const FockLayout& F = {}) {
    auto H = build_hexagon_geometry(F);
    auto A = hexagon_tensor(m, H);
    for (int w = 0; w < 64; ++w)
        for (const auto& [key, v] : hexagon_state(A, H, w, -1))
            if (!vertex_consistent(H, key.first)) return false;
    return true;
}

struct FtcSummary {
    std::string model;
    bool pentagon_ok = false;
    bool axioms_ok = false;
    PlaquetteReport plaquette;
    int degeneracy = 0;
    int degeneracy_rank = 0;
    bool pass() const { return pentagon_ok && axioms_ok && plaquette.pass && degeneracy == 4 && degeneracy_rank == 4; }
};

template <class S>
FtcSummary ftc_check(const Model<S>& m, const PlaquetteOptions& popt = {}, const AxiomOptions& aopt = {}) {
    FtcSummary out;
    out.model = m.name;
    out.pentagon_ok = !check_graded_pentagon(m.G, m.s, m.omega).has_value();
    out.axioms_ok = concat_case_suite(m, aopt).pass();
    out.plaquette = verify_plaquette_eigenstate(m, popt);
    out.degeneracy = degeneracy(m);
    out.degeneracy_rank = degeneracy_by_rank(m, aopt.mpo);
    return out;
}

}  // namespace fermitn
