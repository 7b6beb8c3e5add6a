#pragma once

#include "fermitn/mpo.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermitn {

struct ConditionViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InternalMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

// ^αg = α⁻¹gα
inline int conj_by_inverse(const FiniteGroup& G, int alpha, int g) { return G.mul(G.inv(alpha), g, alpha); }
// g^k = kgk⁻¹
inline int conj_by(const FiniteGroup& G, int k, int g) { return G.conj(k, g); }

inline bool admissible_pair(const FiniteGroup& G, const Cocycle2& s, int g, int h) {
    return G.commute(g, h) && s(g, h) == s(h, g);
}

template <class S>
S lambda_coeff(const Model<S>& m, int a, int g, int h) {
    const auto& G = m.G;
    const auto& s = m.s;
    const auto& w = m.omega;
    int ag1 = conj_by_inverse(G, a, G.inv(g));
    int ah1 = conj_by_inverse(G, a, G.inv(h));
    S num = w(h, g, a) * w(h, G.mul(g, a), ag1);
    S den = w(g, h, a) * w(g, G.mul(h, a), ah1);
    int e1 = s(G.mul(g, h, a), ah1) * s(G.mul(g, a), ag1) + s(G.mul(h, g, a), ag1) * s(G.mul(h, a), ah1);
    int e2 = (s(h, a) + s(G.mul(h, a), ah1)) * (s(g, a) + s(G.mul(g, a), ag1)) + s(G.mul(h, g), a);
    return num / den * sign_pow<S>(e1 + e2);
}

template <class S>
S eta(const Model<S>& m, int g, int h, int k) {
    const auto& G = m.G;
    const auto& s = m.s;
    const auto& w = m.omega;
    int ki = G.inv(k);
    int gk = conj_by(G, k, g), hk = conj_by(G, k, h);
    S num = w(g, ki, hk) * w(ki, hk, gk) * w(h, g, ki);
    S den = w(h, ki, gk) * w(ki, gk, hk) * w(g, h, ki);
    int kh = G.mul(k, h), kg = G.mul(k, g), kgh = G.mul(k, g, h);
    int e = (s(ki, kh) + s(kh, ki)) * (s(ki, kg) + s(kg, ki)) + s(ki, kgh) + s(kgh, ki);
    return num / den * sign_pow<S>(e);
}

// Minimal torus: vertices x0 = α, x1 = gα, x2 = ghα, x3 = hα on legs v0..v3.
struct TorusModes {
    static constexpr std::uint32_t e10 = 0, e21 = 1, e23 = 2, e30 = 3;
    static constexpr std::uint32_t bra_offset = 4, mid_offset = 8, bond_offset = 12;
};

// Ring x2 → x1 → x0 → x3 → x2 with T+ on the first two edges, T− on the last two and Y at x2.
inline MpoRing torus_ring() {
    using T = TorusModes;
    auto edge = [](int a, int b, bool par, std::uint32_t e) {
        return RingEdge{a, b, par, e, e + T::bra_offset, e + T::mid_offset};
    };
    MpoRing r;
    r.vertices = {2, 1, 0, 3};
    r.edges = {edge(2, 1, true, T::e21), edge(1, 0, true, T::e10), edge(0, 3, false, T::e30),
               edge(3, 2, false, T::e23)};
    r.y_vertices = {2};
    for (int x = 0; x < 4; ++x) r.bond_mode[x] = T::bond_offset + static_cast<std::uint32_t>(x);
    return r;
}

template <class S>
FermionicTensor<S> torus_shell(const Model<S>& m) {
    using T = TorusModes;
    const int n = m.order();
    std::vector<Leg> legs;
    for (int x = 0; x < 4; ++x) legs.push_back({ket_leg(x), LegRole::virtual_in, n});
    return FermionicTensor<S>(legs, {{T::e10, ModeRole::virtual_mode},
                                     {T::e21, ModeRole::virtual_mode},
                                     {T::e23, ModeRole::virtual_mode},
                                     {T::e30, ModeRole::virtual_mode}});
}

template <class S>
FermionicTensor<S> build_m(const Model<S>& m, int g, int h) {
    using T = TorusModes;
    const auto& G = m.G;
    const auto& s = m.s;
    if (!admissible_pair(G, s, g, h))
        throw ConditionViolated("M(" + std::to_string(g) + "," + std::to_string(h) +
                                ") needs [g,h] = 0 and s(g,h) = s(h,g)");
    auto M = torus_shell(m);
    for (int a = 0; a < m.order(); ++a) {
        int ag1 = conj_by_inverse(G, a, G.inv(g));
        int ah1 = conj_by_inverse(G, a, G.inv(h));
        std::vector<GeneratorId> raw;
        push_pow(raw, theta(T::e10), s(G.mul(g, a), ag1));
        push_pow(raw, theta(T::e21), s(G.mul(h, g, a), ah1));
        push_pow(raw, theta_bar(T::e23), s(G.mul(g, h, a), ag1));
        push_pow(raw, theta_bar(T::e30), s(G.mul(h, a), ah1));
        M.accumulate({a, G.mul(g, a), G.mul(g, h, a), G.mul(h, a)},
                     Grassmann<S>::canonicalize(raw, lambda_coeff(m, a, g, h)));
    }
    M.check_parity();
    return M;
}

template <class S>
std::vector<FermionicTensor<S>> torus_mpos(const Model<S>& m, const MpoOptions& opt = {}) {
    std::vector<FermionicTensor<S>> V;
    for (int k = 0; k < m.order(); ++k) V.push_back(assemble_v(m, torus_ring(), k, opt));
    return V;
}

// V holds V(k) for every k on the torus ring.
template <class S>
FermionicTensor<S> m_prime_by_mpo(const Model<S>& m, int g, int h, const std::vector<FermionicTensor<S>>& V,
                                  BerezinSign conv = BerezinSign::minus) {
    auto ring = torus_ring();
    auto M = build_m(m, g, h);
    auto out = torus_shell(m);
    for (const auto& Vk : V) out = add(out, act_on_state(Vk, M, ring, conv));
    out *= scalar_traits<S>::ratio(1, m.order());
    return out;
}

template <class S>
FermionicTensor<S> m_prime_closed_form(const Model<S>& m, int g, int h) {
    auto out = torus_shell(m);
    for (int k = 0; k < m.order(); ++k)
        out = add(out, build_m(m, conj_by(m.G, k, g), conj_by(m.G, k, h)), eta(m, g, h, k));
    out *= scalar_traits<S>::ratio(1, m.order());
    return out;
}

template <class S>
FermionicTensor<S> build_m_prime(const Model<S>& m, int g, int h, const std::vector<FermionicTensor<S>>& V,
                                 BerezinSign conv = BerezinSign::minus) {
    auto a = m_prime_by_mpo(m, g, h, V, conv);
    auto b = m_prime_closed_form(m, g, h);
    if (!tensor_equal(a, b))
        throw InternalMismatch("M'(" + std::to_string(g) + "," + std::to_string(h) +
                               "): MPO action and closed form differ by " + std::to_string(max_deviation(a, b)));
    return a;
}

template <class S>
FermionicTensor<S> build_m_prime(const Model<S>& m, int g, int h, const MpoOptions& opt = {}) {
    return build_m_prime(m, g, h, torus_mpos(m, opt), opt.berezin);
}

struct ClassInfo {
    std::pair<int, int> rep;
    std::vector<std::pair<int, int>> members;
    bool commuting = false;
    bool s_symmetric = false;
    bool c_regular = false;
    bool mprime_nonzero = false;
};

// η_g(h,·) restricted to the centralizer; the class contributes iff it is trivial there.
template <class S>
bool eta_regular(const Model<S>& m, int g, int h) {
    for (int k : centralizer(m.G, g, h))
        if (!scalar_traits<S>::equal(eta(m, g, h, k), scalar_traits<S>::from_int(1))) return false;
    return true;
}

template <class S>
std::vector<ClassInfo> classify_pairs(const Model<S>& m, bool with_states = true, const MpoOptions& opt = {}) {
    std::vector<ClassInfo> out;
    std::vector<FermionicTensor<S>> V;
    if (with_states) V = torus_mpos(m, opt);
    for (const auto& pc : pair_conjugacy_classes(m.G)) {
        ClassInfo c;
        c.rep = pc.representative;
        c.members = pc.members;
        auto [g, h] = c.rep;
        c.commuting = m.G.commute(g, h);
        c.s_symmetric = m.s(g, h) == m.s(h, g);
        if (c.commuting && c.s_symmetric) {
            c.c_regular = is_c_regular(m.G, m.omega, pc) && eta_regular(m, g, h);
            if (with_states) c.mprime_nonzero = build_m_prime(m, g, h, V, opt.berezin).nnz() > 0;
        }
        out.push_back(std::move(c));
    }
    return out;
}

template <class S>
int degeneracy(const Model<S>& m) {
    int d = 0;
    for (const auto& c : classify_pairs(m, false))
        if (c.commuting && c.s_symmetric && c.c_regular) ++d;
    return d;
}

namespace detail {

inline int exact_rank(std::vector<std::vector<GaussRational>> a) {
    int rank = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (a[r][c].is_zero()) continue;
            GaussRational f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

inline int float_rank(const std::vector<std::vector<Complex>>& a, double threshold = 1e-8) {
    if (a.empty()) return 0;
    Eigen::MatrixXcd M(a.size(), a[0].size());
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < a[r].size(); ++c) M(r, c) = a[r][c];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > threshold) ++rank;
    return rank;
}

}  // namespace detail

// Rows are the M'(g,h) of all admissible pairs over (vertex configuration, monomial) coordinates.
template <class S>
std::vector<std::vector<S>> m_prime_matrix(const Model<S>& m, const MpoOptions& opt = {}) {
    std::vector<FermionicTensor<S>> states;
    auto V = torus_mpos(m, opt);
    for (int g = 0; g < m.order(); ++g)
        for (int h = 0; h < m.order(); ++h)
            if (admissible_pair(m.G, m.s, g, h)) states.push_back(build_m_prime(m, g, h, V, opt.berezin));
    std::map<std::pair<std::vector<int>, Monomial>, std::size_t> col;
    for (const auto& st : states)
        for (const auto& [idx, e] : st.entries())
            for (const auto& [mono, c] : e.terms()) col.try_emplace({idx, mono}, col.size());
    std::vector<std::vector<S>> rows(states.size(), std::vector<S>(col.size(), scalar_traits<S>::from_int(0)));
    for (std::size_t r = 0; r < states.size(); ++r)
        for (const auto& [idx, e] : states[r].entries())
            for (const auto& [mono, c] : e.terms()) rows[r][col.at({idx, mono})] = c;
    return rows;
}

template <class S>
int degeneracy_by_rank(const Model<S>& m, const MpoOptions& opt = {}) {
    auto rows = m_prime_matrix(m, opt);
    if constexpr (scalar_traits<S>::exact) return detail::exact_rank(std::move(rows));
    else return detail::float_rank(rows);
}

struct IdentityViolation {
    std::vector<int> args;
    double deviation = 0;
};

struct IdentityReport {
    bool pass = true;
    long checked = 0;
    std::vector<IdentityViolation> violations;
};

// η_{g^t}(x^t, y t⁻¹) = η_g(x,y)/η_g(x,t) for every admissible (g,x) and all y, t.
template <class S>
IdentityReport verify_eta_identity(const Model<S>& m) {
    const auto& G = m.G;
    IdentityReport rep;
    for (int g = 0; g < m.order(); ++g)
        for (int x = 0; x < m.order(); ++x) {
            if (!admissible_pair(G, m.s, g, x)) continue;
            for (int y = 0; y < m.order(); ++y)
                for (int t = 0; t < m.order(); ++t) {
                    S lhs = eta(m, conj_by(G, t, g), conj_by(G, t, x), G.mul(y, G.inv(t)));
                    S rhs = eta(m, g, x, y) / eta(m, g, x, t);
                    ++rep.checked;
                    if (!scalar_traits<S>::equal(lhs, rhs)) {
                        rep.pass = false;
                        rep.violations.push_back({{g, x, y, t}, scalar_traits<S>::abs(lhs - rhs)});
                    }
                }
        }
    return rep;
}

// M'(g,h) = 0 ⇔ Σ_{k∈Z(g,h)} η_g(h,k) = 0, and η_g(h,k) = c_g(k⁻¹,h)/c_g(h,k⁻¹) on the centralizer.
template <class S>
IdentityReport verify_vanishing_criterion(const Model<S>& m, const MpoOptions& opt = {}) {
    const auto& G = m.G;
    IdentityReport rep;
    auto V = torus_mpos(m, opt);
    for (int g = 0; g < m.order(); ++g)
        for (int h = 0; h < m.order(); ++h) {
            if (!admissible_pair(G, m.s, g, h)) continue;
            S sum = scalar_traits<S>::from_int(0);
            for (int k : centralizer(G, g, h)) {
                S e = eta(m, g, h, k);
                sum += e;
                int ki = G.inv(k);
                S c = c_omega(m.omega, g, ki, h) / c_omega(m.omega, g, h, ki);
                ++rep.checked;
                if (!scalar_traits<S>::equal(e, c)) {
                    rep.pass = false;
                    rep.violations.push_back({{g, h, k}, scalar_traits<S>::abs(e - c)});
                }
            }
            bool vanishes = build_m_prime(m, g, h, V, opt.berezin).nnz() == 0;
            ++rep.checked;
            if (vanishes != scalar_traits<S>::is_zero(sum)) {
                rep.pass = false;
                rep.violations.push_back({{g, h}, scalar_traits<S>::abs(sum)});
            }
        }
    return rep;
}

}  // namespace fermitn
