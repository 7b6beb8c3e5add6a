#pragma once

#include "fermitn/scalar.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermitn {

struct GroupError : std::runtime_error {
    enum class Kind { NotSquare, OutOfRange, NotAssociative, NoIdentity, NoInverse };
    Kind kind;
    std::vector<int> witness;
    GroupError(Kind k, std::vector<int> w, const std::string& msg)
        : std::runtime_error(msg), kind(k), witness(std::move(w)) {}
};

class FiniteGroup {
public:
    FiniteGroup() : FiniteGroup(validate({{0}})) {}

    // Validates a multiplication table over 0..n-1. Element 0 must be the identity.
    static FiniteGroup validate(const std::vector<std::vector<int>>& table) {
        const int n = static_cast<int>(table.size());
        if (n == 0) throw GroupError(GroupError::Kind::NotSquare, {}, "empty table");
        for (const auto& row : table) {
            if (static_cast<int>(row.size()) != n)
                throw GroupError(GroupError::Kind::NotSquare, {}, "table is not square");
            for (int x : row)
                if (x < 0 || x >= n)
                    throw GroupError(GroupError::Kind::OutOfRange, {x}, "entry " + std::to_string(x) + " out of range");
        }
        for (int g = 0; g < n; ++g)
            if (table[0][g] != g || table[g][0] != g)
                throw GroupError(GroupError::Kind::NoIdentity, {g}, "0 is not a two-sided identity at " + std::to_string(g));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (table[table[a][b]][c] != table[a][table[b][c]])
                        throw GroupError(GroupError::Kind::NotAssociative, {a, b, c},
                                         "not associative at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                             std::to_string(c) + ")");
        FiniteGroup G(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) G.table_[a * n + b] = table[a][b];
        for (int a = 0; a < n; ++a) {
            int inv = -1;
            for (int b = 0; b < n; ++b)
                if (table[a][b] == 0 && table[b][a] == 0) inv = b;
            if (inv < 0) throw GroupError(GroupError::Kind::NoInverse, {a}, "no inverse for " + std::to_string(a));
            G.inverse_[a] = inv;
        }
        return G;
    }

    int order() const { return n_; }
    int mul(int a, int b) const { return table_[a * n_ + b]; }
    template <class... R>
    int mul(int a, int b, R... rest) const {
        return mul(mul(a, b), rest...);
    }
    int inv(int a) const { return inverse_[a]; }
    std::vector<std::vector<int>> table() const {
        std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) t[a][b] = mul(a, b);
        return t;
    }
    bool commute(int a, int b) const { return mul(a, b) == mul(b, a); }
    bool is_abelian() const {
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b)
                if (!commute(a, b)) return false;
        return true;
    }
    // k g k^-1
    int conj(int k, int g) const { return mul(k, g, inv(k)); }

private:
    explicit FiniteGroup(int n) : n_(n), table_(n * n), inverse_(n) {}
    int n_;
    std::vector<int> table_;
    std::vector<int> inverse_;
};

inline FiniteGroup trivial_group() { return FiniteGroup::validate({{0}}); }

inline FiniteGroup cyclic_group(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroup::validate(t);
}

// Element (a,b) of G×H is indexed a*|H| + b.
inline FiniteGroup direct_product(const FiniteGroup& G, const FiniteGroup& H) {
    const int m = G.order(), n = H.order();
    std::vector<std::vector<int>> t(m * n, std::vector<int>(m * n));
    for (int a = 0; a < m * n; ++a)
        for (int b = 0; b < m * n; ++b) t[a][b] = G.mul(a / n, b / n) * n + H.mul(a % n, b % n);
    return FiniteGroup::validate(t);
}

inline FiniteGroup abelian_group(int m, int n) { return direct_product(cyclic_group(m), cyclic_group(n)); }

// Permutations of {0,1,2} in lexicographic order; (pq)(i) = p(q(i)).
inline std::vector<std::array<int, 3>> s3_permutations() {
    std::vector<std::array<int, 3>> p;
    std::array<int, 3> a{0, 1, 2};
    do p.push_back(a);
    while (std::next_permutation(a.begin(), a.end()));
    return p;
}

inline FiniteGroup symmetric_group3() {
    auto p = s3_permutations();
    std::vector<std::vector<int>> t(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            std::array<int, 3> c{};
            for (int i = 0; i < 3; ++i) c[i] = p[a][p[b][i]];
            t[a][b] = static_cast<int>(std::find(p.begin(), p.end(), c) - p.begin());
        }
    return FiniteGroup::validate(t);
}

// Z2-valued 2-cochain.
class Cocycle2 {
public:
    Cocycle2() = default;
    explicit Cocycle2(int n) : n_(n), s_(n * n, 0) {}
    static Cocycle2 from_table(const std::vector<std::vector<int>>& t) {
        Cocycle2 c(static_cast<int>(t.size()));
        for (int a = 0; a < c.n_; ++a) {
            if (static_cast<int>(t[a].size()) != c.n_) throw std::invalid_argument("s table is not square");
            for (int b = 0; b < c.n_; ++b) c.set(a, b, t[a][b]);
        }
        return c;
    }
    int order() const { return n_; }
    int operator()(int a, int b) const { return s_[a * n_ + b]; }
    void set(int a, int b, int v) { s_[a * n_ + b] = static_cast<std::uint8_t>(((v % 2) + 2) % 2); }
    bool is_zero() const { return std::all_of(s_.begin(), s_.end(), [](auto x) { return x == 0; }); }
    std::vector<std::vector<int>> table() const {
        std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) t[a][b] = (*this)(a, b);
        return t;
    }

private:
    int n_ = 0;
    std::vector<std::uint8_t> s_;
};

inline Cocycle2 ftc_s() {
    Cocycle2 s(2);
    s.set(1, 1, 1);
    return s;
}

// Returns the first violating triple, if any.
inline std::optional<std::array<int, 3>> check_cocycle2(const FiniteGroup& G, const Cocycle2& s) {
    const int n = G.order();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if ((s(a, b) + s(G.mul(a, b), c) + s(a, G.mul(b, c)) + s(b, c)) % 2 != 0)
                    return std::array<int, 3>{a, b, c};
    return std::nullopt;
}

inline bool is_normalized(const Cocycle2& s) {
    for (int g = 0; g < s.order(); ++g)
        if (s(0, g) || s(g, 0)) return false;
    return true;
}

template <class V>
class Cocycle3 {
public:
    Cocycle3() = default;
    Cocycle3(int n, V fill) : n_(n), w_(static_cast<std::size_t>(n) * n * n, fill) {}
    int order() const { return n_; }
    const V& operator()(int a, int b, int c) const { return w_[(a * n_ + b) * n_ + c]; }
    void set(int a, int b, int c, V v) { w_[(a * n_ + b) * n_ + c] = std::move(v); }
    const std::vector<V>& values() const { return w_; }

    template <class F>
    auto map(F f) const {
        using W = decltype(f(w_[0]));
        Cocycle3<W> r(n_, f(w_[0]));
        for (std::size_t i = 0; i < w_.size(); ++i) r.values_mut()[i] = f(w_[i]);
        return r;
    }
    std::vector<V>& values_mut() { return w_; }

private:
    int n_ = 0;
    std::vector<V> w_;
};

using PhaseCocycle = Cocycle3<Phase>;

template <class S>
Cocycle3<S> to_scalar_cocycle(const PhaseCocycle& w) {
    return w.map([](const Phase& p) { return scalar_traits<S>::from_phase(p); });
}

template <class S>
bool is_normalized(const Cocycle3<S>& w) {
    const S one = scalar_traits<S>::from_int(1);
    for (int a = 0; a < w.order(); ++a)
        for (int b = 0; b < w.order(); ++b) {
            if (!scalar_traits<S>::equal(w(0, a, b), one) || !scalar_traits<S>::equal(w(a, 0, b), one) ||
                !scalar_traits<S>::equal(w(a, b, 0), one))
                return false;
        }
    return true;
}

// ω(a,b,c)ω(a,bc,d)ω(b,c,d) = (-1)^{s(a,b)s(c,d)} ω(ab,c,d)ω(a,b,cd)
template <class S>
std::optional<std::array<int, 4>> check_graded_pentagon(const FiniteGroup& G, const Cocycle2& s, const Cocycle3<S>& w) {
    const int n = G.order();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    S lhs = w(a, b, c) * w(a, G.mul(b, c), d) * w(b, c, d);
                    S rhs = sign_pow<S>(s(a, b) * s(c, d)) * w(G.mul(a, b), c, d) * w(a, b, G.mul(c, d));
                    if (!scalar_traits<S>::equal(lhs, rhs)) return std::array<int, 4>{a, b, c, d};
                }
    return std::nullopt;
}

struct SearchSpaceTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PentagonSolverLimits {
    long max_free_entries = 64;
    long max_nodes = 20'000'000;
    long max_solutions = 100'000;
};

// All normalized ω with values among root_order-th roots of unity solving the graded pentagon.
// Exponents are integers mod n; the graded sign is n/2 in these units.
inline std::vector<PhaseCocycle> solve_graded_pentagon(const FiniteGroup& G, const Cocycle2& s, int root_order,
                                                       const PentagonSolverLimits& lim = {}) {
    if (root_order < 1) throw std::invalid_argument("root order must be >= 1");
    const int n = G.order();
    const int N = root_order;
    std::vector<PhaseCocycle> out;

    // Variable index for non-identity triples; -1 marks the normalized (fixed) entries.
    auto var = [&](int a, int b, int c) -> int {
        if (a == 0 || b == 0 || c == 0) return -1;
        return ((a - 1) * (n - 1) + (b - 1)) * (n - 1) + (c - 1);
    };
    const long nvars = static_cast<long>(n - 1) * (n - 1) * (n - 1);
    if (nvars > lim.max_free_entries)
        throw SearchSpaceTooLarge(std::to_string(nvars) + " free entries exceed the bound of " +
                                  std::to_string(lim.max_free_entries));

    struct Equation {
        std::array<int, 5> v;
        std::array<int, 5> coef;
        int rhs;
    };
    std::vector<std::vector<Equation>> by_last(nvars > 0 ? nvars : 1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    int graded = s(a, b) * s(c, d);
                    Equation e{{var(a, b, c), var(a, G.mul(b, c), d), var(b, c, d), var(G.mul(a, b), c, d),
                                var(a, b, G.mul(c, d))},
                               {1, 1, 1, -1, -1},
                               0};
                    if (graded) {
                        if (N % 2) return out;  // half a turn is not an N-th root exponent
                        e.rhs = N / 2;
                    }
                    int last = -1;
                    for (int v : e.v) last = std::max(last, v);
                    if (last < 0) {
                        if (e.rhs % N != 0) return out;
                        continue;
                    }
                    by_last[last].push_back(e);
                }

    std::vector<int> x(std::max<long>(nvars, 0), 0);
    long nodes = 0;
    auto value = [&](int v) { return v < 0 ? 0 : x[v]; };
    auto emit = [&]() {
        PhaseCocycle w(n, Phase::one());
        for (int a = 1; a < n; ++a)
            for (int b = 1; b < n; ++b)
                for (int c = 1; c < n; ++c) w.set(a, b, c, Phase(x[var(a, b, c)], N));
        out.push_back(std::move(w));
        if (static_cast<long>(out.size()) > lim.max_solutions)
            throw SearchSpaceTooLarge("more than " + std::to_string(lim.max_solutions) + " solutions");
    };
    if (nvars == 0) {
        emit();
        return out;
    }
    // Iterative backtracking over variables in index order.
    long k = 0;
    x[0] = -1;
    while (k >= 0) {
        if (++x[k] >= N) {
            --k;
            continue;
        }
        if (++nodes > lim.max_nodes) throw SearchSpaceTooLarge("node budget exhausted");
        bool ok = true;
        for (const auto& e : by_last[k]) {
            long acc = 0;
            for (int i = 0; i < 5; ++i) acc += static_cast<long>(e.coef[i]) * value(e.v[i]);
            if (((acc - e.rhs) % N + N) % N != 0) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (k == nvars - 1) {
            emit();
            continue;
        }
        ++k;
        x[k] = -1;
    }
    return out;
}

struct PairClass {
    std::pair<int, int> representative;
    std::vector<std::pair<int, int>> members;
};

// Orbits of G×G under simultaneous conjugation, representatives lexicographically least.
inline std::vector<PairClass> pair_conjugacy_classes(const FiniteGroup& G) {
    const int n = G.order();
    std::vector<char> seen(n * n, 0);
    std::vector<PairClass> out;
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) {
            if (seen[g * n + h]) continue;
            std::set<std::pair<int, int>> orbit;
            for (int t = 0; t < n; ++t) orbit.insert({G.conj(t, g), G.conj(t, h)});
            PairClass pc;
            pc.members.assign(orbit.begin(), orbit.end());
            pc.representative = pc.members.front();
            for (auto [a, b] : pc.members) seen[a * n + b] = 1;
            out.push_back(std::move(pc));
        }
    return out;
}

inline std::vector<int> centralizer(const FiniteGroup& G, int g, int h) {
    std::vector<int> z;
    for (int k = 0; k < G.order(); ++k)
        if (G.commute(k, g) && G.commute(k, h)) z.push_back(k);
    return z;
}

// c_g(h,k) = ω(g,h,k)ω(h,k,g)/ω(h,g,k)
template <class S>
S c_omega(const Cocycle3<S>& w, int g, int h, int k) {
    return w(g, h, k) * w(h, k, g) / w(h, g, k);
}

template <class S>
bool is_c_regular(const FiniteGroup& G, const Cocycle3<S>& w, const PairClass& cls) {
    auto [g, h] = cls.representative;
    for (int k : centralizer(G, g, h))
        if (!scalar_traits<S>::equal(c_omega(w, g, h, k), c_omega(w, g, k, h))) return false;
    return true;
}

}  // namespace fermitn
