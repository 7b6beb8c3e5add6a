#pragma once

#include "fermitn/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fermitn {

// θ_mode or θ̄_mode. Global order is (mode, conj) with θ < θ̄.
struct GeneratorId {
    std::uint32_t mode = 0;
    bool conj = false;

    std::uint32_t code() const { return 2 * mode + (conj ? 1u : 0u); }
    static GeneratorId from_code(std::uint32_t c) { return {c / 2, (c & 1u) != 0}; }
    friend auto operator<=>(const GeneratorId&, const GeneratorId&) = default;
};

inline GeneratorId theta(std::uint32_t mode) { return {mode, false}; }
inline GeneratorId theta_bar(std::uint32_t mode) { return {mode, true}; }

// Strictly increasing generator codes.
using Monomial = std::vector<std::uint32_t>;

enum class Parity { even, odd, mixed, zero };

inline const char* to_string(Parity p) {
    switch (p) {
        case Parity::even: return "even";
        case Parity::odd: return "odd";
        case Parity::mixed: return "mixed";
        default: return "zero";
    }
}

// Value of ∫dθ̄dθ θθ̄ for an adjacent pair.
enum class BerezinSign { plus = 1, minus = -1 };

// Sort codes in place; returns the permutation sign, or 0 if a generator repeats.
inline int sort_with_sign(std::vector<std::uint32_t>& codes) {
    int inversions = 0;
    for (std::size_t i = 0; i < codes.size(); ++i)
        for (std::size_t j = i + 1; j < codes.size(); ++j)
            if (codes[i] > codes[j]) ++inversions;
    std::sort(codes.begin(), codes.end());
    if (std::adjacent_find(codes.begin(), codes.end()) != codes.end()) return 0;
    return (inversions & 1) ? -1 : 1;
}

// Sign of concatenating two sorted monomials; 0 if they share a generator.
inline int merge_sign(const Monomial& a, const Monomial& b, Monomial& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    long crossings = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            crossings += static_cast<long>(a.size() - i);
            out.push_back(b[j++]);
        } else {
            return 0;
        }
    }
    return (crossings & 1) ? -1 : 1;
}

template <class S>
class Grassmann {
public:
    using traits = scalar_traits<S>;
    using Terms = std::map<Monomial, S>;

    Grassmann() = default;
    explicit Grassmann(const S& c) { add_term({}, c); }

    static Grassmann one() { return Grassmann(traits::from_int(1)); }
    static Grassmann scalar(const S& c) { return Grassmann(c); }
    static Grassmann generator(GeneratorId g) { return canonicalize({g}, traits::from_int(1)); }

    // Sorted monomial with the inversion sign absorbed; zero if any generator repeats.
    static Grassmann canonicalize(const std::vector<GeneratorId>& raw, const S& coeff) {
        std::vector<std::uint32_t> codes;
        codes.reserve(raw.size());
        for (const auto& g : raw) codes.push_back(g.code());
        int sg = sort_with_sign(codes);
        Grassmann r;
        if (sg == 0) return r;
        r.add_term(codes, sg < 0 ? S(-coeff) : coeff);
        return r;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const Monomial& m, const S& c) {
        if (traits::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    S coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? traits::from_int(0) : it->second;
    }

    Grassmann& operator+=(const Grassmann& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Grassmann& operator-=(const Grassmann& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, S(-c));
        return *this;
    }
    Grassmann& operator*=(const S& c) {
        if (traits::is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second *= c;
            if (traits::is_zero(it->second)) it = terms_.erase(it);
            else ++it;
        }
        return *this;
    }
    friend Grassmann operator+(Grassmann a, const Grassmann& b) { return a += b; }
    friend Grassmann operator-(Grassmann a, const Grassmann& b) { return a -= b; }
    friend Grassmann operator*(Grassmann a, const S& c) { return a *= c; }
    friend Grassmann operator*(const S& c, Grassmann a) { return a *= c; }
    Grassmann operator-() const { return *this * traits::from_int(-1); }

    friend Grassmann operator*(const Grassmann& a, const Grassmann& b) {
        Grassmann r;
        Monomial buf;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                int sg = merge_sign(ma, mb, buf);
                if (sg == 0) continue;
                S c = ca * cb;
                r.add_term(buf, sg < 0 ? S(-c) : c);
            }
        }
        return r;
    }

    Parity parity() const {
        bool has_even = false, has_odd = false;
        for (const auto& [m, c] : terms_) (m.size() % 2 ? has_odd : has_even) = true;
        if (has_even && has_odd) return Parity::mixed;
        if (has_odd) return Parity::odd;
        if (has_even) return Parity::even;
        return Parity::zero;
    }
    bool is_even() const {
        auto p = parity();
        return p == Parity::even || p == Parity::zero;
    }

    // ∫dθ̄dθ applied to the whole element: only terms carrying both θ_mode and θ̄_mode survive.
    Grassmann berezin_contract(std::uint32_t mode, BerezinSign conv = BerezinSign::plus) const {
        return integrate(mode, conv, false);
    }

    // Bond contraction: the measure together with the bond weight (1 + σθθ̄). Terms without the
    // bond pass unchanged, saturated terms integrate, half-occupied terms vanish.
    Grassmann contract_bond(std::uint32_t mode, BerezinSign conv = BerezinSign::minus) const {
        return integrate(mode, conv, true);
    }

    Grassmann rename_modes(const std::unordered_map<std::uint32_t, std::uint32_t>& map) const {
        if (map.empty()) return *this;
        Grassmann r;
        std::vector<std::uint32_t> codes;
        for (const auto& [m, c] : terms_) {
            codes.clear();
            for (auto code : m) {
                auto g = GeneratorId::from_code(code);
                auto it = map.find(g.mode);
                if (it != map.end()) g.mode = it->second;
                codes.push_back(g.code());
            }
            int sg = sort_with_sign(codes);
            if (sg == 0) continue;
            r.add_term(codes, sg < 0 ? S(-c) : c);
        }
        return r;
    }

    std::set<std::uint32_t> modes() const {
        std::set<std::uint32_t> out;
        for (const auto& [m, c] : terms_)
            for (auto code : m) out.insert(code / 2);
        return out;
    }

    friend bool operator==(const Grassmann& a, const Grassmann& b) {
        if constexpr (traits::exact) {
            return a.terms_ == b.terms_;
        } else {
            return max_deviation(a, b) <= float_tolerance();
        }
    }

    friend double max_deviation(const Grassmann& a, const Grassmann& b) {
        double d = 0;
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
                d = std::max(d, traits::abs(ia->second));
                ++ia;
            } else if (ia == a.terms_.end() || ib->first < ia->first) {
                d = std::max(d, traits::abs(ib->second));
                ++ib;
            } else {
                d = std::max(d, traits::abs(S(ia->second - ib->second)));
                ++ia;
                ++ib;
            }
        }
        return d;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << traits::str(c);
            for (auto code : m) {
                auto g = GeneratorId::from_code(code);
                os << (g.conj ? " tb" : " t") << g.mode;
            }
        }
        return os.str();
    }

private:
    Grassmann integrate(std::uint32_t mode, BerezinSign conv, bool graded) const {
        const std::uint32_t ct = theta(mode).code();
        const std::uint32_t cb = theta_bar(mode).code();
        const S sigma = traits::from_int(static_cast<int>(conv));
        Grassmann r;
        Monomial rest;
        for (const auto& [m, c] : terms_) {
            auto pt = std::find(m.begin(), m.end(), ct);
            auto pb = std::find(m.begin(), m.end(), cb);
            bool has_t = pt != m.end(), has_b = pb != m.end();
            if (!has_t && !has_b) {
                if (graded) r.add_term(m, c);
                continue;
            }
            if (has_t != has_b) continue;
            // Move θ to the front and integrate, then θ̄ (innermost measure first).
            long i = pt - m.begin();
            long j = pb - m.begin();
            long jj = j > i ? j - 1 : j;
            int sg = ((i + jj) & 1) ? -1 : 1;
            rest.clear();
            for (auto code : m)
                if (code != ct && code != cb) rest.push_back(code);
            S v = c * sigma;
            r.add_term(rest, sg < 0 ? S(-v) : v);
        }
        return r;
    }

    Terms terms_;
};

// Free-function forms.
template <class S>
Grassmann<S> canonicalize(const std::vector<GeneratorId>& raw, const S& coeff) {
    return Grassmann<S>::canonicalize(raw, coeff);
}

template <class S>
Grassmann<S> multiply(const Grassmann<S>& a, const Grassmann<S>& b) {
    return a * b;
}

template <class S>
Grassmann<S> berezin_contract(const Grassmann<S>& e, std::uint32_t mode, BerezinSign conv = BerezinSign::plus) {
    return e.berezin_contract(mode, conv);
}

template <class S>
Parity parity(const Grassmann<S>& e) {
    return e.parity();
}

// θ^{e} for e in {0,1}; appended to a raw generator list in written order.
inline void push_pow(std::vector<GeneratorId>& raw, GeneratorId g, int e) {
    if (e & 1) raw.push_back(g);
}

}  // namespace fermitn
