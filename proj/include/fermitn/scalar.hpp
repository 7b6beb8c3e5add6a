#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fermitn {

using Rational = boost::multiprecision::cpp_rational;

// Exact complex number with rational real and imaginary parts.
class GaussRational {
public:
    GaussRational() = default;
    GaussRational(int re) : re_(re) {}  // NOLINT: implicit from small ints is convenient
    GaussRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussRational i() { return {0, 1}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    GaussRational conj() const { return {re_, -im_}; }
    Rational norm2() const { return re_ * re_ + im_ * im_; }

    GaussRational operator-() const { return {-re_, -im_}; }
    GaussRational& operator+=(const GaussRational& o) { re_ += o.re_; im_ += o.im_; return *this; }
    GaussRational& operator-=(const GaussRational& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    GaussRational& operator*=(const GaussRational& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        return *this;
    }
    GaussRational& operator/=(const GaussRational& o) {
        Rational d = o.norm2();
        if (d == 0) throw std::domain_error("division by zero");
        *this *= o.conj();
        re_ /= d;
        im_ /= d;
        return *this;
    }
    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re_), static_cast<double>(im_)};
    }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussRational& z) {
        if (z.im_ == 0) return os << z.re_;
        if (z.re_ == 0) return os << z.im_ << "i";
        os << "(" << z.re_ << (z.im_ < 0 ? "-" : "+");
        return os << abs(z.im_) << "i)";
    }

private:
    Rational re_{0};
    Rational im_{0};
};

using Complex = std::complex<double>;

// Exact unit complex number exp(2πi·num/den), kept reduced with 0 <= num < den.
class Phase {
public:
    Phase() = default;
    Phase(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den <= 0) throw std::invalid_argument("phase denominator must be positive");
        normalize();
    }
    static Phase one() { return {}; }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_one() const { return num_ == 0; }

    Phase operator-() const { return {-num_, den_}; }
    Phase operator+(const Phase& o) const {
        std::int64_t l = std::lcm(den_, o.den_);
        return {num_ * (l / den_) + o.num_ * (l / o.den_), l};
    }
    Phase operator-(const Phase& o) const { return *this + (-o); }
    friend bool operator==(const Phase& a, const Phase& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    // Quarter turns map exactly onto {1, i, -1, -i}; anything else is not Gaussian rational.
    bool is_quarter() const { return (4 * num_) % den_ == 0; }

    Complex to_complex() const {
        if (is_quarter()) {
            switch ((4 * num_ / den_) % 4) {
                case 0: return {1, 0};
                case 1: return {0, 1};
                case 2: return {-1, 0};
                default: return {0, -1};
            }
        }
        double a = 2.0 * M_PI * static_cast<double>(num_) / static_cast<double>(den_);
        return std::polar(1.0, a);
    }

    friend std::ostream& operator<<(std::ostream& os, const Phase& p) {
        return os << "exp(2pi i " << p.num_ << "/" << p.den_ << ")";
    }

private:
    void normalize() {
        num_ %= den_;
        if (num_ < 0) num_ += den_;
        std::int64_t g = std::gcd(num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

struct InexactValue : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double& float_tolerance() {
    static double tol = 1e-9;
    return tol;
}

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<GaussRational> {
    static constexpr bool exact = true;
    static GaussRational from_int(long v) { return GaussRational(Rational(v)); }
    static GaussRational ratio(long num, long den) { return GaussRational(Rational(num, den)); }
    static GaussRational i() { return GaussRational::i(); }
    static bool is_zero(const GaussRational& x) { return x.is_zero(); }
    static bool equal(const GaussRational& a, const GaussRational& b) { return a == b; }
    static GaussRational conj(const GaussRational& x) { return x.conj(); }
    static Complex to_complex(const GaussRational& x) { return x.to_complex(); }
    static double abs(const GaussRational& x) { return std::abs(x.to_complex()); }
    static GaussRational from_phase(const Phase& p) {
        if (!p.is_quarter()) throw InexactValue("phase is not a quarter turn; use float arithmetic");
        Complex c = p.to_complex();
        return GaussRational(Rational(static_cast<long>(c.real())), Rational(static_cast<long>(c.imag())));
    }
    static GaussRational from_rational_pair(const Rational& re, const Rational& im) { return {re, im}; }
    static std::string str(const GaussRational& x) { return x.str(); }
};

template <>
struct scalar_traits<Complex> {
    static constexpr bool exact = false;
    static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static Complex ratio(long num, long den) { return {static_cast<double>(num) / static_cast<double>(den), 0.0}; }
    static Complex i() { return {0.0, 1.0}; }
    static bool is_zero(const Complex& x) { return std::abs(x) <= float_tolerance(); }
    static bool equal(const Complex& a, const Complex& b) { return std::abs(a - b) <= float_tolerance(); }
    static Complex conj(const Complex& x) { return std::conj(x); }
    static Complex to_complex(const Complex& x) { return x; }
    static double abs(const Complex& x) { return std::abs(x); }
    static Complex from_phase(const Phase& p) { return p.to_complex(); }
    static Complex from_rational_pair(const Rational& re, const Rational& im) {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
    static std::string str(const Complex& x) {
        std::ostringstream os;
        os << x;
        return os.str();
    }
};

// (-1)^e as a scalar.
template <class S>
S sign_pow(int e) {
    return scalar_traits<S>::from_int((e & 1) ? -1 : 1);
}

}  // namespace fermitn
