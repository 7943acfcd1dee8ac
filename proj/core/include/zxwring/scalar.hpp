#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>

namespace zxw {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<BigInt>;

// Exact conversion: every finite double is a binary fraction.
inline Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite value");
    if (x == 0.0) return Rat(0);
    int e = 0;
    double m = std::frexp(x, &e);       // x = m * 2^e, |m| in [0.5, 1)
    auto m53 = static_cast<long long>(std::ldexp(m, 53));  // exact: doubles have 53-bit significands
    e -= 53;
    BigInt num(m53);
    if (e >= 0) {
        num <<= e;
        return Rat(num);
    }
    BigInt den(1);
    den <<= -e;
    return Rat(num, den);
}

inline double rat_to_double(const Rat& r) {
    return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

// boost::rational<cpp_int> blows the stack on mixed comparisons with int
// literals (boost 1.74), so zero tests go through the numerator.
inline bool rat_is_zero(const Rat& r) { return r.numerator() == 0; }

// Complex numbers with exact rational parts. Params of Z spiders and number
// boxes are kept in this form so rewriting can be bit-exact end to end.
struct GaussianRational {
    Rat re{0};
    Rat im{0};

    GaussianRational() = default;
    GaussianRational(int v) : re(v) {}                       // NOLINT: implicit by design
    GaussianRational(Rat r) : re(std::move(r)) {}            // NOLINT
    GaussianRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational from(std::complex<double> z) {
        return {rat_from_double(z.real()), rat_from_double(z.imag())};
    }
    static GaussianRational from(double x) { return {rat_from_double(x), Rat(0)}; }
    static GaussianRational i() { return {Rat(0), Rat(1)}; }

    std::complex<double> to_complex() const { return {rat_to_double(re), rat_to_double(im)}; }
    bool is_zero() const { return rat_is_zero(re) && rat_is_zero(im); }
    bool is_real() const { return rat_is_zero(im); }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rat n = b.re * b.re + b.im * b.im;
        if (rat_is_zero(n)) throw std::domain_error("GaussianRational: division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
    GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
    GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

// Thrown when an operation is requested on the exact backend but the value
// involved is irrational (H spider, odd-legged X spider).
struct ExactUnsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class S>
struct scalar_ops;  // S: std::complex<double> or GaussianRational

template <>
struct scalar_ops<std::complex<double>> {
    static constexpr bool exact = false;
    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> from_param(const GaussianRational& g) { return g.to_complex(); }
    static std::complex<double> from_int(long long v) { return {static_cast<double>(v), 0.0}; }
    // (1/sqrt 2)^e
    static std::complex<double> inv_sqrt2_pow(int e) {
        return {std::pow(0.5, 0.5 * e), 0.0};
    }
    static bool is_zero(const std::complex<double>& v) { return v == std::complex<double>{}; }
};

template <>
struct scalar_ops<GaussianRational> {
    static constexpr bool exact = true;
    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return {1}; }
    static GaussianRational from_param(const GaussianRational& g) { return g; }
    static GaussianRational from_int(long long v) { return {Rat(BigInt(v))}; }
    static GaussianRational inv_sqrt2_pow(int e) {
        if (e % 2 != 0) throw ExactUnsupported("exact backend: odd power of 1/sqrt(2)");
        if (e < 0) throw ExactUnsupported("exact backend: negative sqrt power");
        BigInt den(1);
        den <<= e / 2;
        return {Rat(BigInt(1), den)};
    }
    static bool is_zero(const GaussianRational& v) { return v.is_zero(); }
};

}  // namespace zxw
