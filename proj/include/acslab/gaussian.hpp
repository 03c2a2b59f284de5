#pragma once
/* Exact arithmetic in Q(i): rationals via boost::multiprecision, Gaussian
 * rationals as re/im pairs kept in lowest terms by the rational layer. */

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <stdexcept>
#include <string>

namespace acslab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct GaussianRational {
    Rational re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(long v) : re(v), im(0) {}
    GaussianRational(const Rational& r) : re(r), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational unit_i() { return {Rational(0), Rational(1)}; }

    bool isZero() const { return re == 0 && im == 0; }
    bool isReal() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }
    /* re^2 + im^2, exact */
    Rational normSq() const { return re * re + im * im; }

    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
    GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
    GaussianRational operator*(const GaussianRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussianRational operator/(const GaussianRational& o) const {
        Rational n = o.normSq();
        if (n == 0) throw std::domain_error("GaussianRational: division by zero");
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
    GaussianRational& operator+=(const GaussianRational& o) { re += o.re; im += o.im; return *this; }
    GaussianRational& operator-=(const GaussianRational& o) { re -= o.re; im -= o.im; return *this; }
    GaussianRational& operator*=(const GaussianRational& o) { *this = *this * o; return *this; }

    bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }
    /* arbitrary total order, for deterministic containers */
    bool operator<(const GaussianRational& o) const {
        if (re != o.re) return re < o.re;
        return im < o.im;
    }

    std::complex<double> toComplex() const {
        return {re.convert_to<double>(), im.convert_to<double>()};
    }
};

inline GaussianRational operator*(long s, const GaussianRational& g) {
    return GaussianRational(s) * g;
}

} // namespace acslab
