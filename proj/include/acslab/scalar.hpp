#pragma once
/* Fractions of oscillator polynomials. No gcd normalization: equality is by
 * cross-multiplied numerator zero-test; only monomial content is stripped,
 * plus folding of single-term denominators (always exactly divisible). */

#include "oscillator.hpp"

#include <complex>
#include <sstream>

namespace acslab {

struct EvalPoint {
    std::vector<double> angles;                  // one per oscillator
    std::vector<std::complex<double>> params;    // one per parameter; conjugate slots implied

    std::string describe(const GenEnv& env) const {
        std::ostringstream os;
        bool first = true;
        for (size_t k = 0; k < angles.size(); ++k, first = false)
            os << (first ? "" : ", ") << env.osc[k] << "@" << angles[k];
        for (size_t j = 0; j < params.size(); ++j, first = false)
            os << (first ? "" : ", ") << env.par[j] << "=(" << params[j].real() << ","
               << params[j].imag() << ")";
        return os.str();
    }
};

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

struct ScalarFraction {
    OscillatorElement num, den;

    ScalarFraction() : num(), den(OscillatorElement::constant(emptyEnv(), GaussianRational(1))) {}
    /* polynomial as fraction */
    ScalarFraction(OscillatorElement n)
        : num(std::move(n)), den(OscillatorElement::constant(num.env, GaussianRational(1))) {}
    ScalarFraction(OscillatorElement n, OscillatorElement d) : num(std::move(n)), den(std::move(d)) {
        if (den.isZero()) throw std::domain_error("scalar: zero denominator");
        normalize();
    }

    static ScalarFraction constant(const GenEnvPtr& e, const GaussianRational& c) {
        return ScalarFraction(OscillatorElement::constant(e, c));
    }
    static ScalarFraction one(const GenEnvPtr& e) { return constant(e, GaussianRational(1)); }

    bool isZero() const { return num.isZero(); }
    bool isConstant() const { return num.isConstant() && den.isConstant(); }
    GaussianRational asConstant() const { return num.asConstant() / den.asConstant(); }

    ScalarFraction operator+(const ScalarFraction& o) const {
        if (envCompatible(num.env, o.num.env)) {
            if (o.isZero()) return *this;
            if (isZero()) return o;
            if (den.terms == o.den.terms) return ScalarFraction(num + o.num, den);
        }
        return ScalarFraction(num * o.den + o.num * den, den * o.den);
    }
    ScalarFraction operator-(const ScalarFraction& o) const {
        if (envCompatible(num.env, o.num.env)) {
            if (o.isZero()) return *this;
            if (isZero()) return -o;
            if (den.terms == o.den.terms) return ScalarFraction(num - o.num, den);
        }
        return ScalarFraction(num * o.den - o.num * den, den * o.den);
    }
    ScalarFraction operator*(const ScalarFraction& o) const {
        if (envCompatible(num.env, o.num.env)) {
            if (isZero()) return *this;
            if (o.isZero()) return o;
            if (num.terms == o.den.terms) return ScalarFraction(o.num, den);
            if (den.terms == o.num.terms) return ScalarFraction(num, o.den);
        }
        return ScalarFraction(num * o.num, den * o.den);
    }
    ScalarFraction operator/(const ScalarFraction& o) const {
        if (o.isZero()) throw std::domain_error("scalar: division by zero fraction");
        if (envCompatible(num.env, o.num.env)) {
            if (isZero()) return *this;
            if (num.terms == o.num.terms) return ScalarFraction(o.den, den);
            if (den.terms == o.den.terms) return ScalarFraction(num, o.num);
        }
        return ScalarFraction(num * o.den, den * o.num);
    }
    ScalarFraction operator-() const {
        ScalarFraction r = *this;
        r.num = -r.num;
        return r;
    }
    ScalarFraction conj() const { return ScalarFraction(num.conj(), den.conj()); }

    /* a/b == c/d  iff  ad - cb == 0, exactly */
    bool equals(const ScalarFraction& o) const { return (num * o.den - o.num * den).isZero(); }

    std::complex<double> eval(const EvalPoint& pt, double denFloor = 1e-12) const {
        std::complex<double> d = den.eval(pt.angles, pt.params);
        if (std::abs(d) <= denFloor) {
            std::ostringstream os;
            os << "scalar: denominator magnitude " << std::abs(d) << " below floor " << denFloor
               << " at point [" << pt.describe(*num.env) << "]";
            throw EvalError(os.str());
        }
        return num.eval(pt.angles, pt.params) / d;
    }

  private:
    void normalize() {
        if (num.isZero()) {
            den = OscillatorElement::constant(num.env, GaussianRational(1));
            return;
        }
        /* strip common monomial content */
        Mono ln = num.minExponents(), ld = den.minExponents();
        Mono shift(ln.size(), 0);
        bool any = false;
        for (size_t k = 0; k < ln.size(); ++k) {
            shift[k] = -std::min(ln[k], ld[k]);
            any |= shift[k] != 0;
        }
        if (any) {
            num = num.shifted(shift);
            den = den.shifted(shift);
        }
        /* cancel polynomial content when both sides live on one slot */
        if (!den.isConstant()) {
            int sd = den.singleSlot();
            int sn = num.singleSlot();
            if (sd >= 0 && (sn == -1 || sn == sd)) {
                OscillatorElement g = uniGcd(num, den, sd);
                if (!g.isConstant()) {
                    num = num.divExact(g);
                    den = den.divExact(g);
                }
            }
        }
        /* single-term denominator with no parameter content folds into num */
        if (den.terms.size() == 1) {
            const Mono& m = den.terms.begin()->first;
            size_t nOsc = num.env->osc.size();
            bool parFree = true;
            for (size_t k = nOsc; k < m.size(); ++k) parFree &= m[k] == 0;
            if (parFree) {
                Mono inv(m.size(), 0);
                for (size_t k = 0; k < nOsc; ++k) inv[k] = -m[k];
                GaussianRational c = den.terms.begin()->second;
                OscillatorElement n2(num.env);
                for (auto& [mm, cc] : num.terms) {
                    Mono t = mm;
                    for (size_t k = 0; k < nOsc; ++k) t[k] += inv[k];
                    n2.terms[t] = cc / c;
                }
                num = n2;
                den = OscillatorElement::constant(num.env, GaussianRational(1));
            }
        }
    }
};

inline ScalarFraction operator*(const GaussianRational& c, const ScalarFraction& f) {
    return ScalarFraction(f.num * c, f.den);
}

} // namespace acslab
