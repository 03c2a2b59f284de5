#pragma once
/* Laurent polynomials in unit-modulus oscillator generators u_1..u_m together
 * with formal constant parameters. Each parameter P contributes a pair of
 * generators (P, cP); conjugation swaps the pair and inverts oscillators.
 * Exponents: oscillators range over Z, parameter slots over Z>=0. */

#include "gaussian.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace acslab {

struct EnvMismatch : std::runtime_error {
    EnvMismatch() : std::runtime_error("scalar: generator-set mismatch") {}
};

/* Generator environment shared by every scalar of one model. */
struct GenEnv {
    std::vector<std::string> osc;    // oscillator names, e.g. u1, u2
    std::vector<std::string> par;    // parameter names; par[j] pairs with "c"+par[j]

    int slots() const { return int(osc.size() + 2 * par.size()); }
    int oscIndex(const std::string& name) const {
        for (size_t k = 0; k < osc.size(); ++k)
            if (osc[k] == name) return int(k);
        return -1;
    }
    /* slot of parameter j's direct generator; +1 is its conjugate */
    int parSlot(int j) const { return int(osc.size()) + 2 * j; }
    int parIndex(const std::string& name) const {
        for (size_t k = 0; k < par.size(); ++k)
            if (par[k] == name) return int(k);
        return -1;
    }
    std::string slotName(int s) const {
        if (s < int(osc.size())) return osc[s];
        int j = (s - int(osc.size())) / 2;
        return (s - int(osc.size())) % 2 == 0 ? par[j] : "c" + par[j];
    }
    bool operator==(const GenEnv& o) const { return osc == o.osc && par == o.par; }
};

using GenEnvPtr = std::shared_ptr<const GenEnv>;

inline GenEnvPtr emptyEnv() {
    static GenEnvPtr e = std::make_shared<GenEnv>();
    return e;
}

using Mono = std::vector<int>;

inline bool envCompatible(const GenEnvPtr& a, const GenEnvPtr& b) {
    return a == b || *a == *b;
}

struct OscillatorElement {
    GenEnvPtr env;
    std::map<Mono, GaussianRational> terms;   // no zero coefficients stored

    OscillatorElement() : env(emptyEnv()) {}
    explicit OscillatorElement(GenEnvPtr e) : env(std::move(e)) {}

    static OscillatorElement constant(GenEnvPtr e, const GaussianRational& c) {
        OscillatorElement r(std::move(e));
        if (!c.isZero()) r.terms[Mono(r.env->slots(), 0)] = c;
        return r;
    }
    static OscillatorElement generatorSlot(GenEnvPtr e, int slot, int exp = 1) {
        OscillatorElement r(std::move(e));
        Mono m(r.env->slots(), 0);
        m[slot] = exp;
        r.terms[m] = GaussianRational(1);
        return r;
    }
    static OscillatorElement oscillator(const GenEnvPtr& e, const std::string& name, int exp = 1) {
        int k = e->oscIndex(name);
        if (k < 0) throw std::runtime_error("scalar: unknown oscillator " + name);
        return generatorSlot(e, k, exp);
    }

    bool isZero() const { return terms.empty(); }
    bool isConstant() const {
        if (terms.empty()) return true;
        if (terms.size() > 1) return false;
        const Mono& m = terms.begin()->first;
        return std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
    }
    GaussianRational asConstant() const {
        if (terms.empty()) return GaussianRational(0);
        if (!isConstant()) throw std::runtime_error("scalar: non-constant where constant expected");
        return terms.begin()->second;
    }

    void addTerm(const Mono& m, const GaussianRational& c) {
        if (c.isZero()) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.isZero()) terms.erase(it);
        }
    }

    OscillatorElement operator+(const OscillatorElement& o) const {
        if (!envCompatible(env, o.env)) return liftedOp(o, +1);
        OscillatorElement r = *this;
        for (auto& [m, c] : o.terms) r.addTerm(m, c);
        return r;
    }
    OscillatorElement operator-(const OscillatorElement& o) const {
        if (!envCompatible(env, o.env)) return liftedOp(o, -1);
        OscillatorElement r = *this;
        for (auto& [m, c] : o.terms) r.addTerm(m, -c);
        return r;
    }
    OscillatorElement operator-() const {
        OscillatorElement r(env);
        for (auto& [m, c] : terms) r.terms[m] = -c;
        return r;
    }
    OscillatorElement operator*(const OscillatorElement& o) const {
        if (!envCompatible(env, o.env)) return liftedMul(o);
        OscillatorElement r(env);
        for (auto& [m1, c1] : terms)
            for (auto& [m2, c2] : o.terms) {
                Mono m = m1;
                for (size_t k = 0; k < m.size(); ++k) m[k] += m2[k];
                r.addTerm(m, c1 * c2);
            }
        return r;
    }
    OscillatorElement operator*(const GaussianRational& c) const {
        OscillatorElement r(env);
        if (c.isZero()) return r;
        for (auto& [m, co] : terms) r.terms[m] = co * c;
        return r;
    }

    bool operator==(const OscillatorElement& o) const {
        return envCompatible(env, o.env) ? terms == o.terms : (*this - o).isZero();
    }

    /* conjugation: coefficients conjugated, u -> u^{-1}, parameter pairs swapped */
    OscillatorElement conj() const {
        OscillatorElement r(env);
        size_t nOsc = env->osc.size();
        for (auto& [m, c] : terms) {
            Mono mm = m;
            for (size_t k = 0; k < nOsc; ++k) mm[k] = -mm[k];
            for (size_t j = 0; j < env->par.size(); ++j)
                std::swap(mm[nOsc + 2 * j], mm[nOsc + 2 * j + 1]);
            r.terms[mm] = c.conj();
        }
        return r;
    }

    /* multiply by the monomial with exponent vector m (componentwise add) */
    OscillatorElement shifted(const Mono& d) const {
        OscillatorElement r(env);
        for (auto& [m, c] : terms) {
            Mono mm = m;
            for (size_t k = 0; k < mm.size(); ++k) mm[k] += d[k];
            r.terms[mm] = c;
        }
        return r;
    }

    /* slot carrying every nonzero exponent: -1 for constants, -2 when
     * several slots appear */
    int singleSlot() const {
        int s = -1;
        for (auto& [m, c] : terms) {
            (void)c;
            for (size_t k = 0; k < m.size(); ++k)
                if (m[k] != 0) {
                    if (s == -1) s = int(k);
                    else if (s != int(k)) return -2;
                }
        }
        return s;
    }

    /* componentwise minimum exponent over all terms (0 if zero element) */
    Mono minExponents() const {
        Mono lo(env->slots(), 0);
        bool first = true;
        for (auto& [m, c] : terms) {
            (void)c;
            if (first) { lo = m; first = false; continue; }
            for (size_t k = 0; k < lo.size(); ++k) lo[k] = std::min(lo[k], m[k]);
        }
        return lo;
    }

    /* substitute exact values for all parameters (cP gets the conjugate value);
     * result lives in the same environment with parameter slots cleared */
    OscillatorElement substituteParams(const std::vector<GaussianRational>& vals) const {
        if (vals.size() != env->par.size())
            throw std::runtime_error("scalar: parameter value count mismatch");
        OscillatorElement r(env);
        size_t nOsc = env->osc.size();
        for (auto& [m, c] : terms) {
            GaussianRational coef = c;
            Mono mm = m;
            for (size_t j = 0; j < vals.size(); ++j) {
                if (m[nOsc + 2 * j] < 0 || m[nOsc + 2 * j + 1] < 0)
                    throw std::runtime_error("scalar: negative parameter exponent");
                for (int t = 0; t < m[nOsc + 2 * j]; ++t) coef *= vals[j];
                for (int t = 0; t < m[nOsc + 2 * j + 1]; ++t) coef *= vals[j].conj();
                mm[nOsc + 2 * j] = mm[nOsc + 2 * j + 1] = 0;
            }
            r.addTerm(mm, coef);
        }
        return r;
    }

    /* exact coefficients converted last: sum coef * monomial-value per term */
    std::complex<double> eval(const std::vector<double>& angles,
                              const std::vector<std::complex<double>>& params) const {
        if (angles.size() != env->osc.size() || params.size() != env->par.size())
            throw std::runtime_error("scalar: evaluation point shape mismatch");
        std::complex<double> acc{0.0, 0.0};
        size_t nOsc = env->osc.size();
        for (auto& [m, c] : terms) {
            double phase = 0;
            for (size_t k = 0; k < nOsc; ++k) phase += m[k] * angles[k];
            std::complex<double> v = std::polar(1.0, phase);
            auto ipow = [](std::complex<double> b, int e) {
                std::complex<double> w{1.0, 0.0};
                for (int t = 0; t < std::abs(e); ++t) w *= b;
                return e < 0 ? 1.0 / w : w;
            };
            for (size_t j = 0; j < params.size(); ++j) {
                v *= ipow(params[j], m[nOsc + 2 * j]);
                v *= ipow(std::conj(params[j]), m[nOsc + 2 * j + 1]);
            }
            acc += c.toComplex() * v;
        }
        return acc;
    }

    /* exact division, for fraction-free elimination; throws if not divisible */
    OscillatorElement divExact(const OscillatorElement& q) const;

    /* reinterpret into a larger environment: slotMap[k] = slot in the new env */
    OscillatorElement remapped(const GenEnvPtr& newEnv, const std::vector<int>& slotMap) const {
        OscillatorElement r(newEnv);
        for (auto& [m, c] : terms) {
            Mono mm(newEnv->slots(), 0);
            for (size_t k = 0; k < m.size(); ++k)
                if (m[k] != 0) mm[size_t(slotMap[k])] = m[k];
            r.terms[mm] = c;
        }
        return r;
    }

  private:
    /* empty-environment constants lift implicitly; anything else mismatches */
    OscillatorElement liftTo(const GenEnvPtr& target) const {
        if (env->slots() == 0) {
            OscillatorElement r(target);
            if (!terms.empty()) r.terms[Mono(target->slots(), 0)] = terms.begin()->second;
            return r;
        }
        throw EnvMismatch();
    }
    OscillatorElement liftedOp(const OscillatorElement& o, int sign) const {
        if (env->slots() == 0) return liftTo(o.env) + (sign > 0 ? o : -o);
        OscillatorElement ol = o.liftTo(env);
        return sign > 0 ? *this + ol : *this - ol;
    }
    OscillatorElement liftedMul(const OscillatorElement& o) const {
        if (env->slots() == 0) return liftTo(o.env) * o;
        return *this * o.liftTo(env);
    }
};

inline OscillatorElement operator*(const GaussianRational& c, const OscillatorElement& p) {
    return p * c;
}

/* Leading-term division in the Laurent ring. The map's lexicographic key
 * order is translation-invariant, so leading terms multiply and each step
 * strictly lowers lt(r); exact inputs terminate in #terms(quotient) steps.
 * Inexact Laurent division can descend forever, hence the cap. */
inline OscillatorElement OscillatorElement::divExact(const OscillatorElement& q) const {
    if (q.isZero()) throw std::domain_error("scalar: exact division by zero");
    if (!envCompatible(env, q.env)) throw EnvMismatch();
    OscillatorElement r = *this, quot(env);
    auto ld = q.terms.rbegin();
    for (long guard = 0; !r.isZero(); ++guard) {
        if (guard > 200000) throw std::domain_error("scalar: inexact division");
        auto lr = r.terms.rbegin();
        Mono m = lr->first;
        for (size_t k = 0; k < m.size(); ++k) m[k] -= ld->first[k];
        OscillatorElement t(env);
        t.terms[m] = lr->second / ld->second;
        quot = quot + t;
        r = r - t * q;
    }
    return quot;
}

/* ------------------------------------------------------------------ */
/* univariate Laurent gcd: enough to cancel the spurious denominator   */
/* factors produced by fraction-field elimination in one-oscillator    */
/* models                                                              */

namespace detail {

/* dense ordinary-polynomial coefficients in the given slot, lowest
 * exponent first; both ends nonzero for nonzero input */
inline std::vector<GaussianRational> denseUni(const OscillatorElement& a, int slot) {
    int lo = 0, hi = 0;
    bool first = true;
    for (auto& [m, c] : a.terms) {
        (void)c;
        int e = m[size_t(slot)];
        if (first) {
            lo = hi = e;
            first = false;
        }
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    std::vector<GaussianRational> v(size_t(hi - lo + 1), GaussianRational(0));
    for (auto& [m, c] : a.terms) v[size_t(m[size_t(slot)] - lo)] = c;
    return v;
}

inline void uniTrim(std::vector<GaussianRational>& a) {
    while (!a.empty() && a.back().isZero()) a.pop_back();
}

inline std::vector<GaussianRational> uniRem(std::vector<GaussianRational> a,
                                            const std::vector<GaussianRational>& b) {
    while (a.size() >= b.size() && !a.empty()) {
        GaussianRational f = a.back() / b.back();
        size_t off = a.size() - b.size();
        for (size_t k = 0; k < b.size(); ++k) a[off + k] = a[off + k] - f * b[k];
        a.pop_back();
        uniTrim(a);
    }
    return a;
}

} // namespace detail

/* monic gcd of the ordinary-polynomial parts of two Laurent elements
 * supported on one common slot (monomial content is a unit and ignored) */
inline OscillatorElement uniGcd(const OscillatorElement& a, const OscillatorElement& b, int slot) {
    auto x = detail::denseUni(a, slot), y = detail::denseUni(b, slot);
    while (!y.empty()) {
        auto r = detail::uniRem(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    GaussianRational l = x.back();
    OscillatorElement g(a.env);
    Mono m(size_t(a.env->slots()), 0);
    for (size_t k = 0; k < x.size(); ++k) {
        if (x[k].isZero()) continue;
        m[size_t(slot)] = int(k);
        g.terms[m] = x[k] / l;
    }
    return g;
}

} // namespace acslab
