#include "acslab/certificate.hpp"
#include "acslab/scalar_parse.hpp"

#include <optional>
#include <sstream>

namespace acslab {

namespace {

const Int kScale = Int(1) << 64;

OscillatorElement stripContent(const OscillatorElement& p) {
    Mono lo = p.minExponents();
    for (auto& e : lo) e = -e;
    return p.shifted(lo);
}

std::vector<int> activeVars(const OscillatorElement& p) {
    std::vector<int> out;
    size_t nOsc = p.env->osc.size();
    for (size_t k = 0; k < nOsc; ++k) {
        int lo = 0, hi = 0;
        bool first = true;
        for (auto& [m, c] : p.terms) {
            (void)c;
            if (first) { lo = hi = m[k]; first = false; continue; }
            lo = std::min(lo, m[k]);
            hi = std::max(hi, m[k]);
        }
        if (hi > lo) out.push_back(int(k));
    }
    return out;
}

/* lambda with a == core * lambda, if any */
std::optional<GaussianRational> ratioOf(const OscillatorElement& a, const OscillatorElement& core) {
    if (a.terms.size() != core.terms.size()) return std::nullopt;
    auto ja = a.terms.begin(), jc = core.terms.begin();
    if (ja->first != jc->first) return std::nullopt;
    GaussianRational lambda = ja->second / jc->second;
    if ((a - core * lambda).isZero()) return lambda;
    return std::nullopt;
}

struct Dominance {
    bool ok = false;
    std::string detail;
};

Dominance dominantTerm(const OscillatorElement& f) {
    Dominance best;
    for (auto& [m0, c0] : f.terms) {
        Rational lo = sqrtLowerBound(c0.normSq());
        Rational rest(0);
        for (auto& [m, c] : f.terms) {
            if (m == m0) continue;
            rest += sqrtUpperBound(c.normSq());
        }
        if (lo > rest) {
            std::ostringstream os;
            os << "factor " << render(f) << ": dominant term has |coeff| >= "
               << lo.convert_to<double>() << " > " << rest.convert_to<double>()
               << " >= sum of the others";
            return {true, os.str()};
        }
    }
    best.detail = "factor " + render(f) + ": no term dominates the rest";
    return best;
}

} // namespace

Rational sqrtLowerBound(const Rational& r) {
    if (r < 0) throw std::domain_error("certificate: sqrt of negative");
    Int scaled = (numerator(r) * kScale * kScale) / denominator(r);
    return Rational(sqrt(scaled), kScale);
}

Rational sqrtUpperBound(const Rational& r) {
    if (r < 0) throw std::domain_error("certificate: sqrt of negative");
    Int scaled = (numerator(r) * kScale * kScale) / denominator(r);
    return Rational(sqrt(scaled) + 1, kScale);
}

std::vector<OscillatorElement> splitFactors(const OscillatorElement& p) {
    std::vector<OscillatorElement> out, stack{stripContent(p)};
    while (!stack.empty()) {
        OscillatorElement f = stack.back();
        stack.pop_back();
        if (f.terms.size() <= 1) continue;    // monomials never vanish
        std::vector<int> vars = activeVars(f);
        bool split = false;
        if (vars.size() >= 2) {
            for (int k : vars) {
                std::map<int, OscillatorElement> slices;
                for (auto& [m, c] : f.terms) {
                    Mono mm = m;
                    int e = mm[size_t(k)];
                    mm[size_t(k)] = 0;
                    slices.try_emplace(e, f.env).first->second.addTerm(mm, c);
                }
                const OscillatorElement& core = slices.begin()->second;
                OscillatorElement uni(f.env);
                bool allProp = true;
                for (auto& [e, s] : slices) {
                    auto lambda = ratioOf(s, core);
                    if (!lambda) { allProp = false; break; }
                    Mono xm(f.env->slots(), 0);
                    xm[size_t(k)] = e;
                    uni.addTerm(xm, *lambda);
                }
                if (!allProp) continue;
                stack.push_back(stripContent(uni));
                if (core.terms.size() > 1) stack.push_back(stripContent(core));
                split = true;
                break;
            }
        }
        if (!split) out.push_back(f);
    }
    return out;
}

Certificate certifyNonvanishing(const OscillatorElement& p,
                                const std::vector<GaussianRational>& paramValues) {
    OscillatorElement q = p.substituteParams(paramValues);
    if (q.isZero()) return {false, "identically zero"};
    if (q.terms.size() == 1) return {true, "single monomial " + render(q)};
    std::vector<OscillatorElement> factors = splitFactors(q);
    std::ostringstream os;
    for (size_t i = 0; i < factors.size(); ++i) {
        Dominance d = dominantTerm(factors[i]);
        if (!d.ok) return {false, d.detail};
        os << (i ? "; " : "") << d.detail;
    }
    if (factors.empty()) return {true, "invertible monomial " + render(q)};
    return {true, os.str()};
}

} // namespace acslab
