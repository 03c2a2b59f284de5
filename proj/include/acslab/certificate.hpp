#pragma once
/* Proof that an oscillator polynomial has no zeros on the torus.  After
 * substituting exact parameter values the element is split into univariate
 * factors where coefficient slices are proportional; each factor passes when
 * some term strictly dominates the sum of the others in absolute value,
 * compared through exact rational square-root bounds.  "certified" false
 * means no proof was found, not a disproof. */

#include "oscillator.hpp"

namespace acslab {

struct Certificate {
    bool certified = false;
    std::string detail;
};

/* rational bounds L <= sqrt(r) < U with denominator 2^64 */
Rational sqrtLowerBound(const Rational& r);
Rational sqrtUpperBound(const Rational& r);

/* factor an element with parameter slots already cleared; the product of the
 * result equals the input up to an invertible monomial times a constant */
std::vector<OscillatorElement> splitFactors(const OscillatorElement& p);

Certificate certifyNonvanishing(const OscillatorElement& p,
                                const std::vector<GaussianRational>& paramValues);

} // namespace acslab
