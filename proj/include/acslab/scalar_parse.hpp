#pragma once
/* Text form of scalars.  Grammar (whitespace-insensitive):
 *   RAT      := INT | INT "/" POSINT
 *   FACTOR   := RAT | "i" | GEN ("^" INT)?
 *   TERM     := FACTOR (("*")? FACTOR)*
 *   POLY     := ("-")? TERM (("+"|"-") TERM)*
 *   FRACTION := POLY ("/" "(" POLY ")")?
 * GEN names come from the environment: oscillators u1.., parameters A1.. with
 * conjugates cA1...  Rendered output always re-parses to an equal value. */

#include "scalar.hpp"

namespace acslab {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error("parse: " + what) {}
};

Rational parseRational(const std::string& s);
GaussianRational parseGaussian(const std::string& s);
OscillatorElement parsePoly(const GenEnvPtr& env, const std::string& s);
ScalarFraction parseFraction(const GenEnvPtr& env, const std::string& s);

std::string render(const Rational& r);
std::string render(const GaussianRational& g);
std::string render(const OscillatorElement& p);
std::string render(const ScalarFraction& f);

} // namespace acslab
