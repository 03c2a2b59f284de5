#include "acslab/form.hpp"
#include "acslab/scalar_parse.hpp"

#include <sstream>

namespace acslab {

namespace {

std::string joinTerm(const ScalarFraction& s, const std::vector<std::string>& factors) {
    std::ostringstream os;
    os << "(" << render(s) << ")";
    for (size_t k = 0; k < factors.size(); ++k) os << (k ? "^" : "*") << factors[k];
    return os.str();
}

} // namespace

std::string render(const Form& f) {
    if (f.isZero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, s] : f.c) {
        std::vector<std::string> factors;
        for (int i : bitsOf(m.I)) factors.push_back("w" + std::to_string(i + 1));
        for (int i : bitsOf(m.K)) factors.push_back("wb" + std::to_string(i + 1));
        os << (first ? "" : " + ") << joinTerm(s, factors);
        first = false;
    }
    return os.str();
}

std::string render(const MaskForm& f, const std::vector<std::string>& names) {
    if (f.isZero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, s] : f.c) {
        std::vector<std::string> factors;
        for (int a : bitsOf(m)) factors.push_back(names[size_t(a)]);
        os << (first ? "" : " + ") << joinTerm(s, factors);
        first = false;
    }
    return os.str();
}

} // namespace acslab
