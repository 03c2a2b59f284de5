#pragma once

// Integer and rational arithmetic behind the topological existence checks:
// characteristic-number constraints in real dimensions 4, 6 and 8, the
// codimension count for the degenerate stratum of Nijenhuis tensors, and the
// jet-dimension threshold.

#include "acslab/gaussian.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace acslab {

struct ObstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Definiteness { PositiveDefinite, NegativeDefinite, Indefinite, ZeroForm };

std::string definitenessName(Definiteness d);

struct Dim4Invariants {
    Int chi{0};
    Int sigma{0};
    Int bPlus{0};
    Int bMinus{0};
    Definiteness definiteness = Definiteness::ZeroForm;

    // throws unless sigma = b+ - b- with b± >= 0 and the definiteness flag
    // matches the signs of the form
    void validate() const;
};

// Chern numbers of an almost complex 6-manifold (degree-6 products)
struct ChernNumbers6 {
    Int c1c1c1{0};
    Int c1c2{0};
    Int c3{0};
};

// Chern numbers of an almost complex 8-manifold (degree-8 products);
// c4 is the Euler characteristic of the underlying manifold
struct ChernNumbers8 {
    Int c1p4{0};
    Int c1sqC2{0};
    Int c1c3{0};
    Int c2sq{0};
    Int c4{0};
};

// 4-manifolds: a maximally non-integrable structure forces 5 chi + 6 sigma = 0
bool mniNecessaryDim4(const Int& chi, const Int& sigma);

struct Dim6Report {
    bool c1CubedZero = false;
    bool c1c2Zero = false;
    std::string note;
    bool pass() const { return c1CubedZero && c1c2Zero; }
};

// 6-manifolds: the forced vanishing of c1 makes every Chern number with a
// c1 factor vanish; torsion statements have no number-level content and are
// recorded in the note only
Dim6Report mniNecessaryDim6(const ChernNumbers6& c);

struct Dim8Report {
    bool check1 = false;         // c1c3 + 8 c1^4 + c1^2 c2 = 0
    bool check2 = false;         // c4 - c1c3 + c1^2 c2 = 0
    bool derivedC4 = false;      // c4 = 2 c1c3 + 8 c1^4
    bool sigmaIntegral = false;  // the signature formula gives an integer
    bool chiDiv6 = false;        // 6 | c4
    Rational sigma{0};           // (3 c2^2 - 14 c1c3 + 14 c4 - c1^4 + 4 c1^2 c2)/45
    bool pass() const { return check1 && check2 && derivedC4 && sigmaIntegral && chiDiv6; }
};

Dim8Report mniNecessaryDim8(const ChernNumbers8& c);

struct ClassifyVerdict {
    std::optional<bool> condB;  // set when acs existence was supplied
    bool condC = false;
    std::string caseUsed;  // "b2-zero", "indefinite", "negative-definite", or ""
};

// Arithmetic side of the characterization of closed 4-manifolds carrying a
// maximally non-integrable structure.  condB = (an acs exists and
// 5 chi + 6 sigma = 0); condC = (5 chi + 6 sigma = 0, 4 | sigma, and a
// definite intersection form forces b+ = 0).  When acs existence is supplied
// the two conditions must agree; a mismatch means the invariants are not
// those of a closed 4-manifold and is an error.
ClassifyVerdict fourMfdClassify(const Dim4Invariants& inv,
                                std::optional<bool> admitsAcsKnown = std::nullopt);

struct CodimResult {
    Int codim{0};          // C(n,2) - n + 1
    Rational margin{0};    // (n^2 - 5n + 2)/2
    bool marginPositive = false;
};

// codimension of the locus of degenerate Nijenhuis tensors inside the space
// of all of them, and the transversality margin codim - n
CodimResult degenerateCodim(const Int& n);

struct JetResult {
    int k = 0;
    Int lhs{0};  // n * C(n+k, k)
    Int rhs{0};  // 2 * C(n+k+1, k+1)
};

// smallest k >= 1 with n * C(n+k,k) > 2 * C(n+k+1,k+1); defined for n >= 3
JetResult jetMinK(int n);

}  // namespace acslab
