#include "acslab/obstructions.hpp"

namespace acslab {

namespace {

Int binom(const Int& n, const Int& k) {
    if (k < 0 || k > n) return 0;
    Int r = 1;
    for (Int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

std::string definitenessName(Definiteness d) {
    switch (d) {
        case Definiteness::PositiveDefinite: return "positive-definite";
        case Definiteness::NegativeDefinite: return "negative-definite";
        case Definiteness::Indefinite: return "indefinite";
        case Definiteness::ZeroForm: return "zero-form";
    }
    return "";
}

void Dim4Invariants::validate() const {
    if (bPlus < 0 || bMinus < 0)
        throw ObstructionError("dim4 invariants: negative b_plus or b_minus");
    if (sigma != bPlus - bMinus)
        throw ObstructionError("dim4 invariants: sigma does not equal b_plus - b_minus");
    Int b2 = bPlus + bMinus;
    bool ok = false;
    switch (definiteness) {
        case Definiteness::ZeroForm: ok = b2 == 0; break;
        case Definiteness::PositiveDefinite: ok = bMinus == 0 && bPlus > 0; break;
        case Definiteness::NegativeDefinite: ok = bPlus == 0 && bMinus > 0; break;
        case Definiteness::Indefinite: ok = bPlus > 0 && bMinus > 0; break;
    }
    if (!ok)
        throw ObstructionError("dim4 invariants: definiteness flag " +
                               definitenessName(definiteness) +
                               " does not match b_plus, b_minus");
}

bool mniNecessaryDim4(const Int& chi, const Int& sigma) {
    return 5 * chi + 6 * sigma == 0;
}

Dim6Report mniNecessaryDim6(const ChernNumbers6& c) {
    Dim6Report r;
    r.c1CubedZero = c.c1c1c1 == 0;
    r.c1c2Zero = c.c1c2 == 0;
    r.note =
        "the vanishing of c1 is a class-level condition; only its consequences "
        "on the Chern numbers c1^3 and c1 c2 are checked here";
    return r;
}

Dim8Report mniNecessaryDim8(const ChernNumbers8& c) {
    Dim8Report r;
    r.check1 = c.c1c3 + 8 * c.c1p4 + c.c1sqC2 == 0;
    r.check2 = c.c4 - c.c1c3 + c.c1sqC2 == 0;
    r.derivedC4 = c.c4 == 2 * c.c1c3 + 8 * c.c1p4;
    r.sigma = Rational(3 * c.c2sq - 14 * c.c1c3 + 14 * c.c4 - c.c1p4 + 4 * c.c1sqC2, 45);
    r.sigmaIntegral = denominator(r.sigma) == 1;
    r.chiDiv6 = c.c4 % 6 == 0;
    return r;
}

ClassifyVerdict fourMfdClassify(const Dim4Invariants& inv, std::optional<bool> admitsAcsKnown) {
    inv.validate();
    ClassifyVerdict v;
    bool linear = 5 * inv.chi + 6 * inv.sigma == 0;
    bool definite = inv.definiteness == Definiteness::PositiveDefinite ||
                    inv.definiteness == Definiteness::NegativeDefinite;
    v.condC = linear && inv.sigma % 4 == 0 && (!definite || inv.bPlus == 0);
    switch (inv.definiteness) {
        case Definiteness::ZeroForm: v.caseUsed = "b2-zero"; break;
        case Definiteness::Indefinite: v.caseUsed = "indefinite"; break;
        case Definiteness::NegativeDefinite: v.caseUsed = "negative-definite"; break;
        case Definiteness::PositiveDefinite: v.caseUsed = ""; break;
    }
    if (admitsAcsKnown) {
        v.condB = *admitsAcsKnown && linear;
        if (*v.condB != v.condC)
            throw ObstructionError(
                "four_mfd_classify: the two characterizations disagree; the "
                "given invariants are not those of a closed 4-manifold");
    }
    return v;
}

CodimResult degenerateCodim(const Int& n) {
    if (n < 2) throw ObstructionError("degenerate_codim: n must be at least 2");
    CodimResult r;
    r.codim = binom(n, 2) - n + 1;
    r.margin = Rational(n * n - 5 * n + 2, 2);
    r.marginPositive = r.margin > 0;
    return r;
}

JetResult jetMinK(int n) {
    if (n < 3) throw ObstructionError("jet_min_k: n must be at least 3");
    for (int k = 1;; ++k) {
        Int lhs = n * binom(n + k, k);
        Int rhs = 2 * binom(n + k + 1, k + 1);
        if (lhs > rhs) {
            // cross-check against the equivalent linear form 0 > n + (2-n)k + 2
            if (!(0 > n + (2 - n) * k + 2))
                throw ObstructionError("jet_min_k: binomial and linear thresholds disagree");
            return {k, lhs, rhs};
        }
    }
}

}  // namespace acslab
