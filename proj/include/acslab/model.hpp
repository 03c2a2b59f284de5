#pragma once

#include "acslab/certificate.hpp"
#include "acslab/form.hpp"
#include "acslab/linalg.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace acslab {

using SRow = std::vector<ScalarFraction>;
using SMat = std::vector<SRow>;

struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

enum class FrameKind { ComplexPaired, Real };

/* vector field, components over the background frame */
struct VectorField {
    GenEnvPtr env;
    SRow comp;
};

struct RankReport {
    std::string model;
    int genericRank = 0;
    int maxRank = 0;
    int gridSize = 0;
    int sampledMinRank = 0;
    /* oscillator name -> angle as a fraction of a full turn, at the first
     * grid point attaining the minimum */
    std::vector<std::pair<std::string, Rational>> witness;
    Certificate certificate;
    std::string classification;
};

struct BracketEntry {
    int i = 0, j = 0;                     // 1-based frame indices, i < j
    std::map<int, GaussianRational> out;  // frame index -> coefficient of [e_i, e_j]
};

/* column index of the pair (j,k), 0 <= j < k < n, pairs ordered
 * lexicographically */
inline int pairColIndex(int n, int j, int k) {
    return j * (2 * n - j - 1) / 2 + (k - j - 1);
}

/* Almost complex structure presented by a background coframe b^0..b^{2n-1}
 * with exterior-derivative data, a derivation table for the dual frame, and
 * a declared (1,0)-coframe.  ComplexPaired backgrounds list conjugate pairs
 * (b^{n+k} = conj b^k); Real backgrounds are fixed by conjugation. */
struct FramedModel {
    GenEnvPtr env;
    int n = 0;  // complex dimension; the background has 2n covectors
    FrameKind kind = FrameKind::ComplexPaired;
    std::string origin;
    std::vector<std::string> backNames;                  // 2n
    std::vector<MaskForm> dBack;                         // d of each background covector
    std::vector<std::vector<OscillatorElement>> dirOsc;  // [frame 2n][oscillator]
    SMat coframe;                                        // n x 2n rows of the (1,0) forms
    std::vector<GaussianRational> paramValues;           // one per parameter

    /* derived by finalize() */
    SMat M, Minv;
    SMat Jframe;                          // J on the background frame, columns are images
    std::vector<Form> backImages;         // each background covector in the omega basis
    std::vector<MaskForm> img10, img01;   // omega_i and conj omega_i over the background

    int dim() const { return 2 * n; }
    int conjIndex(int a) const { return kind == FrameKind::ComplexPaired ? (a + n) % (2 * n) : a; }
    int maxRank() const { return n < (n * (n - 1)) / 2 ? n : (n * (n - 1)) / 2; }
    void finalize();

    MaskForm conjMask(const MaskForm& f) const;
    OscillatorElement dirDerivPoly(int a, const OscillatorElement& p) const;
    ScalarFraction dirDeriv(int a, const ScalarFraction& f) const;
    MaskForm dScalar(const ScalarFraction& f) const;
    MaskForm dMask(const MaskForm& f) const;
    Form toBigraded(const MaskForm& f) const;
    MaskForm fromBigraded(const Form& f) const;
    Form dForm(const Form& f) const;

    Form mubar(int i) const;  // 0-based coframe row
    SMat mubarMatrix() const;
    int genericRank() const;
    EvalPoint evalPoint(const std::vector<Rational>& turns) const;
    int rankAt(const EvalPoint& p, double tol = 1e-9) const;
    RankReport minSampledRank(int gridSize, double tol = 1e-9) const;
    Certificate certifyMaxRank() const;

    VectorField frameVector(int a) const;
    VectorField theta(int i) const;     // dual frame of the (1,0) coframe
    VectorField thetaBar(int i) const;
    VectorField applyJ(const VectorField& x) const;
    VectorField bracket(const VectorField& x, const VectorField& y) const;
    VectorField nijenhuis(const VectorField& x, const VectorField& y) const;
    ScalarFraction pairOmega(int i, const VectorField& x) const;
    bool checkIdentification() const;   // N = 4 mubar on the (0,1) frame
    bool isC2Shaped() const;
    Form dbarFunction(const OscillatorElement& g) const;
};

FramedModel fromLieAlgebra(int dim, const std::vector<BracketEntry>& brackets, const GMat& J,
                           const std::string& origin);
FramedModel torusMni(int n, const GaussianRational& A);
FramedModel c2Example(const std::string& fExpr);
FramedModel t6Rank2();
FramedModel mappingTorusS1S3(int m);
FramedModel productModel(const FramedModel& a, const FramedModel& b);

/* standard block J: e_{2k+1} -> e_{2k+2} */
GMat standardJ(int dim);
/* P J0 P^{-1} for a deterministically seeded unimodular integer P */
GMat conjugatedStandardJ(int dim, unsigned seed);
FramedModel abelianModel(const GMat& J, const std::string& origin);

} // namespace acslab
