#pragma once
/* Finite bigraded complexes over the Gaussian rationals carrying four
 * differentials mubar, dbar, del, mu of bidegrees (-1,2), (0,1), (1,0),
 * (2,-1).  Cohomology tables (Dolbeault both ways, Bott-Chern, Aeppli,
 * de Rham), spectral pages for the column filtration, the comparison
 * diagram between the theories, and the cup pairing on complexes that
 * come with an invariant coframe basis. */

#include "form.hpp"
#include "linalg.hpp"
#include "model.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace acslab {

struct FourComplexError : std::runtime_error {
    explicit FourComplexError(const std::string& what) : std::runtime_error(what) {}
};

using Bidegree = std::pair<int, int>;

enum class Diff { Mubar = 0, Dbar = 1, Del = 2, Mu = 3 };

inline Bidegree diffShift(Diff k) {
    static const Bidegree s[4] = {{-1, 2}, {0, 1}, {1, 0}, {2, -1}};
    return s[int(k)];
}

inline const char* diffName(Diff k) {
    static const char* n[4] = {"mubar", "dbar", "del", "mu"};
    return n[int(k)];
}

/* wedge-monomial bookkeeping for complexes built from an invariant coframe;
 * elems[(p,q)] lists the (I, K) index masks in basis order */
struct WedgeBasis {
    int n = 0;
    std::map<Bidegree, std::vector<BiMask>> elems;
};

struct FourComplex {
    std::map<Bidegree, int> dims;
    /* matrices act on column coordinate vectors; diffs[k] maps the space at
     * (p,q) to the one at (p,q) + diffShift(k); absent entries are zero */
    std::array<std::map<Bidegree, GMat>, 4> diffs;
    std::optional<WedgeBasis> basis;

    int dimAt(int p, int q) const {
        auto it = dims.find({p, q});
        return it == dims.end() ? 0 : it->second;
    }
    int dimAt(Bidegree pq) const { return dimAt(pq.first, pq.second); }
    GMat matAt(Diff k, int p, int q) const;
    GMat matAt(Diff k, Bidegree pq) const { return matAt(k, pq.first, pq.second); }
    int maxDegree() const;
    int totalDim(int k) const;

    /* drops zero-dimensional entries, then checks degree bounds and matrix
     * shapes; throws FourComplexError on a malformed complex */
    void validate();
};

struct RelationReport {
    bool ok = true;
    std::string violated;
    Bidegree at{0, 0};
};

/* checks the seven composition identities; on failure reports the first
 * violated one in catalogue order together with its source bidegree */
RelationReport verifyRelations(const FourComplex& A);

/* bigraded complex of invariant forms of a constant-coefficient model,
 * with the wedge basis attached */
FourComplex fromLeftInvariant(const FramedModel& md);

struct CohomologyTable {
    std::string theory;
    bool byTotal = false;                   /* de Rham: keys are (k, 0) */
    std::map<Bidegree, int> table;
    std::map<Bidegree, GMat> reps;          /* rows: one representative per class,
                                               ambient coordinates (total for de Rham) */
    std::map<Bidegree, int> filtration;     /* de Rham only: (k, p) -> dim F^p H^k */
};

CohomologyTable hDol(const FourComplex& A);
CohomologyTable hDolbar(const FourComplex& A);
CohomologyTable hBottChern(const FourComplex& A);
CohomologyTable hAeppli(const FourComplex& A);
CohomologyTable hDeRham(const FourComplex& A);

/* largest sub complex on which mubar and mu vanish and del, dbar square to
 * zero, and the quotient by the images of mubar, dbar^2, del^2, mu; both are
 * genuine double complexes and the simplified identities are asserted */
FourComplex subDouble(const FourComplex& A);
FourComplex quotientDouble(const FourComplex& A);

struct SpectralPage {
    int r = 1;
    std::map<Bidegree, int> table;
    int degenerateFrom = 1;   /* smallest r whose page already equals the limit */
};

/* pages 1..rMax of the spectral sequence of the column filtration
 * F^p = sum of columns >= p on the totalized complex */
std::vector<SpectralPage> frolicher(const FourComplex& A, int rMax);

struct DiagramReport {
    bool commutes = false;
    bool isoBcDol = false, isoBcDolbar = false, isoBcDr = false;
    bool isoDolA = false, isoDolbarA = false, isoDrA = false;
    bool ddbarProperty = false;
    std::string detail;
};

/* the six induced maps between Bott-Chern, the two Dolbeault theories,
 * de Rham, and Aeppli; commutativity is checked exactly */
DiagramReport diagramMaps(const FourComplex& A);

struct AeppliClass {
    Bidegree pq{0, 0};
    GRow coords;   /* coordinates in the hAeppli representative basis */
};

/* cup pairing: a Bott-Chern representative (ambient coordinates at bcDeg,
 * closed for all four differentials) wedged with an Aeppli representative,
 * projected to the quotient double complex; needs the wedge basis */
AeppliClass pairing(const FourComplex& A, Bidegree bcDeg, const GRow& bcRep,
                    Bidegree aDeg, const GRow& aRep);

}  // namespace acslab
