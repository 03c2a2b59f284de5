#include "acslab/fourcomplex.hpp"

#include "acslab/scalar_parse.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <tuple>

namespace acslab {

namespace {

Bidegree addDeg(Bidegree a, Bidegree b) { return {a.first + b.first, a.second + b.second}; }

std::string degStr(Bidegree pq) {
    std::ostringstream os;
    os << "(" << pq.first << ", " << pq.second << ")";
    return os.str();
}

std::string rowStr(const GRow& v) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << render(v[i]);
    os << "]";
    return os.str();
}

GMat zeroMat(int rows, int cols) {
    return GMat(size_t(rows), GRow(size_t(cols), GaussianRational(0)));
}

GRow applyRow(const GMat& m, const GRow& v) {
    GRow out(m.size(), GaussianRational(0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (!m[i][j].isZero() && !v[j].isZero()) out[i] += m[i][j] * v[j];
    return out;
}

GMat applyRows(const GMat& rows, const GMat& m) {
    GMat out;
    out.reserve(rows.size());
    for (const GRow& r : rows) out.push_back(applyRow(m, r));
    return out;
}

/* row space of the columns of m, i.e. the image of x -> m x */
GMat colSpace(const GMat& m) {
    if (m.empty()) return {};
    return rowBasisT(transposeT(m, m[0].size()));
}

int pivotCol(const GRow& v) {
    for (size_t j = 0; j < v.size(); ++j)
        if (!v[j].isZero()) return int(j);
    return -1;
}

/* reduce v against reduced-echelon rows */
GRow reduceMod(const GMat& ech, GRow v) {
    for (const GRow& r : ech) {
        int pc = pivotCol(r);
        if (pc < 0 || v[size_t(pc)].isZero()) continue;
        GaussianRational f = v[size_t(pc)];
        for (size_t j = 0; j < v.size(); ++j) v[j] -= f * r[j];
    }
    return v;
}

bool inSpan(const GMat& ech, const GRow& v) { return rowIsZero(reduceMod(ech, v)); }

/* coefficients x with sum x_j rows_j = v, if any */
std::optional<GRow> solveCombo(const GMat& rows, const GRow& v) {
    size_t k = rows.size(), n = v.size();
    GMat aug(n, GRow(k + 1, GaussianRational(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) aug[i][j] = rows[j][i];
        aug[i][k] = v[i];
    }
    std::vector<int> piv = rrefT(aug);
    GRow x(k, GaussianRational(0));
    for (size_t r = 0; r < piv.size(); ++r) {
        if (piv[r] == int(k)) return std::nullopt;
        x[size_t(piv[r])] = aug[r][k];
    }
    return x;
}

/* basis of {v in span(src) : m v in span(wEch)} */
GMat preimage(const GMat& src, const GMat& m, const GMat& wEch) {
    if (src.empty()) return {};
    size_t t = m.size();
    if (t == 0) return rowBasisT(src);
    GMat images;
    images.reserve(src.size());
    for (const GRow& r : src) images.push_back(reduceMod(wEch, applyRow(m, r)));
    GMat coeff = kernelT(transposeT(images, t), src.size());
    GMat out;
    for (const GRow& a : coeff) {
        GRow v(src[0].size(), GaussianRational(0));
        for (size_t i = 0; i < src.size(); ++i) {
            if (a[i].isZero()) continue;
            for (size_t j = 0; j < v.size(); ++j) v[j] += a[i] * src[i][j];
        }
        out.push_back(std::move(v));
    }
    return rowBasisT(out);
}

/* representatives extending span(denEch) to span(denEch) + span(numRows) */
GMat extendBasis(const GMat& denEch, const GMat& numRows) {
    GMat cur = denEch, reps;
    for (const GRow& v : numRows) {
        GRow w = reduceMod(cur, v);
        int pc = pivotCol(w);
        if (pc < 0) continue;
        GaussianRational inv = GaussianRational(1) / w[size_t(pc)];
        for (auto& x : w) x = x * inv;
        reps.push_back(w);
        cur = rowBasisT(stackT(cur, GMat{w}));
    }
    return reps;
}

/* matrix of outer after inner starting at pq, with correct shape even when
 * the intermediate space is zero-dimensional */
GMat composeMats(const FourComplex& A, Diff inner, Diff outer, Bidegree pq) {
    Bidegree mid = addDeg(pq, diffShift(inner));
    Bidegree tgt = addDeg(mid, diffShift(outer));
    if (A.dimAt(mid) == 0) return zeroMat(A.dimAt(tgt), A.dimAt(pq));
    return mulT(A.matAt(outer, mid), A.matAt(inner, pq));
}

/* one bidegree of a cohomology theory: cocycles, boundaries, class reps */
struct Subq {
    GMat num, den, reps;
    int dim() const { return int(reps.size()); }
};

struct Theory {
    std::map<Bidegree, Subq> at;
    const Subq& operator[](Bidegree pq) const {
        static const Subq empty;
        auto it = at.find(pq);
        return it == at.end() ? empty : it->second;
    }
};

GRow classOfIn(const Subq& s, const GRow& v, const std::string& what) {
    auto combo = solveCombo(stackT(s.reps, s.den), v);
    if (!combo)
        throw FourComplexError(what + ": " + rowStr(v) + " is not a cocycle of the expected kind");
    return GRow(combo->begin(), combo->begin() + long(s.reps.size()));
}

void relationGuard(const FourComplex& A, const std::string& op) {
    RelationReport rr = verifyRelations(A);
    if (!rr.ok)
        throw FourComplexError(op + ": relation failure: " + rr.violated + " at " + degStr(rr.at));
}

CohomologyTable tableOf(const Theory& th, const std::string& name) {
    CohomologyTable t;
    t.theory = name;
    for (auto& [pq, s] : th.at) {
        if (s.dim() == 0) continue;
        t.table[pq] = s.dim();
        t.reps[pq] = s.reps;
    }
    return t;
}

/* ---------------------------------------------------------------- dolbeault */

/* two-stage subquotient: cohomology of the induced chain map on the level-one
 * cohomology of the lowering operator.  bar = true gives H_dbar(H_mubar),
 * bar = false the conjugate H_del(H_mu). */
Theory dolTheory(const FourComplex& A, bool bar) {
    Diff low = bar ? Diff::Mubar : Diff::Mu;
    Diff chain = bar ? Diff::Dbar : Diff::Del;
    std::string name = bar ? "dol" : "dolbar";
    Bidegree cs = diffShift(chain), ls = diffShift(low);

    std::map<Bidegree, GMat> Z, B;
    for (auto& [pq, dim] : A.dims) {
        Z[pq] = rowBasisT(kernelT(A.matAt(low, pq), size_t(dim)));
        B[pq] = colSpace(A.matAt(low, addDeg(pq, {-ls.first, -ls.second})));
    }
    auto zAt = [&](Bidegree pq) -> const GMat& {
        static const GMat empty;
        auto it = Z.find(pq);
        return it == Z.end() ? empty : it->second;
    };
    auto bAt = [&](Bidegree pq) -> const GMat& {
        static const GMat empty;
        auto it = B.find(pq);
        return it == B.end() ? empty : it->second;
    };

    Theory th;
    for (auto& [pq, dim] : A.dims) {
        (void)dim;
        Bidegree tq = addDeg(pq, cs);
        GMat m = A.matAt(chain, pq);
        for (const GRow& z : Z[pq])
            if (!inSpan(zAt(tq), applyRow(m, z)))
                throw FourComplexError(name + ": induced " + diffName(chain) +
                                       " ill-defined on cocycles at " + degStr(pq) +
                                       "; witness " + rowStr(z));
        for (const GRow& b : B[pq])
            if (!inSpan(bAt(tq), applyRow(m, b)))
                throw FourComplexError(name + ": induced " + diffName(chain) +
                                       " ill-defined on boundaries at " + degStr(pq) +
                                       "; witness " + rowStr(b));

        Subq s;
        s.num = preimage(Z[pq], m, bAt(tq));
        Bidegree sq = addDeg(pq, {-cs.first, -cs.second});
        s.den = rowBasisT(stackT(applyRows(zAt(sq), A.matAt(chain, sq)), B[pq]));
        for (const GRow& d : s.den)
            if (!inSpan(s.num, d))
                throw FourComplexError(name + ": boundary outside the cocycle space at " +
                                       degStr(pq) + "; witness " + rowStr(d));
        s.reps = extendBasis(s.den, s.num);
        th.at[pq] = std::move(s);
    }
    return th;
}

/* ------------------------------------------------- sub and quotient doubles */

struct DoubleOf {
    FourComplex C;
    std::map<Bidegree, GMat> basisRows;   /* ambient rows of the chosen basis */
    std::map<Bidegree, GMat> killed;      /* quotient only: echelon of the kernel */
    std::map<Bidegree, std::vector<int>> freeCols; /* quotient only */
};

DoubleOf subDoubleFull(const FourComplex& A) {
    DoubleOf out;
    std::map<Bidegree, GMat> S;
    for (auto& [pq, dim] : A.dims) {
        GMat cond = A.matAt(Diff::Mubar, pq);
        cond = stackT(cond, composeMats(A, Diff::Dbar, Diff::Dbar, pq));
        cond = stackT(cond, composeMats(A, Diff::Del, Diff::Del, pq));
        cond = stackT(cond, A.matAt(Diff::Mu, pq));
        S[pq] = rowBasisT(kernelT(cond, size_t(dim)));
    }
    auto sAt = [&](Bidegree pq) -> const GMat& {
        static const GMat empty;
        auto it = S.find(pq);
        return it == S.end() ? empty : it->second;
    };

    FourComplex C;
    for (auto& [pq, rows] : S)
        if (!rows.empty()) C.dims[pq] = int(rows.size());

    for (auto& [pq, rows] : S) {
        if (rows.empty()) continue;
        for (Diff d : {Diff::Dbar, Diff::Del}) {
            Bidegree tq = addDeg(pq, diffShift(d));
            GMat m = A.matAt(d, pq);
            GMat restricted(sAt(tq).size(), GRow(rows.size(), GaussianRational(0)));
            for (size_t j = 0; j < rows.size(); ++j) {
                GRow img = applyRow(m, rows[j]);
                auto coords = solveCombo(sAt(tq), img);
                if (!coords)
                    throw FourComplexError(std::string("sub_double: ") + diffName(d) +
                                           " leaves the subcomplex at " + degStr(pq) +
                                           "; witness " + rowStr(rows[j]));
                for (size_t i = 0; i < coords->size(); ++i) restricted[i][j] = (*coords)[i];
            }
            if (!restricted.empty() && !restricted[0].empty())
                C.diffs[int(d)][pq] = std::move(restricted);
        }
        /* the simplified identities hold on the subcomplex */
        for (const GRow& v : rows) {
            auto comp = [&](Diff b, Diff a) {
                return applyRow(A.matAt(b, addDeg(pq, diffShift(a))),
                                applyRow(A.matAt(a, pq), v));
            };
            struct Check { GRow val; const char* name; };
            GRow mix = comp(Diff::Del, Diff::Dbar);
            GRow mix2 = comp(Diff::Dbar, Diff::Del);
            for (size_t i = 0; i < mix.size(); ++i) mix[i] += mix2[i];
            std::vector<Check> checks;
            checks.push_back({comp(Diff::Mubar, Diff::Dbar), "mubar dbar"});
            checks.push_back({comp(Diff::Mubar, Diff::Del), "mubar del"});
            checks.push_back({std::move(mix), "dbar del + del dbar"});
            checks.push_back({comp(Diff::Mu, Diff::Dbar), "mu dbar"});
            checks.push_back({comp(Diff::Mu, Diff::Del), "mu del"});
            for (auto& ck : checks)
                if (!rowIsZero(ck.val))
                    throw FourComplexError(std::string("sub_double: ") + ck.name +
                                           " does not vanish at " + degStr(pq) + "; witness " +
                                           rowStr(v));
        }
    }
    C.validate();
    out.C = std::move(C);
    for (auto& [pq, rows] : S)
        if (!rows.empty()) out.basisRows[pq] = rows;
    return out;
}

DoubleOf quotientDoubleFull(const FourComplex& A) {
    DoubleOf out;
    std::map<Bidegree, GMat> W;
    std::map<Bidegree, std::vector<int>> freeCols;
    for (auto& [pq, dim] : A.dims) {
        GMat img = colSpace(A.matAt(Diff::Mubar, addDeg(pq, {1, -2})));
        img = stackT(img, colSpace(composeMats(A, Diff::Dbar, Diff::Dbar, addDeg(pq, {0, -2}))));
        img = stackT(img, colSpace(composeMats(A, Diff::Del, Diff::Del, addDeg(pq, {-2, 0}))));
        img = stackT(img, colSpace(A.matAt(Diff::Mu, addDeg(pq, {-2, 1}))));
        std::vector<int> piv = rrefT(img);
        img.resize(piv.size());
        W[pq] = img;
        std::vector<bool> isPiv(size_t(dim), false);
        for (int p : piv) isPiv[size_t(p)] = true;
        auto& fc = freeCols[pq];
        for (int j = 0; j < dim; ++j)
            if (!isPiv[size_t(j)]) fc.push_back(j);
    }
    auto wAt = [&](Bidegree pq) -> const GMat& {
        static const GMat empty;
        auto it = W.find(pq);
        return it == W.end() ? empty : it->second;
    };
    auto fcAt = [&](Bidegree pq) -> const std::vector<int>& {
        static const std::vector<int> empty;
        auto it = freeCols.find(pq);
        return it == freeCols.end() ? empty : it->second;
    };

    FourComplex C;
    for (auto& [pq, fc] : freeCols)
        if (!fc.empty()) C.dims[pq] = int(fc.size());

    for (auto& [pq, dim] : A.dims) {
        auto& fc = fcAt(pq);
        for (Diff d : {Diff::Mubar, Diff::Dbar, Diff::Del, Diff::Mu}) {
            Bidegree tq = addDeg(pq, diffShift(d));
            GMat m = A.matAt(d, pq);
            for (const GRow& w : wAt(pq))
                if (!rowIsZero(reduceMod(wAt(tq), applyRow(m, w))))
                    throw FourComplexError(std::string("quotient_double: induced ") + diffName(d) +
                                           " ill-defined at " + degStr(pq) + "; witness " +
                                           rowStr(w));
            auto& tfc = fcAt(tq);
            GMat induced(tfc.size(), GRow(fc.size(), GaussianRational(0)));
            bool nonzero = false;
            for (size_t j = 0; j < fc.size(); ++j) {
                GRow e(size_t(dim), GaussianRational(0));
                e[size_t(fc[j])] = GaussianRational(1);
                GRow red = reduceMod(wAt(tq), applyRow(m, e));
                if (d == Diff::Mubar || d == Diff::Mu) {
                    if (!rowIsZero(red))
                        throw FourComplexError(std::string("quotient_double: ") + diffName(d) +
                                               " does not vanish on the quotient at " + degStr(pq));
                    continue;
                }
                for (size_t i = 0; i < tfc.size(); ++i) {
                    induced[i][j] = red[size_t(tfc[i])];
                    if (!induced[i][j].isZero()) nonzero = true;
                }
            }
            if (nonzero) C.diffs[int(d)][pq] = std::move(induced);
        }
    }
    C.validate();
    /* the quotient is a double complex */
    for (auto& [pq, dim] : C.dims) {
        (void)dim;
        for (auto [a, name] : {std::pair<Diff, const char*>{Diff::Dbar, "dbar dbar"},
                               {Diff::Del, "del del"}}) {
            GMat sq = composeMats(C, a, a, pq);
            for (auto& r : sq)
                if (!rowIsZero(r))
                    throw FourComplexError(std::string("quotient_double: ") + name +
                                           " does not vanish at " + degStr(pq));
        }
        GMat mix = composeMats(C, Diff::Dbar, Diff::Del, pq);
        GMat mix2 = composeMats(C, Diff::Del, Diff::Dbar, pq);
        for (size_t i = 0; i < mix.size(); ++i)
            for (size_t j = 0; j < mix[i].size(); ++j)
                if (!(mix[i][j] + mix2[i][j]).isZero())
                    throw FourComplexError("quotient_double: dbar del + del dbar does not vanish at " +
                                           degStr(pq));
    }
    out.C = std::move(C);
    for (auto& [pq, fc] : freeCols) {
        if (fc.empty()) continue;
        GMat rows;
        for (int j : fc) {
            GRow e(size_t(A.dimAt(pq)), GaussianRational(0));
            e[size_t(j)] = GaussianRational(1);
            rows.push_back(std::move(e));
        }
        out.basisRows[pq] = std::move(rows);
    }
    out.killed = std::move(W);
    out.freeCols = std::move(freeCols);
    return out;
}

/* Bott-Chern / Aeppli of a genuine double complex */
Theory bcOfDouble(const FourComplex& D) {
    Theory th;
    for (auto& [pq, dim] : D.dims) {
        Subq s;
        GMat cond = stackT(D.matAt(Diff::Dbar, pq), D.matAt(Diff::Del, pq));
        s.num = rowBasisT(kernelT(cond, size_t(dim)));
        s.den = colSpace(composeMats(D, Diff::Dbar, Diff::Del, addDeg(pq, {-1, -1})));
        for (const GRow& d : s.den)
            if (!inSpan(s.num, d))
                throw FourComplexError("bott-chern: boundary is not a cocycle at " + degStr(pq));
        s.reps = extendBasis(s.den, s.num);
        th.at[pq] = std::move(s);
    }
    return th;
}

Theory aeppliOfDouble(const FourComplex& D) {
    Theory th;
    for (auto& [pq, dim] : D.dims) {
        Subq s;
        GMat dd = composeMats(D, Diff::Dbar, Diff::Del, pq);
        s.num = rowBasisT(kernelT(dd, size_t(dim)));
        s.den = rowBasisT(stackT(colSpace(D.matAt(Diff::Del, addDeg(pq, {-1, 0}))),
                                 colSpace(D.matAt(Diff::Dbar, addDeg(pq, {0, -1})))));
        for (const GRow& d : s.den)
            if (!inSpan(s.num, d))
                throw FourComplexError("aeppli: boundary is not a cocycle at " + degStr(pq));
        s.reps = extendBasis(s.den, s.num);
        th.at[pq] = std::move(s);
    }
    return th;
}

/* theory over the quotient double, with ambient representatives */
struct AeppliData {
    DoubleOf qd;
    Theory th;
    GRow project(Bidegree pq, const GRow& v) const {
        auto wit = qd.killed.find(pq);
        GRow red = wit == qd.killed.end() ? v : reduceMod(wit->second, v);
        auto fit = qd.freeCols.find(pq);
        if (fit == qd.freeCols.end()) return {};
        GRow coords;
        coords.reserve(fit->second.size());
        for (int j : fit->second) coords.push_back(red[size_t(j)]);
        return coords;
    }
    GRow classOf(Bidegree pq, const GRow& ambient, const std::string& what) const {
        return classOfIn(th[pq], project(pq, ambient), what);
    }
};

AeppliData aeppliData(const FourComplex& A) {
    AeppliData ad;
    ad.qd = quotientDoubleFull(A);
    ad.th = aeppliOfDouble(ad.qd.C);
    return ad;
}

/* ------------------------------------------------------------- totalization */

struct Tot {
    int N = 0;
    std::vector<std::vector<Bidegree>> degs;    /* degs[k]: bidegrees, p ascending */
    std::vector<std::map<Bidegree, int>> offset;
    std::vector<int> dim;
    std::vector<GMat> D;                        /* D[k]: T^k -> T^{k+1} */
};

Tot totalize(const FourComplex& A) {
    Tot t;
    t.N = A.maxDegree();
    int top = 2 * t.N;
    t.degs.resize(size_t(top) + 2);
    t.offset.resize(size_t(top) + 2);
    t.dim.assign(size_t(top) + 2, 0);
    for (int k = 0; k <= top; ++k) {
        for (int p = 0; p <= std::min(k, t.N); ++p) {
            int q = k - p;
            if (A.dimAt(p, q) <= 0) continue;
            t.offset[size_t(k)][{p, q}] = t.dim[size_t(k)];
            t.degs[size_t(k)].push_back({p, q});
            t.dim[size_t(k)] += A.dimAt(p, q);
        }
    }
    t.D.resize(size_t(top) + 1);
    for (int k = 0; k <= top; ++k) {
        GMat m = zeroMat(t.dim[size_t(k) + 1], t.dim[size_t(k)]);
        for (Bidegree pq : t.degs[size_t(k)]) {
            int co = t.offset[size_t(k)].at(pq);
            for (Diff d : {Diff::Mubar, Diff::Dbar, Diff::Del, Diff::Mu}) {
                Bidegree tq = addDeg(pq, diffShift(d));
                auto it = t.offset[size_t(k) + 1].find(tq);
                if (it == t.offset[size_t(k) + 1].end()) continue;
                GMat blk = A.matAt(d, pq);
                for (size_t i = 0; i < blk.size(); ++i)
                    for (size_t j = 0; j < blk[i].size(); ++j)
                        m[size_t(it->second) + i][size_t(co) + j] += blk[i][j];
            }
        }
        t.D[size_t(k)] = std::move(m);
    }
    return t;
}

/* standard basis rows of the column filtration F^p at total degree k */
GMat filtBasis(const Tot& t, int k, int p) {
    GMat rows;
    if (k < 0 || k >= int(t.degs.size())) return rows;
    for (Bidegree pq : t.degs[size_t(k)]) {
        if (pq.first < p) continue;
        auto it = t.offset[size_t(k)].find(pq);
        int off = it->second;
        ++it;
        int next = it == t.offset[size_t(k)].end() ? t.dim[size_t(k)] : it->second;
        for (int j = off; j < next; ++j) {
            GRow e(size_t(t.dim[size_t(k)]), GaussianRational(0));
            e[size_t(j)] = GaussianRational(1);
            rows.push_back(std::move(e));
        }
    }
    return rows;
}

/* selector matrix picking coordinates with column degree < p */
GMat lowSelector(const Tot& t, int k, int p) {
    GMat rows;
    if (k < 0 || k >= int(t.degs.size())) return rows;
    for (Bidegree pq : t.degs[size_t(k)]) {
        if (pq.first >= p) continue;
        int off = t.offset[size_t(k)].at(pq);
        auto it = t.offset[size_t(k)].find(pq);
        ++it;
        int next = it == t.offset[size_t(k)].end() ? t.dim[size_t(k)] : it->second;
        for (int j = off; j < next; ++j) {
            GRow e(size_t(t.dim[size_t(k)]), GaussianRational(0));
            e[size_t(j)] = GaussianRational(1);
            rows.push_back(std::move(e));
        }
    }
    return rows;
}

/* dim F^p H^k for the column filtration */
std::vector<std::vector<int>> filtrationDims(const Tot& t) {
    int top = 2 * t.N;
    std::vector<std::vector<int>> f(size_t(top) + 1);
    for (int k = 0; k <= top; ++k) {
        GMat K = rowBasisT(kernelT(t.D[size_t(k)], size_t(t.dim[size_t(k)])));
        GMat B = k == 0 ? GMat{} : colSpace(t.D[size_t(k) - 1]);
        int rb = int(B.size());
        for (int p = 0; p <= t.N + 1; ++p) {
            GMat zp = preimage(K, lowSelector(t, k, p), {});
            f[size_t(k)].push_back(rankT(stackT(zp, B)) - rb);
        }
    }
    return f;
}

}  // namespace

/* ------------------------------------------------------------ basic methods */

GMat FourComplex::matAt(Diff k, int p, int q) const {
    Bidegree s = diffShift(k);
    int rows = dimAt(p + s.first, q + s.second), cols = dimAt(p, q);
    auto it = diffs[int(k)].find({p, q});
    if (it == diffs[int(k)].end()) return zeroMat(rows, cols);
    return it->second;
}

int FourComplex::maxDegree() const {
    int n = 0;
    for (auto& [pq, d] : dims)
        if (d > 0) n = std::max({n, pq.first, pq.second});
    return n;
}

int FourComplex::totalDim(int k) const {
    int s = 0;
    for (auto& [pq, d] : dims)
        if (pq.first + pq.second == k) s += d;
    return s;
}

void FourComplex::validate() {
    for (auto& [pq, d] : dims) {
        if (d < 0) throw FourComplexError("negative dimension at " + degStr(pq));
        if (pq.first < 0 || pq.second < 0)
            throw FourComplexError("bidegree out of range: " + degStr(pq));
    }
    std::erase_if(dims, [](const auto& kv) { return kv.second == 0; });
    for (int k = 0; k < 4; ++k) {
        Bidegree s = diffShift(Diff(k));
        auto& m = diffs[size_t(k)];
        for (auto it = m.begin(); it != m.end();) {
            Bidegree pq = it->first;
            int src = dimAt(pq), tgt = dimAt(addDeg(pq, s));
            const GMat& mat = it->second;
            bool zero = true;
            for (auto& r : mat)
                if (!rowIsZero(r)) { zero = false; break; }
            if (src == 0 || tgt == 0 || zero) {
                if (!zero)
                    throw FourComplexError(std::string(diffName(Diff(k))) + " at " + degStr(pq) +
                                           " maps outside the declared spaces");
                it = m.erase(it);
                continue;
            }
            if (int(mat.size()) != tgt)
                throw FourComplexError(std::string(diffName(Diff(k))) + " at " + degStr(pq) +
                                       " has wrong row count");
            for (auto& r : mat)
                if (int(r.size()) != src)
                    throw FourComplexError(std::string(diffName(Diff(k))) + " at " + degStr(pq) +
                                           " has wrong column count");
            ++it;
        }
    }
}

/* -------------------------------------------------------------- relations */

RelationReport verifyRelations(const FourComplex& A) {
    using D = Diff;
    struct Rel {
        const char* name;
        std::vector<std::pair<D, D>> terms;   /* (inner, outer): outer after inner */
    };
    static const std::vector<Rel> rels = {
        {"mubar mubar", {{D::Mubar, D::Mubar}}},
        {"mubar dbar + dbar mubar", {{D::Dbar, D::Mubar}, {D::Mubar, D::Dbar}}},
        {"mubar del + del mubar + dbar dbar",
         {{D::Del, D::Mubar}, {D::Mubar, D::Del}, {D::Dbar, D::Dbar}}},
        {"mubar mu + dbar del + del dbar + mu mubar",
         {{D::Mu, D::Mubar}, {D::Del, D::Dbar}, {D::Dbar, D::Del}, {D::Mubar, D::Mu}}},
        {"mu mu", {{D::Mu, D::Mu}}},
        {"mu del + del mu", {{D::Del, D::Mu}, {D::Mu, D::Del}}},
        {"mu dbar + dbar mu + del del",
         {{D::Dbar, D::Mu}, {D::Mu, D::Dbar}, {D::Del, D::Del}}},
    };
    for (auto& [pq, dim] : A.dims) {
        (void)dim;
        for (auto& rel : rels) {
            Bidegree total = addDeg(addDeg(pq, diffShift(rel.terms[0].first)),
                                    diffShift(rel.terms[0].second));
            GMat acc = zeroMat(A.dimAt(total), A.dimAt(pq));
            for (auto [inner, outer] : rel.terms) {
                GMat prod = composeMats(A, inner, outer, pq);
                for (size_t i = 0; i < acc.size(); ++i)
                    for (size_t j = 0; j < acc[i].size(); ++j) acc[i][j] += prod[i][j];
            }
            for (auto& r : acc)
                if (!rowIsZero(r)) return {false, rel.name, pq};
        }
    }
    return {};
}

/* ------------------------------------------------------------ construction */

FourComplex fromLeftInvariant(const FramedModel& md) {
    if (!md.env->osc.empty())
        throw FourComplexError("from_left_invariant: model has oscillating coefficients");
    int n = md.n;
    FourComplex A;
    WedgeBasis wb;
    wb.n = n;
    std::map<Bidegree, std::map<BiMask, int>> index;
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            auto& list = wb.elems[{p, q}];
            for (Mask I : subsetsOfSize(n, p))
                for (Mask K : subsetsOfSize(n, q)) {
                    index[{p, q}][{I, K}] = int(list.size());
                    list.push_back({I, K});
                }
            A.dims[{p, q}] = int(list.size());
        }
    for (auto& [pq, list] : wb.elems) {
        std::array<GMat, 4> mats;
        for (int k = 0; k < 4; ++k) {
            Bidegree tq = addDeg(pq, diffShift(Diff(k)));
            mats[size_t(k)] = zeroMat(A.dimAt(tq), int(list.size()));
        }
        for (size_t j = 0; j < list.size(); ++j) {
            Form f = Form::basis(md.env, n, list[j].I, list[j].K);
            Form df = md.dForm(f);
            for (auto& [bm, s] : df.c) {
                if (s.isZero()) continue;
                int tp = std::popcount(bm.I), tqq = std::popcount(bm.K);
                int dk = -1;
                for (int k = 0; k < 4; ++k)
                    if (addDeg(pq, diffShift(Diff(k))) == Bidegree{tp, tqq}) dk = k;
                if (dk < 0)
                    throw FourComplexError("from_left_invariant: unexpected bidegree (" +
                                           std::to_string(tp) + ", " + std::to_string(tqq) +
                                           ") in the derivative at " + degStr(pq));
                GaussianRational c;
                try {
                    c = s.asConstant();
                } catch (const std::exception&) {
                    throw FourComplexError(
                        "from_left_invariant: non-constant structure coefficient at " + degStr(pq));
                }
                mats[size_t(dk)][size_t(index[{tp, tqq}][bm])][j] = c;
            }
        }
        for (int k = 0; k < 4; ++k)
            if (!mats[size_t(k)].empty()) A.diffs[size_t(k)][pq] = std::move(mats[size_t(k)]);
    }
    A.validate();
    RelationReport rr = verifyRelations(A);
    if (!rr.ok)
        throw FourComplexError("from_left_invariant: relation failure: " + rr.violated + " at " +
                               degStr(rr.at));
    A.basis = std::move(wb);
    return A;
}

/* ------------------------------------------------------------- cohomology */

CohomologyTable hDol(const FourComplex& A) {
    relationGuard(A, "h_dol");
    return tableOf(dolTheory(A, true), "dol");
}

CohomologyTable hDolbar(const FourComplex& A) {
    relationGuard(A, "h_dolbar");
    return tableOf(dolTheory(A, false), "dolbar");
}

FourComplex subDouble(const FourComplex& A) {
    relationGuard(A, "sub_double");
    return subDoubleFull(A).C;
}

FourComplex quotientDouble(const FourComplex& A) {
    relationGuard(A, "quotient_double");
    return quotientDoubleFull(A).C;
}

CohomologyTable hBottChern(const FourComplex& A) {
    relationGuard(A, "h_bc");
    DoubleOf sd = subDoubleFull(A);
    Theory th = bcOfDouble(sd.C);
    CohomologyTable t;
    t.theory = "bc";
    for (auto& [pq, s] : th.at) {
        if (s.dim() == 0) continue;
        t.table[pq] = s.dim();
        GMat amb;
        for (const GRow& coords : s.reps) {
            GRow v(size_t(A.dimAt(pq)), GaussianRational(0));
            const GMat& rows = sd.basisRows.at(pq);
            for (size_t i = 0; i < coords.size(); ++i)
                for (size_t j = 0; j < v.size(); ++j) v[j] += coords[i] * rows[i][j];
            amb.push_back(std::move(v));
        }
        t.reps[pq] = std::move(amb);
    }
    return t;
}

CohomologyTable hAeppli(const FourComplex& A) {
    relationGuard(A, "h_aeppli");
    AeppliData ad = aeppliData(A);
    CohomologyTable t;
    t.theory = "aeppli";
    for (auto& [pq, s] : ad.th.at) {
        if (s.dim() == 0) continue;
        t.table[pq] = s.dim();
        GMat amb;
        for (const GRow& coords : s.reps) {
            GRow v(size_t(A.dimAt(pq)), GaussianRational(0));
            const GMat& rows = ad.qd.basisRows.at(pq);
            for (size_t i = 0; i < coords.size(); ++i)
                for (size_t j = 0; j < v.size(); ++j) v[j] += coords[i] * rows[i][j];
            amb.push_back(std::move(v));
        }
        t.reps[pq] = std::move(amb);
    }
    return t;
}

CohomologyTable hDeRham(const FourComplex& A) {
    relationGuard(A, "h_derham");
    Tot t = totalize(A);
    CohomologyTable out;
    out.theory = "derham";
    out.byTotal = true;
    auto filt = filtrationDims(t);
    for (int k = 0; k <= 2 * t.N; ++k) {
        GMat K = rowBasisT(kernelT(t.D[size_t(k)], size_t(t.dim[size_t(k)])));
        GMat B = k == 0 ? GMat{} : colSpace(t.D[size_t(k) - 1]);
        for (const GRow& b : B)
            if (!inSpan(K, b))
                throw FourComplexError("h_derham: d squared does not vanish at degree " +
                                       std::to_string(k));
        GMat reps = extendBasis(B, K);
        if (!reps.empty()) {
            out.table[{k, 0}] = int(reps.size());
            out.reps[{k, 0}] = std::move(reps);
        }
        for (int p = 0; p < int(filt[size_t(k)].size()); ++p)
            out.filtration[{k, p}] = filt[size_t(k)][size_t(p)];
    }
    return out;
}

/* --------------------------------------------------------------- frolicher */

std::vector<SpectralPage> frolicher(const FourComplex& A, int rMax) {
    relationGuard(A, "frolicher");
    if (rMax < 1) rMax = 1;
    Tot t = totalize(A);
    int top = 2 * t.N;

    /* Z_r at column p, total degree k: F^p vectors whose differential lies
     * r columns further in */
    std::map<std::tuple<int, int, int>, GMat> zcache;
    auto zrows = [&](int r, int p, int k) -> const GMat& {
        auto key = std::make_tuple(r, p, k);
        auto it = zcache.find(key);
        if (it != zcache.end()) return it->second;
        GMat out;
        if (k >= 0 && k <= top) {
            GMat src = filtBasis(t, k, p);
            GMat cond = mulT(lowSelector(t, k + 1, p + r), t.D[size_t(k)]);
            out = preimage(src, cond, {});
        }
        return zcache.emplace(key, std::move(out)).first->second;
    };

    auto filt = filtrationDims(t);
    std::map<Bidegree, int> einf;
    for (int k = 0; k <= top; ++k)
        for (int p = 0; p <= t.N; ++p) {
            int d = filt[size_t(k)][size_t(p)] - filt[size_t(k)][size_t(p) + 1];
            if (d > 0) einf[{p, k - p}] = d;
        }

    auto pageTable = [&](int r) {
        std::map<Bidegree, int> table;
        for (int k = 0; k <= top; ++k)
            for (int p = 0; p <= std::min(k, t.N); ++p) {
                int q = k - p;
                if (q > t.N) continue;
                const GMat& num = zrows(r, p, k);
                if (num.empty()) continue;
                GMat den = stackT(zrows(r - 1, p + 1, k),
                                  k == 0 ? GMat{}
                                         : applyRows(zrows(r - 1, p - r + 1, k - 1),
                                                     t.D[size_t(k) - 1]));
                den = rowBasisT(std::move(den));
                for (const GRow& d : den)
                    if (!inSpan(num, d))
                        throw FourComplexError("frolicher: boundary escapes the cocycle space at " +
                                               degStr({p, q}));
                int dim = int(num.size()) - int(den.size());
                if (dim > 0) table[{p, q}] = dim;
            }
        return table;
    };

    std::vector<std::map<Bidegree, int>> pages;
    int degenerateFrom = -1;
    int hardCap = 2 * t.N + 3;
    for (int r = 1; r <= std::max(rMax, hardCap); ++r) {
        pages.push_back(pageTable(r));
        if (degenerateFrom < 0 && pages.back() == einf) degenerateFrom = r;
        if (degenerateFrom > 0 && r >= rMax) break;
    }
    if (degenerateFrom < 0) degenerateFrom = hardCap;

    std::vector<SpectralPage> out;
    for (int r = 1; r <= rMax; ++r) {
        SpectralPage pg;
        pg.r = r;
        pg.table = pages[size_t(r - 1)];
        pg.degenerateFrom = degenerateFrom;
        out.push_back(std::move(pg));
    }
    return out;
}

/* ------------------------------------------------------------ the diagram */

DiagramReport diagramMaps(const FourComplex& A) {
    relationGuard(A, "diagram_maps");
    DiagramReport rep;
    rep.commutes = true;
    rep.isoBcDol = rep.isoBcDolbar = rep.isoBcDr = true;
    rep.isoDolA = rep.isoDolbarA = rep.isoDrA = true;

    Theory dol = dolTheory(A, true);
    Theory dolbar = dolTheory(A, false);
    DoubleOf sd = subDoubleFull(A);
    Theory bc = bcOfDouble(sd.C);
    AeppliData ad = aeppliData(A);
    Tot t = totalize(A);

    /* de Rham theory per total degree */
    std::vector<Subq> dr(size_t(2 * t.N) + 1);
    for (int k = 0; k <= 2 * t.N; ++k) {
        Subq s;
        s.num = rowBasisT(kernelT(t.D[size_t(k)], size_t(t.dim[size_t(k)])));
        s.den = k == 0 ? GMat{} : colSpace(t.D[size_t(k) - 1]);
        s.reps = extendBasis(s.den, s.num);
        dr[size_t(k)] = std::move(s);
    }

    auto bcAmbient = [&](Bidegree pq, const GRow& coords) {
        GRow v(size_t(A.dimAt(pq)), GaussianRational(0));
        const GMat& rows = sd.basisRows.at(pq);
        for (size_t i = 0; i < coords.size(); ++i)
            for (size_t j = 0; j < v.size(); ++j) v[j] += coords[i] * rows[i][j];
        return v;
    };
    auto totalOf = [&](int k, Bidegree pq, const GRow& v) {
        GRow out(size_t(t.dim[size_t(k)]), GaussianRational(0));
        auto it = t.offset[size_t(k)].find(pq);
        if (it != t.offset[size_t(k)].end())
            for (size_t j = 0; j < v.size(); ++j) out[size_t(it->second) + j] = v[j];
        return out;
    };
    auto componentOf = [&](int k, Bidegree pq, const GRow& total) {
        auto it = t.offset[size_t(k)].find(pq);
        int d = A.dimAt(pq);
        GRow out(size_t(d), GaussianRational(0));
        if (it != t.offset[size_t(k)].end())
            for (int j = 0; j < d; ++j) out[size_t(j)] = total[size_t(it->second + j)];
        return out;
    };

    auto note = [&](bool& flag, const std::string& msg) {
        flag = false;
        if (rep.detail.empty()) rep.detail = msg;
    };
    auto isoCheck = [&](bool& flag, const GMat& m, int rows, int cols, const std::string& name) {
        if (rows != cols) {
            note(flag, name + ": dimensions differ (" + std::to_string(cols) + " vs " +
                           std::to_string(rows) + ")");
            return;
        }
        if (rows == 0) return;
        if (rankT(m) != rows) note(flag, name + ": not bijective");
    };

    /* bidegree-level maps */
    std::map<Bidegree, GMat> viaDol;   /* H_A <- H_BC through Dolbeault */
    for (auto& [pq, dim] : A.dims) {
        (void)dim;
        int nb = bc.at.count(pq) ? bc.at[pq].dim() : 0;
        int nd = dol[pq].dim(), ndb = dolbar[pq].dim(), na = ad.th[pq].dim();
        GMat mBcDol = zeroMat(nd, nb), mBcDolbar = zeroMat(ndb, nb);
        GMat mDolA = zeroMat(na, nd), mDolbarA = zeroMat(na, ndb);
        GMat p1 = zeroMat(na, nb), p2 = zeroMat(na, nb);
        for (int j = 0; j < nb; ++j) {
            GRow v = bcAmbient(pq, bc.at[pq].reps[size_t(j)]);
            GRow cd = classOfIn(dol[pq], v, "diagram_maps: bc -> dol at " + degStr(pq));
            GRow cdb = classOfIn(dolbar[pq], v, "diagram_maps: bc -> dolbar at " + degStr(pq));
            for (int i = 0; i < nd; ++i) mBcDol[size_t(i)][size_t(j)] = cd[size_t(i)];
            for (int i = 0; i < ndb; ++i) mBcDolbar[size_t(i)][size_t(j)] = cdb[size_t(i)];
        }
        for (int j = 0; j < nd; ++j) {
            GRow ca = ad.classOf(pq, dol[pq].reps[size_t(j)],
                                 "diagram_maps: dol -> aeppli at " + degStr(pq));
            for (int i = 0; i < na; ++i) mDolA[size_t(i)][size_t(j)] = ca[size_t(i)];
        }
        for (int j = 0; j < ndb; ++j) {
            GRow ca = ad.classOf(pq, dolbar[pq].reps[size_t(j)],
                                 "diagram_maps: dolbar -> aeppli at " + degStr(pq));
            for (int i = 0; i < na; ++i) mDolbarA[size_t(i)][size_t(j)] = ca[size_t(i)];
        }
        p1 = nd == 0 ? zeroMat(na, nb) : mulT(mDolA, mBcDol);
        p2 = ndb == 0 ? zeroMat(na, nb) : mulT(mDolbarA, mBcDolbar);
        if (p1 != p2) {
            rep.commutes = false;
            if (rep.detail.empty())
                rep.detail = "diagram does not commute through the Dolbeault theories at " +
                             degStr(pq);
        }
        viaDol[pq] = p1;
        isoCheck(rep.isoBcDol, mBcDol, nd, nb, "bc -> dol at " + degStr(pq));
        isoCheck(rep.isoBcDolbar, mBcDolbar, ndb, nb, "bc -> dolbar at " + degStr(pq));
        isoCheck(rep.isoDolA, mDolA, na, nd, "dol -> aeppli at " + degStr(pq));
        isoCheck(rep.isoDolbarA, mDolbarA, na, ndb, "dolbar -> aeppli at " + degStr(pq));
    }

    /* total-degree maps through de Rham */
    for (int k = 0; k <= 2 * t.N; ++k) {
        std::vector<Bidegree> degs = t.degs[size_t(k)];
        int nbTot = 0, naTot = 0;
        std::map<Bidegree, int> bcOff, aOff;
        for (Bidegree pq : degs) {
            bcOff[pq] = nbTot;
            nbTot += bc.at.count(pq) ? bc.at[pq].dim() : 0;
            aOff[pq] = naTot;
            naTot += ad.th[pq].dim();
        }
        int ndr = dr[size_t(k)].dim();
        GMat mBcDr = zeroMat(ndr, nbTot), mDrA = zeroMat(naTot, ndr);
        for (Bidegree pq : degs) {
            int nb = bc.at.count(pq) ? bc.at[pq].dim() : 0;
            for (int j = 0; j < nb; ++j) {
                GRow v = totalOf(k, pq, bcAmbient(pq, bc.at[pq].reps[size_t(j)]));
                GRow cd = classOfIn(dr[size_t(k)], v,
                                    "diagram_maps: bc -> derham at degree " + std::to_string(k));
                for (int i = 0; i < ndr; ++i)
                    mBcDr[size_t(i)][size_t(bcOff[pq] + j)] = cd[size_t(i)];
            }
        }
        for (int j = 0; j < ndr; ++j) {
            const GRow& total = dr[size_t(k)].reps[size_t(j)];
            for (Bidegree pq : degs) {
                GRow ca = ad.classOf(pq, componentOf(k, pq, total),
                                     "diagram_maps: derham -> aeppli at " + degStr(pq));
                for (size_t i = 0; i < ca.size(); ++i)
                    mDrA[size_t(aOff[pq]) + i][size_t(j)] = ca[i];
            }
        }
        GMat p3 = ndr == 0 ? zeroMat(naTot, nbTot) : mulT(mDrA, mBcDr);
        for (Bidegree spq : degs) {
            int nb = bc.at.count(spq) ? bc.at[spq].dim() : 0;
            for (int j = 0; j < nb; ++j)
                for (Bidegree tpq : degs) {
                    int na = ad.th[tpq].dim();
                    for (int i = 0; i < na; ++i) {
                        GaussianRational expect =
                            tpq == spq ? viaDol[spq][size_t(i)][size_t(j)] : GaussianRational(0);
                        if (p3[size_t(aOff[tpq] + i)][size_t(bcOff[spq] + j)] != expect) {
                            rep.commutes = false;
                            if (rep.detail.empty())
                                rep.detail = "diagram does not commute through de Rham at " +
                                             degStr(spq);
                        }
                    }
                }
        }
        isoCheck(rep.isoBcDr, mBcDr, ndr, nbTot, "bc -> derham at degree " + std::to_string(k));
        isoCheck(rep.isoDrA, mDrA, naTot, ndr, "derham -> aeppli at degree " + std::to_string(k));
    }

    rep.ddbarProperty = rep.commutes && rep.isoBcDol && rep.isoBcDolbar && rep.isoBcDr &&
                        rep.isoDolA && rep.isoDolbarA && rep.isoDrA;
    return rep;
}

/* ---------------------------------------------------------------- pairing */

AeppliClass pairing(const FourComplex& A, Bidegree bcDeg, const GRow& bcRep, Bidegree aDeg,
                    const GRow& aRep) {
    relationGuard(A, "pairing");
    if (!A.basis)
        throw FourComplexError("pairing: complex has no invariant coframe product");
    if (int(bcRep.size()) != A.dimAt(bcDeg) || int(aRep.size()) != A.dimAt(aDeg))
        throw FourComplexError("pairing: representative has the wrong length");
    for (Diff d : {Diff::Mubar, Diff::Dbar, Diff::Del, Diff::Mu})
        if (!rowIsZero(applyRow(A.matAt(d, bcDeg), bcRep)))
            throw FourComplexError(std::string("pairing: first argument is not ") + diffName(d) +
                                   "-closed");
    AeppliData ad = aeppliData(A);
    GMat dd = composeMats(A, Diff::Dbar, Diff::Del, aDeg);
    GRow ddv = applyRow(dd, aRep);
    auto wit = ad.qd.killed.find(addDeg(aDeg, {1, 1}));
    if (!rowIsZero(wit == ad.qd.killed.end() ? ddv : reduceMod(wit->second, ddv)))
        throw FourComplexError("pairing: second argument is not an aeppli cocycle");

    const WedgeBasis& wb = *A.basis;
    Bidegree tq = addDeg(bcDeg, aDeg);
    GRow prod(size_t(A.dimAt(tq)), GaussianRational(0));
    if (!prod.empty()) {
        std::map<BiMask, int> index;
        auto it = wb.elems.find(tq);
        if (it == wb.elems.end())
            throw FourComplexError("pairing: product lands outside the complex");
        for (size_t i = 0; i < it->second.size(); ++i) index[it->second[i]] = int(i);
        const auto& bl = wb.elems.at(bcDeg);
        const auto& al = wb.elems.at(aDeg);
        GenEnvPtr e = emptyEnv();
        for (size_t i = 0; i < bl.size(); ++i) {
            if (bcRep[i].isZero()) continue;
            for (size_t j = 0; j < al.size(); ++j) {
                if (aRep[j].isZero()) continue;
                Form f = Form::basis(e, wb.n, bl[i].I, bl[i].K)
                             .wedge(Form::basis(e, wb.n, al[j].I, al[j].K));
                for (auto& [bm, s] : f.c)
                    prod[size_t(index.at(bm))] += bcRep[i] * aRep[j] * s.asConstant();
            }
        }
    }
    AeppliClass out;
    out.pq = tq;
    out.coords = ad.classOf(tq, prod, "pairing: product class at " + degStr(tq));
    return out;
}

}  // namespace acslab
