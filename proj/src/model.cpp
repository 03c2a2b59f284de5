#include "acslab/model.hpp"

#include "acslab/scalar_parse.hpp"

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

namespace acslab {

namespace {

std::string intStr(int v) { return std::to_string(v); }

ScalarFraction zeroS(const GenEnvPtr& e) { return ScalarFraction::constant(e, GaussianRational(0)); }

std::vector<std::vector<std::complex<double>>> evalMatrix(const SMat& m, const EvalPoint& p) {
    std::vector<std::vector<std::complex<double>>> out;
    for (auto& row : m) {
        std::vector<std::complex<double>> r;
        for (auto& x : row) r.push_back(x.eval(p));
        out.push_back(std::move(r));
    }
    return out;
}

/* numeric rank with partial pivoting; pivot threshold is relative to the
 * largest entry of the input matrix */
int numericRank(std::vector<std::vector<std::complex<double>>> m, double tol) {
    if (m.empty() || m[0].empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    double scale = 0;
    for (auto& r : m)
        for (auto& x : r) scale = std::max(scale, std::abs(x));
    if (scale == 0) return 0;
    /* relative pivot threshold, with an absolute floor so that the
     * machine-epsilon residue of an exact zero never counts as a pivot */
    double thresh = std::max(tol * scale, 1e-12);
    size_t r = 0;
    for (size_t col = 0; col < cols && r < rows; ++col) {
        size_t sel = r;
        for (size_t i = r + 1; i < rows; ++i)
            if (std::abs(m[i][col]) > std::abs(m[sel][col])) sel = i;
        if (std::abs(m[sel][col]) <= thresh) continue;
        std::swap(m[r], m[sel]);
        for (size_t i = r + 1; i < rows; ++i) {
            std::complex<double> f = m[i][col] / m[r][col];
            for (size_t j = col; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return int(r);
}

} // namespace

void FramedModel::finalize() {
    if (n <= 0) throw ModelError("model: positive complex dimension required");
    int d = dim();
    size_t nOsc = env->osc.size();
    if (int(backNames.size()) != d || int(dBack.size()) != d || int(dirOsc.size()) != d ||
        int(coframe.size()) != n)
        throw ModelError("model: background data size mismatch");
    for (auto& row : coframe)
        if (int(row.size()) != d) throw ModelError("model: coframe row length mismatch");
    for (auto& row : dirOsc)
        if (row.size() != nOsc) throw ModelError("model: derivation table size mismatch");
    if (paramValues.size() != env->par.size())
        throw ModelError("model: parameter value count mismatch");

    /* frame matrix: the declared rows followed by their conjugates */
    M.assign(size_t(d), SRow(size_t(d), zeroS(env)));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < d; ++a) {
            M[size_t(i)][size_t(a)] = coframe[size_t(i)][size_t(a)];
            M[size_t(n + i)][size_t(conjIndex(a))] = coframe[size_t(i)][size_t(a)].conj();
        }
    try {
        Minv = inverseT(M);
    } catch (const std::domain_error&) {
        throw ModelError("model: declared coframe is degenerate");
    }

    /* J = Minv D M with D = diag(i,..,i,-i,..,-i) in the omega basis */
    SMat dm = M;
    for (int i = 0; i < d; ++i) {
        GaussianRational c = i < n ? GaussianRational::unit_i() : -GaussianRational::unit_i();
        for (auto& x : dm[size_t(i)]) x = c * x;
    }
    Jframe = mulT(Minv, dm);

    backImages.assign(size_t(d), Form(env, n));
    for (int a = 0; a < d; ++a)
        for (int j = 0; j < n; ++j) {
            backImages[size_t(a)] = backImages[size_t(a)] + Form::w(env, n, j + 1) * Minv[size_t(a)][size_t(j)];
            backImages[size_t(a)] =
                backImages[size_t(a)] + Form::cw(env, n, j + 1) * Minv[size_t(a)][size_t(n + j)];
        }
    img10.assign(size_t(n), MaskForm(env, d));
    img01.assign(size_t(n), MaskForm(env, d));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < d; ++a) {
            img10[size_t(i)] = img10[size_t(i)] + MaskForm::covector(env, d, a) * M[size_t(i)][size_t(a)];
            img01[size_t(i)] =
                img01[size_t(i)] + MaskForm::covector(env, d, a) * M[size_t(n + i)][size_t(a)];
        }

    /* the background derivative must be a real operator */
    for (int a = 0; a < d; ++a)
        if (!conjMask(dBack[size_t(a)]).equals(dBack[size_t(conjIndex(a))]))
            throw ModelError("model: exterior derivative is not conjugation compatible on " +
                             backNames[size_t(a)]);
    for (int a = 0; a < d; ++a)
        for (size_t k = 0; k < nOsc; ++k) {
            OscillatorElement lhs = dirOsc[size_t(a)][k].conj();
            OscillatorElement rhs =
                -(OscillatorElement::generatorSlot(env, int(k), -2) * dirOsc[size_t(conjIndex(a))][k]);
            if (!(lhs == rhs))
                throw ModelError("model: derivation table is not conjugation compatible for " +
                                 env->osc[k]);
        }

    /* d after d vanishes on covectors and on oscillator generators */
    for (int a = 0; a < d; ++a)
        if (!dMask(dBack[size_t(a)]).isZero())
            throw ModelError("model: d^2 != 0 on covector " + backNames[size_t(a)]);
    for (size_t k = 0; k < nOsc; ++k) {
        ScalarFraction u{OscillatorElement::generatorSlot(env, int(k))};
        if (!dMask(dScalar(u)).isZero())
            throw ModelError("model: d^2 != 0 on oscillator " + env->osc[k]);
    }
}

MaskForm FramedModel::conjMask(const MaskForm& f) const {
    MaskForm out(env, dim());
    for (auto& [m, s] : f.c) {
        if (kind == FrameKind::Real) {
            out.addTerm(m, s.conj());
            continue;
        }
        std::vector<int> mapped;
        for (int a : bitsOf(m)) mapped.push_back(conjIndex(a));
        int inv = 0;
        Mask mm = 0;
        for (size_t x = 0; x < mapped.size(); ++x) {
            mm |= Mask(1) << mapped[x];
            for (size_t y = x + 1; y < mapped.size(); ++y)
                if (mapped[x] > mapped[y]) ++inv;
        }
        ScalarFraction t = s.conj();
        out.addTerm(mm, inv % 2 ? -t : t);
    }
    return out;
}

OscillatorElement FramedModel::dirDerivPoly(int a, const OscillatorElement& p) const {
    OscillatorElement out(env);
    int nOsc = int(env->osc.size());
    for (auto& [m, coef] : p.terms)
        for (int k = 0; k < nOsc; ++k) {
            if (m[size_t(k)] == 0 || dirOsc[size_t(a)][size_t(k)].isZero()) continue;
            Mono mm = m;
            mm[size_t(k)] -= 1;
            OscillatorElement t(env);
            t.addTerm(mm, coef * GaussianRational(m[size_t(k)]));
            out = out + t * dirOsc[size_t(a)][size_t(k)];
        }
    return out;
}

ScalarFraction FramedModel::dirDeriv(int a, const ScalarFraction& f) const {
    OscillatorElement dn = dirDerivPoly(a, f.num);
    if (f.den.isConstant()) {
        if (dn.isZero()) return zeroS(env);
        return ScalarFraction(dn, f.den);
    }
    OscillatorElement dd = dirDerivPoly(a, f.den);
    return ScalarFraction(dn * f.den - f.num * dd, f.den * f.den);
}

MaskForm FramedModel::dScalar(const ScalarFraction& f) const {
    MaskForm out(env, dim());
    for (int a = 0; a < dim(); ++a) out.addTerm(Mask(1) << a, dirDeriv(a, f));
    return out;
}

MaskForm FramedModel::dMask(const MaskForm& g) const {
    MaskForm out(env, dim());
    for (auto& [m, f] : g.c) {
        out = out + dScalar(f).wedge(MaskForm::basis(env, dim(), m));
        auto bits = bitsOf(m);
        for (size_t r = 0; r < bits.size(); ++r) {
            MaskForm piece =
                dBack[size_t(bits[r])].wedge(MaskForm::basis(env, dim(), m & ~(Mask(1) << bits[r]))) * f;
            out = out + (r % 2 ? -piece : piece);
        }
    }
    return out;
}

Form FramedModel::toBigraded(const MaskForm& f) const { return expandInBasis(f, backImages, env, n); }

MaskForm FramedModel::fromBigraded(const Form& f) const {
    return expandInMask(f, img10, img01, env, dim());
}

Form FramedModel::dForm(const Form& f) const { return toBigraded(dMask(fromBigraded(f))); }

Form FramedModel::mubar(int i) const { return dForm(Form::w(env, n, i + 1)).project(0, 2); }

SMat FramedModel::mubarMatrix() const {
    int cols = n * (n - 1) / 2;
    SMat mm(size_t(n), SRow(size_t(cols), zeroS(env)));
    for (int i = 0; i < n; ++i) {
        Form f = mubar(i);
        for (auto& [bm, s] : f.c) {
            auto ks = bitsOf(bm.K);
            mm[size_t(i)][size_t(pairColIndex(n, ks[0], ks[1]))] = s;
        }
    }
    return mm;
}

int FramedModel::genericRank() const { return rankT(mubarMatrix()); }

EvalPoint FramedModel::evalPoint(const std::vector<Rational>& turns) const {
    if (turns.size() != env->osc.size())
        throw ModelError("model: angle count does not match the oscillator count");
    EvalPoint p;
    for (auto& t : turns) p.angles.push_back(2.0 * std::numbers::pi * t.convert_to<double>());
    for (auto& v : paramValues) p.params.push_back(v.toComplex());
    return p;
}

int FramedModel::rankAt(const EvalPoint& p, double tol) const {
    return numericRank(evalMatrix(mubarMatrix(), p), tol);
}

RankReport FramedModel::minSampledRank(int gridSize, double tol) const {
    if (gridSize < 1) throw ModelError("model: grid size must be positive");
    RankReport r;
    r.model = origin;
    r.gridSize = gridSize;
    r.maxRank = maxRank();
    SMat mm = mubarMatrix();
    r.genericRank = rankT(mm);
    size_t no = env->osc.size();
    std::vector<int> idx(no, 0), bestIdx(no, 0);
    int best = r.maxRank + 1;
    while (true) {
        std::vector<Rational> turns;
        for (size_t k = 0; k < no; ++k) turns.push_back(Rational(2 * idx[k] + 1, 2 * gridSize));
        int rk = numericRank(evalMatrix(mm, evalPoint(turns)), tol);
        if (rk < best) {
            best = rk;
            bestIdx = idx;
        }
        size_t k = 0;
        while (k < no && ++idx[k] == gridSize) idx[k++] = 0;
        if (k == no) break;
    }
    r.sampledMinRank = best;
    for (size_t k = 0; k < no; ++k)
        r.witness.push_back({env->osc[k], Rational(2 * bestIdx[k] + 1, 2 * gridSize)});
    if (r.genericRank == 0)
        r.classification = "integrable";
    else if (best == 0)
        r.classification = "degenerate-somewhere";
    else if (best < r.maxRank)
        r.classification = "everywhere-non-integrable (sampled)";
    else {
        r.certificate = certifyMaxRank();
        r.classification = r.certificate.certified ? "maximally-non-integrable (certified)"
                                                   : "maximally-non-integrable (sampled)";
    }
    return r;
}

Certificate FramedModel::certifyMaxRank() const {
    int r = maxRank();
    SMat mm = mubarMatrix();
    if (rankT(mm) < r) return {false, "generic rank is below the maximum"};
    int cols = n * (n - 1) / 2;
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) pairs.push_back({j, k});
    std::string lastFail;
    for (Mask rowSet : subsetsOfSize(n, r))
        for (Mask colSet : subsetsOfSize(cols, r)) {
            auto rs = bitsOf(rowSet);
            auto csl = bitsOf(colSet);
            SMat sub(size_t(r), SRow(size_t(r), zeroS(env)));
            for (int x = 0; x < r; ++x)
                for (int y = 0; y < r; ++y) sub[size_t(x)][size_t(y)] = mm[size_t(rs[size_t(x)])][size_t(csl[size_t(y)])];
            /* the minor is the product of the elimination pivots, so
             * nonvanishing pivots (numerators and denominators) certify it */
            std::vector<ScalarFraction> pivots;
            bool singular = false;
            for (int col = 0; col < r; ++col) {
                int sel = col;
                while (sel < r && sub[size_t(sel)][size_t(col)].isZero()) ++sel;
                if (sel == r) {
                    singular = true;
                    break;
                }
                std::swap(sub[size_t(sel)], sub[size_t(col)]);
                pivots.push_back(sub[size_t(col)][size_t(col)]);
                ScalarFraction inv = ScalarFraction::one(env) / sub[size_t(col)][size_t(col)];
                for (int x = col + 1; x < r; ++x) {
                    if (sub[size_t(x)][size_t(col)].isZero()) continue;
                    ScalarFraction f = sub[size_t(x)][size_t(col)] * inv;
                    for (int y = col; y < r; ++y)
                        sub[size_t(x)][size_t(y)] = sub[size_t(x)][size_t(y)] - f * sub[size_t(col)][size_t(y)];
                }
            }
            if (singular) continue;
            std::ostringstream os;
            os << "minor rows {";
            for (size_t x = 0; x < rs.size(); ++x) os << (x ? "," : "") << rs[x] + 1;
            os << "} cols {";
            for (size_t y = 0; y < csl.size(); ++y)
                os << (y ? "," : "") << "(" << pairs[size_t(csl[y])].first + 1 << ","
                   << pairs[size_t(csl[y])].second + 1 << ")";
            os << "} = product of pivots";
            bool ok = true;
            for (auto& p : pivots) {
                Certificate cn = certifyNonvanishing(p.num, paramValues);
                if (!cn.certified) {
                    lastFail = cn.detail;
                    ok = false;
                    break;
                }
                Certificate cd = certifyNonvanishing(p.den, paramValues);
                if (!cd.certified) {
                    lastFail = cd.detail;
                    ok = false;
                    break;
                }
                os << "; " << cn.detail << "; " << cd.detail;
            }
            if (!ok) continue;
            return {true, os.str()};
        }
    return {false, lastFail.empty() ? "no nonzero maximal minor"
                                    : "no maximal minor admits a dominance certificate; last failure: " +
                                          lastFail};
}

VectorField FramedModel::frameVector(int a) const {
    VectorField v{env, SRow(size_t(dim()), zeroS(env))};
    v.comp[size_t(a)] = ScalarFraction::one(env);
    return v;
}

VectorField FramedModel::theta(int i) const {
    VectorField v{env, SRow(size_t(dim()), zeroS(env))};
    for (int a = 0; a < dim(); ++a) v.comp[size_t(a)] = Minv[size_t(a)][size_t(i)];
    return v;
}

VectorField FramedModel::thetaBar(int i) const {
    VectorField v{env, SRow(size_t(dim()), zeroS(env))};
    for (int a = 0; a < dim(); ++a) v.comp[size_t(a)] = Minv[size_t(a)][size_t(n + i)];
    return v;
}

VectorField FramedModel::applyJ(const VectorField& x) const {
    VectorField v{env, SRow(size_t(dim()), zeroS(env))};
    for (int b = 0; b < dim(); ++b) {
        ScalarFraction acc = zeroS(env);
        for (int a = 0; a < dim(); ++a) {
            if (x.comp[size_t(a)].isZero() || Jframe[size_t(b)][size_t(a)].isZero()) continue;
            acc = acc + Jframe[size_t(b)][size_t(a)] * x.comp[size_t(a)];
        }
        v.comp[size_t(b)] = acc;
    }
    return v;
}

VectorField FramedModel::bracket(const VectorField& x, const VectorField& y) const {
    VectorField v{env, SRow(size_t(dim()), zeroS(env))};
    for (int k = 0; k < dim(); ++k) {
        ScalarFraction acc = zeroS(env);
        for (int a = 0; a < dim(); ++a) {
            if (!x.comp[size_t(a)].isZero()) acc = acc + x.comp[size_t(a)] * dirDeriv(a, y.comp[size_t(k)]);
            if (!y.comp[size_t(a)].isZero()) acc = acc - y.comp[size_t(a)] * dirDeriv(a, x.comp[size_t(k)]);
        }
        /* structure terms: d beta^k(e_a, e_b) = -beta^k([e_a, e_b]) */
        for (auto& [m, s] : dBack[size_t(k)].c) {
            auto ab = bitsOf(m);
            ScalarFraction wedgeVal = x.comp[size_t(ab[0])] * y.comp[size_t(ab[1])] -
                                      x.comp[size_t(ab[1])] * y.comp[size_t(ab[0])];
            acc = acc - s * wedgeVal;
        }
        v.comp[size_t(k)] = acc;
    }
    return v;
}

VectorField FramedModel::nijenhuis(const VectorField& x, const VectorField& y) const {
    VectorField jx = applyJ(x), jy = applyJ(y);
    VectorField t1 = bracket(x, y);
    VectorField t2 = applyJ(bracket(jx, y));
    VectorField t3 = applyJ(bracket(x, jy));
    VectorField t4 = bracket(jx, jy);
    VectorField v{env, SRow(size_t(dim()), zeroS(env))};
    for (int a = 0; a < dim(); ++a)
        v.comp[size_t(a)] =
            t1.comp[size_t(a)] + t2.comp[size_t(a)] + t3.comp[size_t(a)] - t4.comp[size_t(a)];
    return v;
}

ScalarFraction FramedModel::pairOmega(int i, const VectorField& x) const {
    ScalarFraction acc = zeroS(env);
    for (int a = 0; a < dim(); ++a) {
        if (x.comp[size_t(a)].isZero()) continue;
        acc = acc + M[size_t(i)][size_t(a)] * x.comp[size_t(a)];
    }
    return acc;
}

bool FramedModel::checkIdentification() const {
    SMat mm = mubarMatrix();
    ScalarFraction four = ScalarFraction::constant(env, GaussianRational(4));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            VectorField nv = nijenhuis(thetaBar(k), thetaBar(j));
            for (int i = 0; i < n; ++i) {
                ScalarFraction lhs = pairOmega(i, nv);
                ScalarFraction rhs = four * mm[size_t(i)][size_t(pairColIndex(n, j, k))];
                if (!lhs.equals(rhs)) return false;
            }
        }
    return true;
}

bool FramedModel::isC2Shaped() const {
    if (n != 2 || kind != FrameKind::ComplexPaired) return false;
    for (auto& f : dBack)
        if (!f.isZero()) return false;
    ScalarFraction one = ScalarFraction::one(env);
    return coframe[0][0].equals(one) && coframe[0][1].isZero() && coframe[0][2].isZero() &&
           coframe[1][0].isZero() && coframe[1][1].equals(one) && coframe[1][2].isZero() &&
           coframe[1][3].isZero();
}

Form FramedModel::dbarFunction(const OscillatorElement& g) const {
    if (!isC2Shaped())
        throw ModelError("dbar_function: model must have the shape w1 = dz1 + f dzb2, w2 = dz2");
    return toBigraded(dScalar(ScalarFraction(g))).project(0, 1);
}

namespace {

FramedModel torusBackground(int n) {
    FramedModel md;
    auto ge = std::make_shared<GenEnv>();
    for (int k = 1; k <= n; ++k) ge->osc.push_back("u" + intStr(k));
    md.env = ge;
    md.n = n;
    md.kind = FrameKind::ComplexPaired;
    int d = 2 * n;
    for (int k = 1; k <= n; ++k) md.backNames.push_back("dz" + intStr(k));
    for (int k = 1; k <= n; ++k) md.backNames.push_back("dzb" + intStr(k));
    md.dBack.assign(size_t(d), MaskForm(md.env, d));
    md.dirOsc.assign(size_t(d), std::vector<OscillatorElement>(size_t(n), OscillatorElement(md.env)));
    GaussianRational halfI(Rational(0), Rational(1, 2));
    for (int a = 0; a < d; ++a)
        md.dirOsc[size_t(a)][size_t(a % n)] = halfI * OscillatorElement::generatorSlot(md.env, a % n);
    md.coframe.assign(size_t(n), SRow(size_t(d), zeroS(md.env)));
    return md;
}

std::string freshName(const std::string& base, const std::vector<std::string>& taken) {
    auto used = [&](const std::string& s) {
        return std::find(taken.begin(), taken.end(), s) != taken.end();
    };
    if (!used(base)) return base;
    for (int t = 2;; ++t) {
        std::string cand = base + "_" + intStr(t);
        if (!used(cand)) return cand;
    }
}

} // namespace

FramedModel torusMni(int n, const GaussianRational& A) {
    if (n < 2) throw ModelError("torus_mni: complex dimension must be at least 2");
    if (A.normSq() < Rational(4))
        throw ModelError("torus_mni: need |A| >= 2, got |A|^2 = " + render(A.normSq()));
    FramedModel md = torusBackground(n);
    md.origin = "torus_mni(" + intStr(n) + ", A=" + render(A) + ")";
    ScalarFraction one = ScalarFraction::one(md.env);
    auto aPoly = [&](int k) {  // u_k + A
        return ScalarFraction(OscillatorElement::generatorSlot(md.env, k) +
                              OscillatorElement::constant(md.env, A));
    };
    if (n == 2) {
        md.coframe[0][0] = one;
        md.coframe[0][3] = aPoly(0);
        md.coframe[1][1] = one;
    } else {
        for (int i = 0; i < n; ++i) {
            md.coframe[size_t(i)][size_t(i)] = one;
            md.coframe[size_t(i)][size_t(n + i)] = aPoly((i + 1) % n);
        }
    }
    md.finalize();
    return md;
}

FramedModel c2Example(const std::string& fExpr) {
    FramedModel md = torusBackground(2);
    OscillatorElement f = parsePoly(md.env, fExpr);
    for (auto& [m, c] : f.terms)
        for (size_t s = 1; s < m.size(); ++s)
            if (m[s] != 0) throw ModelError("c2_example: f must depend only on the u1 oscillator");
    md.origin = "c2_example(" + render(f) + ")";
    md.coframe[0][0] = ScalarFraction::one(md.env);
    md.coframe[0][3] = ScalarFraction(f);
    md.coframe[1][1] = ScalarFraction::one(md.env);
    md.finalize();
    return md;
}

FramedModel t6Rank2() {
    FramedModel md = torusBackground(3);
    md.origin = "t6_rank2()";
    ScalarFraction one = ScalarFraction::one(md.env);
    md.coframe[0][0] = one;
    md.coframe[0][5] = ScalarFraction(OscillatorElement::generatorSlot(md.env, 0));
    md.coframe[1][1] = one;
    md.coframe[1][5] = ScalarFraction(OscillatorElement::generatorSlot(md.env, 1));
    md.coframe[2][2] = one;
    md.finalize();
    return md;
}

FramedModel fromLieAlgebra(int dim, const std::vector<BracketEntry>& brackets, const GMat& J,
                           const std::string& origin) {
    if (dim <= 0 || dim % 2) throw ModelError("lie_algebra: positive even dimension required");
    int n = dim / 2;
    std::vector<GMat> c(size_t(dim), GMat(size_t(dim), GRow(size_t(dim), GaussianRational(0))));
    for (auto& e : brackets) {
        if (e.i < 1 || e.j > dim || e.i >= e.j)
            throw ModelError("lie_algebra: bracket indices must satisfy 1 <= i < j <= dim");
        for (auto& [k, v] : e.out) {
            if (k < 1 || k > dim) throw ModelError("lie_algebra: bracket output index out of range");
            c[size_t(e.i - 1)][size_t(e.j - 1)][size_t(k - 1)] += v;
            c[size_t(e.j - 1)][size_t(e.i - 1)][size_t(k - 1)] -= v;
        }
    }
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b)
            for (int k = b + 1; k < dim; ++k)
                for (int l = 0; l < dim; ++l) {
                    GaussianRational s(0);
                    for (int m = 0; m < dim; ++m)
                        s += c[size_t(b)][size_t(k)][size_t(m)] * c[size_t(a)][size_t(m)][size_t(l)] +
                             c[size_t(k)][size_t(a)][size_t(m)] * c[size_t(b)][size_t(m)][size_t(l)] +
                             c[size_t(a)][size_t(b)][size_t(m)] * c[size_t(k)][size_t(m)][size_t(l)];
                    if (!s.isZero())
                        throw ModelError("lie_algebra: Jacobi identity fails on (" + intStr(a + 1) +
                                         ", " + intStr(b + 1) + ", " + intStr(k + 1) + ")");
                }
    if (int(J.size()) != dim) throw ModelError("lie_algebra: J has the wrong size");
    for (auto& row : J) {
        if (int(row.size()) != dim) throw ModelError("lie_algebra: J has the wrong size");
        for (auto& x : row)
            if (!x.isReal()) throw ModelError("lie_algebra: J must have real entries");
    }
    GMat j2 = mulT(J, J);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            GaussianRational want(a == b ? -1 : 0);
            if (!(j2[size_t(a)][size_t(b)] == want))
                throw ModelError("lie_algebra: J^2 is not minus the identity");
        }

    FramedModel md;
    md.env = emptyEnv();
    md.n = n;
    md.kind = FrameKind::Real;
    md.origin = origin;
    for (int k = 1; k <= dim; ++k) md.backNames.push_back("e" + intStr(k));
    md.dBack.assign(size_t(dim), MaskForm(md.env, dim));
    for (int k = 0; k < dim; ++k)
        for (int a = 0; a < dim; ++a)
            for (int b = a + 1; b < dim; ++b)
                if (!c[size_t(a)][size_t(b)][size_t(k)].isZero())
                    md.dBack[size_t(k)].addTerm(
                        (Mask(1) << a) | (Mask(1) << b),
                        ScalarFraction::constant(md.env, -c[size_t(a)][size_t(b)][size_t(k)]));
    md.dirOsc.assign(size_t(dim), {});

    /* (1,0) coframe: the rows v with v J = i v, i.e. the right kernel of J^T - i */
    GMat K = transposeT(J, size_t(dim));
    for (int a = 0; a < dim; ++a) K[size_t(a)][size_t(a)] -= GaussianRational::unit_i();
    GMat ker = kernelT(K, size_t(dim));
    if (int(ker.size()) != n)
        throw ModelError("lie_algebra: J does not split the complexified frame");
    md.coframe.assign(size_t(n), SRow(size_t(dim), zeroS(md.env)));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < dim; ++a)
            md.coframe[size_t(i)][size_t(a)] =
                ScalarFraction::constant(md.env, ker[size_t(i)][size_t(a)]);
    md.finalize();
    return md;
}

FramedModel mappingTorusS1S3(int m) {
    if (m < 1) throw ModelError("mapping_torus_s1s3: n must be at least 1");
    FramedModel md;
    auto ge = std::make_shared<GenEnv>();
    ge->osc.push_back("w");
    md.env = ge;
    md.n = 2;
    md.kind = FrameKind::Real;
    md.origin = "mapping_torus_s1s3(" + intStr(m) + ")";
    md.backNames = {"e1", "e2", "e3", "e4"};  // T, U, V, Z
    md.dBack.assign(4, MaskForm(md.env, 4));
    auto cst = [&](long v) { return ScalarFraction::constant(md.env, GaussianRational(v)); };
    /* [U,V] = 2Z, [V,Z] = 2U, [Z,U] = 2V, T central */
    md.dBack[1].addTerm(0b1100, cst(-2));
    md.dBack[2].addTerm(0b1010, cst(2));
    md.dBack[3].addTerm(0b0110, cst(-2));
    md.dirOsc.assign(4, std::vector<OscillatorElement>(1, OscillatorElement(md.env)));
    md.dirOsc[0][0] = GaussianRational(Rational(0), Rational(long(m) * m)) *
                      OscillatorElement::generatorSlot(md.env, 0);

    OscillatorElement w = OscillatorElement::generatorSlot(md.env, 0);
    OscillatorElement winv = OscillatorElement::generatorSlot(md.env, 0, -1);
    ScalarFraction S{GaussianRational(Rational(0), Rational(-1, 2)) * (w - winv)};  // sin(m^2 t)
    ScalarFraction C{GaussianRational(Rational(1, 2)) * (w + winv)};                // cos(m^2 t)
    ScalarFraction mS = ScalarFraction::constant(md.env, GaussianRational(long(m)));
    ScalarFraction two = ScalarFraction::constant(md.env, GaussianRational(2));
    ScalarFraction s2m = two * S * S / mS, scm = two * S * C / mS;
    ScalarFraction zero = zeroS(md.env);

    /* J columns are the images of T, U, V, Z */
    SMat J(4, SRow(4, zero));
    J[0][0] = S;   J[1][0] = s2m;  J[2][0] = -scm; J[3][0] = -C;
    J[0][1] = -mS; J[1][1] = -S;   J[2][1] = C;    J[3][1] = zero;
    J[0][2] = zero;J[1][2] = -C;   J[2][2] = -S;   J[3][2] = -mS;
    J[0][3] = C;   J[1][3] = scm;  J[2][3] = s2m;  J[3][3] = S;

    /* dual coframe of the eigenframe (A - iC, B - iD), solved in closed
     * form: low-degree rows keep the symbolic inverse small */
    ScalarFraction iu = ScalarFraction::constant(md.env, GaussianRational::unit_i());
    ScalarFraction half = ScalarFraction::constant(md.env, GaussianRational(Rational(1, 2)));
    md.coframe.assign(2, SRow(4, zero));
    md.coframe[0][0] = half * (ScalarFraction::one(md.env) - iu * S);
    md.coframe[0][1] = half * iu * mS;
    md.coframe[0][3] = -(half * iu * C);
    md.coframe[1][0] = half * iu * C;
    md.coframe[1][2] = half * iu * mS;
    md.coframe[1][3] = half * (ScalarFraction::one(md.env) - iu * S);
    md.finalize();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (!md.Jframe[size_t(a)][size_t(b)].equals(J[size_t(a)][size_t(b)]))
                throw ModelError("mapping_torus_s1s3: declared span does not reproduce J");
    return md;
}

FramedModel productModel(const FramedModel& a, const FramedModel& b) {
    if (a.kind != b.kind) throw ModelError("product: factors must share the frame kind");
    FramedModel md;
    md.kind = a.kind;
    md.n = a.n + b.n;
    int d = 2 * md.n;
    auto ge = std::make_shared<GenEnv>();
    ge->osc = a.env->osc;
    for (auto& nm : b.env->osc) ge->osc.push_back(freshName(nm, ge->osc));
    ge->par = a.env->par;
    for (auto& nm : b.env->par) ge->par.push_back(freshName(nm, ge->par));
    md.env = ge;
    size_t oa = a.env->osc.size(), ob = b.env->osc.size();

    std::vector<int> smA(size_t(a.env->slots())), smB(size_t(b.env->slots()));
    for (size_t k = 0; k < oa; ++k) smA[k] = int(k);
    for (size_t j = 0; j < a.env->par.size(); ++j) {
        smA[size_t(a.env->parSlot(int(j)))] = md.env->parSlot(int(j));
        smA[size_t(a.env->parSlot(int(j))) + 1] = md.env->parSlot(int(j)) + 1;
    }
    for (size_t k = 0; k < ob; ++k) smB[k] = int(oa + k);
    for (size_t j = 0; j < b.env->par.size(); ++j) {
        int nj = md.env->parSlot(int(a.env->par.size() + j));
        smB[size_t(b.env->parSlot(int(j)))] = nj;
        smB[size_t(b.env->parSlot(int(j))) + 1] = nj + 1;
    }
    auto remapA = [&](const ScalarFraction& f) {
        return ScalarFraction(f.num.remapped(md.env, smA), f.den.remapped(md.env, smA));
    };
    auto remapB = [&](const ScalarFraction& f) {
        return ScalarFraction(f.num.remapped(md.env, smB), f.den.remapped(md.env, smB));
    };
    auto mapIdxA = [&](int i) {
        return md.kind == FrameKind::ComplexPaired ? (i < a.n ? i : md.n + (i - a.n)) : i;
    };
    auto mapIdxB = [&](int i) {
        return md.kind == FrameKind::ComplexPaired ? (i < b.n ? a.n + i : md.n + a.n + (i - b.n))
                                                   : 2 * a.n + i;
    };

    if (md.kind == FrameKind::ComplexPaired) {
        for (int k = 1; k <= md.n; ++k) md.backNames.push_back("dz" + intStr(k));
        for (int k = 1; k <= md.n; ++k) md.backNames.push_back("dzb" + intStr(k));
    } else {
        for (int k = 1; k <= d; ++k) md.backNames.push_back("e" + intStr(k));
    }

    auto remapMask = [&](const MaskForm& f, auto idxMap, auto scalarMap) {
        MaskForm out(md.env, d);
        for (auto& [m, s] : f.c) {
            std::vector<int> mapped;
            for (int x : bitsOf(m)) mapped.push_back(idxMap(x));
            int inv = 0;
            Mask mm = 0;
            for (size_t x = 0; x < mapped.size(); ++x) {
                mm |= Mask(1) << mapped[x];
                for (size_t y = x + 1; y < mapped.size(); ++y)
                    if (mapped[x] > mapped[y]) ++inv;
            }
            ScalarFraction t = scalarMap(s);
            out.addTerm(mm, inv % 2 ? -t : t);
        }
        return out;
    };
    md.dBack.assign(size_t(d), MaskForm(md.env, d));
    for (int i = 0; i < 2 * a.n; ++i) md.dBack[size_t(mapIdxA(i))] = remapMask(a.dBack[size_t(i)], mapIdxA, remapA);
    for (int i = 0; i < 2 * b.n; ++i) md.dBack[size_t(mapIdxB(i))] = remapMask(b.dBack[size_t(i)], mapIdxB, remapB);

    md.dirOsc.assign(size_t(d), std::vector<OscillatorElement>(oa + ob, OscillatorElement(md.env)));
    for (int i = 0; i < 2 * a.n; ++i)
        for (size_t k = 0; k < oa; ++k)
            md.dirOsc[size_t(mapIdxA(i))][k] = a.dirOsc[size_t(i)][k].remapped(md.env, smA);
    for (int i = 0; i < 2 * b.n; ++i)
        for (size_t k = 0; k < ob; ++k)
            md.dirOsc[size_t(mapIdxB(i))][oa + k] = b.dirOsc[size_t(i)][k].remapped(md.env, smB);

    md.coframe.assign(size_t(md.n), SRow(size_t(d), zeroS(md.env)));
    for (int i = 0; i < a.n; ++i)
        for (int cc = 0; cc < 2 * a.n; ++cc)
            md.coframe[size_t(i)][size_t(mapIdxA(cc))] = remapA(a.coframe[size_t(i)][size_t(cc)]);
    for (int i = 0; i < b.n; ++i)
        for (int cc = 0; cc < 2 * b.n; ++cc)
            md.coframe[size_t(a.n + i)][size_t(mapIdxB(cc))] = remapB(b.coframe[size_t(i)][size_t(cc)]);

    md.paramValues = a.paramValues;
    md.paramValues.insert(md.paramValues.end(), b.paramValues.begin(), b.paramValues.end());
    md.origin = "product(" + a.origin + ", " + b.origin + ")";
    md.finalize();
    return md;
}

GMat standardJ(int dim) {
    GMat J(size_t(dim), GRow(size_t(dim), GaussianRational(0)));
    for (int k = 0; k + 1 < dim; k += 2) {
        J[size_t(k + 1)][size_t(k)] = GaussianRational(1);
        J[size_t(k)][size_t(k + 1)] = GaussianRational(-1);
    }
    return J;
}

GMat conjugatedStandardJ(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    GMat P(size_t(dim), GRow(size_t(dim), GaussianRational(0)));
    for (int i = 0; i < dim; ++i) P[size_t(i)][size_t(i)] = GaussianRational(1);
    for (int t = 0; t < 4 * dim; ++t) {
        int i = int(rng() % unsigned(dim)), j = int(rng() % unsigned(dim));
        long cv = long(rng() % 5) - 2;
        if (i == j || cv == 0) continue;
        for (int cc = 0; cc < dim; ++cc)
            P[size_t(i)][size_t(cc)] += GaussianRational(cv) * P[size_t(j)][size_t(cc)];
    }
    return mulT(mulT(P, standardJ(dim)), inverseT(P));
}

FramedModel abelianModel(const GMat& J, const std::string& origin) {
    return fromLieAlgebra(int(J.size()), {}, J, origin);
}

} // namespace acslab
