#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acslab/model.hpp"
#include "acslab/scalar_parse.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

using namespace acslab;

namespace {

using CD = std::complex<double>;
using CMat = std::vector<std::vector<CD>>;

GaussianRational gi(long re, long im = 0) { return {Rational(re), Rational(im)}; }

ScalarFraction sfz(const GenEnvPtr& e) { return ScalarFraction::constant(e, gi(0)); }

ScalarFraction halfIU(const GenEnvPtr& e, int slot, int exp = 1) {
    return ScalarFraction{GaussianRational(Rational(0), Rational(1, 2)) *
                          OscillatorElement::generatorSlot(e, slot, exp)};
}

/* ------------------------------------------------------------------ */
/* numeric helpers, written independently of the library linalg       */

CMat numInverse(CMat a) {
    size_t n = a.size();
    CMat inv(n, std::vector<CD>(n, 0.0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (size_t col = 0; col < n; ++col) {
        size_t sel = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[sel][col])) sel = r;
        REQUIRE(std::abs(a[sel][col]) > 1e-12);
        std::swap(a[sel], a[col]);
        std::swap(inv[sel], inv[col]);
        CD piv = a[col][col];
        for (size_t j = 0; j < n; ++j) {
            a[col][j] /= piv;
            inv[col][j] /= piv;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == CD(0.0)) continue;
            CD f = a[r][col];
            for (size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

/* finite-difference directional derivative of a scalar along frame
 * vector a, step 1e-5, central differences */
using DirRule = std::function<CD(int, const ScalarFraction&, const EvalPoint&)>;

DirRule torusRule(int n) {
    /* frame vector a differentiates only the angle a mod n, with the
     * usual 1/2 from d/dz vs d/dx */
    return [n](int a, const ScalarFraction& f, const EvalPoint& p) {
        EvalPoint q = p, r = p;
        q.angles[size_t(a % n)] += 1e-5;
        r.angles[size_t(a % n)] -= 1e-5;
        return (f.eval(q) - f.eval(r)) / 4e-5;
    };
}

DirRule mtRule(int m) {
    /* only the circle direction moves the angle; w = exp(i m^2 t) means
     * d/dt = m^2 d/dtheta */
    return [m](int a, const ScalarFraction& f, const EvalPoint& p) -> CD {
        if (a != 0) return 0.0;
        EvalPoint q = p, r = p;
        q.angles[0] += 1e-5;
        r.angles[0] -= 1e-5;
        return double(m) * double(m) * (f.eval(q) - f.eval(r)) / 2e-5;
    };
}

/* independent mubar pipeline: numeric frame matrix, numeric inverse,
 * finite-difference coefficient derivatives, declared dBack data */
CMat oracleMubar(const FramedModel& md, const EvalPoint& p, const DirRule& rule) {
    int n = md.n, d = 2 * n;
    CMat M(size_t(d), std::vector<CD>(size_t(d), 0.0));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < d; ++a) {
            CD v = md.coframe[size_t(i)][size_t(a)].eval(p);
            M[size_t(i)][size_t(a)] = v;
            int ca = md.kind == FrameKind::ComplexPaired ? (a + n) % d : a;
            M[size_t(n + i)][size_t(ca)] += std::conj(v);
        }
    CMat Minv = numInverse(M);
    CMat mu(size_t(n), std::vector<CD>(size_t(n * (n - 1) / 2), 0.0));
    for (int i = 0; i < n; ++i)
        for (int pp = 0; pp < d; ++pp)
            for (int qq = pp + 1; qq < d; ++qq) {
                CD g = rule(pp, md.coframe[size_t(i)][size_t(qq)], p) -
                       rule(qq, md.coframe[size_t(i)][size_t(pp)], p);
                Mask m = (Mask(1) << pp) | (Mask(1) << qq);
                for (int a = 0; a < d; ++a) {
                    auto it = md.dBack[size_t(a)].c.find(m);
                    if (it != md.dBack[size_t(a)].c.end())
                        g += M[size_t(i)][size_t(a)] * it->second.eval(p);
                }
                int col = 0;
                for (int j = 0; j < n; ++j)
                    for (int k = j + 1; k < n; ++k, ++col)
                        mu[size_t(i)][size_t(col)] +=
                            g * (Minv[size_t(pp)][size_t(n + j)] * Minv[size_t(qq)][size_t(n + k)] -
                                 Minv[size_t(pp)][size_t(n + k)] * Minv[size_t(qq)][size_t(n + j)]);
            }
    return mu;
}

void checkPipeline(const FramedModel& md, const std::vector<Rational>& turns, const DirRule& rule) {
    EvalPoint p = md.evalPoint(turns);
    CMat expect = oracleMubar(md, p, rule);
    SMat mm = md.mubarMatrix();
    for (int i = 0; i < md.n; ++i)
        for (int c = 0; c < md.n * (md.n - 1) / 2; ++c)
            CHECK(std::abs(mm[size_t(i)][size_t(c)].eval(p) - expect[size_t(i)][size_t(c)]) < 1e-6);
}

/* Cartan cross-check: d(alpha)(X,Y) = X(alpha(Y)) - Y(alpha(X)) - alpha([X,Y]) */
void checkCartan(const FramedModel& md, const SRow& alpha, const VectorField& X,
                 const VectorField& Y, const EvalPoint& p, const DirRule& rule) {
    int d = 2 * md.n;
    MaskForm a1(md.env, d);
    for (int a = 0; a < d; ++a) a1.addTerm(Mask(1) << a, alpha[size_t(a)]);
    MaskForm da = md.dMask(a1);
    CD lhs = 0;
    for (auto& [m, s] : da.c) {
        auto b = bitsOf(m);
        lhs += s.eval(p) * (X.comp[size_t(b[0])].eval(p) * Y.comp[size_t(b[1])].eval(p) -
                            X.comp[size_t(b[1])].eval(p) * Y.comp[size_t(b[0])].eval(p));
    }
    ScalarFraction aY = sfz(md.env), aX = sfz(md.env);
    for (int a = 0; a < d; ++a) {
        aY = aY + alpha[size_t(a)] * Y.comp[size_t(a)];
        aX = aX + alpha[size_t(a)] * X.comp[size_t(a)];
    }
    CD rhs = 0;
    for (int b = 0; b < d; ++b) {
        if (!X.comp[size_t(b)].isZero()) rhs += X.comp[size_t(b)].eval(p) * rule(b, aY, p);
        if (!Y.comp[size_t(b)].isZero()) rhs -= Y.comp[size_t(b)].eval(p) * rule(b, aX, p);
    }
    VectorField br = md.bracket(X, Y);
    for (int a = 0; a < d; ++a)
        if (!br.comp[size_t(a)].isZero()) rhs -= alpha[size_t(a)].eval(p) * br.comp[size_t(a)].eval(p);
    CHECK(std::abs(lhs - rhs) < 1e-5);
}

/* vector field arithmetic */
bool vfEquals(const VectorField& a, const VectorField& b) {
    if (a.comp.size() != b.comp.size()) return false;
    for (size_t i = 0; i < a.comp.size(); ++i)
        if (!a.comp[i].equals(b.comp[i])) return false;
    return true;
}

VectorField scaleVF(const ScalarFraction& c, const VectorField& x) {
    VectorField v = x;
    for (auto& e : v.comp) e = c * e;
    return v;
}

VectorField addVF(const VectorField& a, const VectorField& b) {
    VectorField v = a;
    for (size_t i = 0; i < v.comp.size(); ++i) v.comp[i] = v.comp[i] + b.comp[i];
    return v;
}

VectorField subVF(const VectorField& a, const VectorField& b) {
    VectorField v = a;
    for (size_t i = 0; i < v.comp.size(); ++i) v.comp[i] = v.comp[i] - b.comp[i];
    return v;
}

/* Kodaira-Thurston algebra: de4 = e1^e2, two choices of J */
FramedModel ktModel(int which) {
    GMat J(4, GRow(4, gi(0)));
    if (which == 1) {
        J[2][0] = gi(1); J[0][2] = gi(-1); J[3][1] = gi(1); J[1][3] = gi(-1);
    } else {
        J[1][0] = gi(1); J[0][1] = gi(-1); J[3][2] = gi(1); J[2][3] = gi(-1);
    }
    return fromLieAlgebra(4, {{1, 2, {{4, gi(-1)}}}}, J, which == 1 ? "kt_j1" : "kt_j2");
}

/* constant-coefficient exterior derivative oracle: only uses dBack,
 * the frame matrix inverse and tested Form wedges */
Form constDFormOracle(const FramedModel& md, int i) {
    int d = 2 * md.n;
    std::vector<Form> img;
    for (int a = 0; a < d; ++a) {
        Form f(md.env, md.n);
        for (int j = 0; j < md.n; ++j) {
            f = f + Form::w(md.env, md.n, j + 1) * md.Minv[size_t(a)][size_t(j)];
            f = f + Form::cw(md.env, md.n, j + 1) * md.Minv[size_t(a)][size_t(md.n + j)];
        }
        img.push_back(f);
    }
    Form out(md.env, md.n);
    for (int a = 0; a < d; ++a) {
        if (md.coframe[size_t(i)][size_t(a)].isZero()) continue;
        for (auto& [m, s] : md.dBack[size_t(a)].c) {
            auto b = bitsOf(m);
            out = out + img[size_t(b[0])].wedge(img[size_t(b[1])]) * (s * md.coframe[size_t(i)][size_t(a)]);
        }
    }
    return out;
}

/* flat n=1 coordinate torus, constant J */
FramedModel t2Abelian() {
    FramedModel md;
    auto ge = std::make_shared<GenEnv>(GenEnv{{"u1"}, {}});
    md.env = ge;
    md.n = 1;
    md.kind = FrameKind::ComplexPaired;
    md.origin = "abelian_t2";
    md.backNames = {"dz1", "dzb1"};
    md.dBack.assign(2, MaskForm(md.env, 2));
    md.dirOsc.assign(2, std::vector<OscillatorElement>(1, OscillatorElement(md.env)));
    md.dirOsc[0][0] = GaussianRational(Rational(0), Rational(1, 2)) *
                      OscillatorElement::generatorSlot(md.env, 0);
    md.dirOsc[1][0] = md.dirOsc[0][0];
    md.coframe.assign(1, SRow(2, sfz(md.env)));
    md.coframe[0][0] = ScalarFraction::one(md.env);
    md.finalize();
    return md;
}

struct MTFields {
    VectorField A, B, C, D;
};

MTFields mtFields(const FramedModel& md, int m) {
    auto w = OscillatorElement::generatorSlot(md.env, 0);
    auto winv = OscillatorElement::generatorSlot(md.env, 0, -1);
    ScalarFraction s{GaussianRational(Rational(0), Rational(-1, 2)) * (w - winv)};
    ScalarFraction c{GaussianRational(Rational(1, 2)) * (w + winv)};
    ScalarFraction im = ScalarFraction::constant(md.env, GaussianRational(Rational(1, m)));
    VectorField A = md.frameVector(0);
    A.comp[1] = im * s;
    A.comp[2] = sfz(md.env) - im * c;
    VectorField B = md.frameVector(3);
    B.comp[1] = im * c;
    B.comp[2] = im * s;
    VectorField C{md.env, SRow(4, sfz(md.env))};
    C.comp[1] = im;
    VectorField D{md.env, SRow(4, sfz(md.env))};
    D.comp[2] = im;
    return {A, B, C, D};
}

} // namespace

/* ================================================================== */

TEST_CASE("derivation tables match finite differences") {
    {
        auto md = torusMni(3, gi(2));
        auto rule = torusRule(3);
        EvalPoint p = md.evalPoint({Rational(1, 7), Rational(2, 7), Rational(3, 7)});
        for (int a = 0; a < 6; ++a)
            for (int k = 0; k < 3; ++k) {
                ScalarFraction uk{OscillatorElement::generatorSlot(md.env, k)};
                CHECK(std::abs(md.dirDeriv(a, uk).eval(p) - rule(a, uk, p)) < 1e-6);
            }
    }
    {
        auto md = mappingTorusS1S3(3);
        auto rule = mtRule(3);
        EvalPoint p = md.evalPoint({Rational(2, 7)});
        ScalarFraction w{OscillatorElement::generatorSlot(md.env, 0)};
        for (int a = 0; a < 4; ++a)
            CHECK(std::abs(md.dirDeriv(a, w).eval(p) - rule(a, w, p)) < 1e-6);
    }
}

TEST_CASE("exterior derivative of an oscillator") {
    auto md = torusMni(2, gi(2));
    ScalarFraction u1{OscillatorElement::generatorSlot(md.env, 0)};
    MaskForm expect(md.env, 4);
    expect.addTerm(0b0001, halfIU(md.env, 0));
    expect.addTerm(0b0100, halfIU(md.env, 0));
    CHECK(md.dScalar(u1).equals(expect));
    auto rule = torusRule(2);
    EvalPoint p = md.evalPoint({Rational(1, 7), Rational(2, 7)});
    for (int a = 0; a < 4; ++a)
        CHECK(std::abs(md.dirDeriv(a, u1).eval(p) - rule(a, u1, p)) < 1e-6);
}

TEST_CASE("mubar matrix matches the finite difference pipeline") {
    {
        auto md = torusMni(2, gi(2));
        checkPipeline(md, {Rational(1, 7), Rational(3, 11)}, torusRule(2));
        checkPipeline(md, {Rational(5, 13), Rational(7, 9)}, torusRule(2));
    }
    {
        auto md = torusMni(3, gi(2));
        checkPipeline(md, {Rational(1, 7), Rational(3, 11), Rational(2, 9)}, torusRule(3));
    }
    {
        auto md = t6Rank2();
        checkPipeline(md, {Rational(1, 5), Rational(2, 7), Rational(4, 9)}, torusRule(3));
    }
    {
        auto md = c2Example("u1^2");
        checkPipeline(md, {Rational(3, 7), Rational(1, 9)}, torusRule(2));
    }
    {
        auto md = mappingTorusS1S3(2);
        checkPipeline(md, {Rational(3, 11)}, mtRule(2));
        checkPipeline(md, {Rational(6, 7)}, mtRule(2));
    }
    {
        auto md = productModel(torusMni(2, gi(2)), t6Rank2());
        checkPipeline(md, {Rational(1, 7), Rational(2, 7), Rational(3, 7), Rational(4, 7), Rational(5, 7)},
                      torusRule(5));
    }
}

TEST_CASE("cartan formula numeric cross-check") {
    {
        auto md = torusMni(2, gi(2));
        auto rule = torusRule(2);
        EvalPoint p = md.evalPoint({Rational(1, 7), Rational(2, 9)});
        checkCartan(md, md.M[0], md.theta(0), md.thetaBar(1), p, rule);
        checkCartan(md, md.M[2], md.thetaBar(0), md.thetaBar(1), p, rule);
        checkCartan(md, md.M[1], md.theta(0), md.thetaBar(0), p, rule);
    }
    {
        auto md = mappingTorusS1S3(1);
        auto rule = mtRule(1);
        EvalPoint p = md.evalPoint({Rational(2, 7)});
        checkCartan(md, md.M[0], md.theta(0), md.thetaBar(1), p, rule);
        checkCartan(md, md.M[1], md.frameVector(1), md.thetaBar(0), p, rule);
    }
}

TEST_CASE("torus mubar closed form") {
    for (auto A : {gi(2), gi(3)}) {
        for (int n : {3, 4}) {
            if (A == gi(3) && n == 4) continue;  // covered by the grid test
            auto md = torusMni(n, A);
            auto u = [&](int k) { return OscillatorElement::generatorSlot(md.env, k % n); };
            OscillatorElement one = OscillatorElement::constant(md.env, gi(1));
            OscillatorElement Ac = OscillatorElement::constant(md.env, A);
            for (int i = 0; i < n; ++i) {
                int i1 = (i + 1) % n, i2 = (i + 2) % n;
                OscillatorElement ai = u(i1) + Ac;
                OscillatorElement ai1 = u(i2) + Ac;
                ScalarFraction bi(one, one - ai * ai.conj());
                ScalarFraction bi1(one, one - ai1 * ai1.conj());
                ScalarFraction ci = halfIU(md.env, i1) * bi * bi1 * ScalarFraction(one - ai1);
                Form expect = Form::cw(md.env, n, i1 + 1).wedge(Form::cw(md.env, n, i + 1)) * ci;
                CHECK(md.mubar(i).equals(expect));
                /* dz_i = b_i (omega_i - a_i conj(omega_i)) */
                Form dz = Form::w(md.env, n, i + 1) * bi +
                          Form::cw(md.env, n, i + 1) * (sfz(md.env) - bi * ScalarFraction(ai));
                CHECK(md.backImages[size_t(i)].equals(dz));
            }
        }
    }
}

TEST_CASE("two dimensional torus mubar") {
    auto md = torusMni(2, gi(2));
    Form expect = Form::cw(md.env, 2, 1).wedge(Form::cw(md.env, 2, 2)) * halfIU(md.env, 0);
    CHECK(md.mubar(0).equals(expect));
    CHECK(md.mubar(1).isZero());
    /* same shape for complex A */
    auto mc = torusMni(2, GaussianRational(Rational(2), Rational(1)));
    Form ec = Form::cw(mc.env, 2, 1).wedge(Form::cw(mc.env, 2, 2)) * halfIU(mc.env, 0);
    CHECK(mc.mubar(0).equals(ec));
}

TEST_CASE("t6 rank two structure") {
    auto md = t6Rank2();
    CHECK(md.genericRank() == 2);
    Form e0 = Form::cw(md.env, 3, 1).wedge(Form::cw(md.env, 3, 3)) * halfIU(md.env, 0);
    Form e1 = Form::cw(md.env, 3, 2).wedge(Form::cw(md.env, 3, 3)) * halfIU(md.env, 1);
    CHECK(md.mubar(0).equals(e0));
    CHECK(md.mubar(1).equals(e1));
    CHECK(md.mubar(2).isZero());
    auto rep = md.minSampledRank(9);
    CHECK(rep.genericRank == 2);
    CHECK(rep.sampledMinRank == 2);
    CHECK(rep.maxRank == 3);
    CHECK(rep.classification == "everywhere-non-integrable (sampled)");
}

TEST_CASE("torus generic ranks") {
    CHECK(torusMni(2, gi(2)).genericRank() == 1);
    CHECK(torusMni(3, gi(2)).genericRank() == 3);
    CHECK(torusMni(4, gi(2)).genericRank() == 4);
}

TEST_CASE("c2 example family") {
    {
        auto md = c2Example("u1");
        Form expect = Form::cw(md.env, 2, 1).wedge(Form::cw(md.env, 2, 2)) * halfIU(md.env, 0);
        CHECK(md.mubar(0).equals(expect));
        CHECK(md.mubar(1).isZero());
        auto rep = md.minSampledRank(9);
        CHECK(rep.sampledMinRank == 1);
        CHECK(rep.classification == "maximally-non-integrable (certified)");
    }
    {
        auto rep = c2Example("1").minSampledRank(9);
        CHECK(rep.genericRank == 0);
        CHECK(rep.classification == "integrable");
    }
    {
        auto rep = c2Example("u1^2").minSampledRank(9);
        CHECK(rep.sampledMinRank == 1);
        CHECK(rep.classification == "maximally-non-integrable (certified)");
    }
    {
        /* df/dzb1 = (i/2)u1(1 + u1) vanishes exactly at angle pi, which
         * grid 9 hits */
        auto rep = c2Example("u1+1/2*u1^2").minSampledRank(9);
        CHECK(rep.genericRank == 1);
        CHECK(rep.sampledMinRank == 0);
        CHECK(rep.classification == "degenerate-somewhere");
        REQUIRE(rep.witness.size() == 2);
        CHECK(rep.witness[0].second == Rational(1, 2));
    }
}

TEST_CASE("dbar on the 4-torus function algebra") {
    auto md = c2Example("u1");
    CHECK(md.isC2Shaped());
    CHECK(torusMni(2, gi(2)).isC2Shaped());
    CHECK(!t6Rank2().isC2Shaped());
    CHECK(md.dbarFunction(OscillatorElement::constant(md.env, gi(1))).isZero());
    {
        Form expect = Form::cw(md.env, 2, 2) * halfIU(md.env, 1);
        CHECK(md.dbarFunction(OscillatorElement::generatorSlot(md.env, 1)).equals(expect));
    }
    {
        ScalarFraction u1sq{GaussianRational(Rational(0), Rational(1, 2)) *
                            OscillatorElement::generatorSlot(md.env, 0, 2)};
        Form expect = Form::cw(md.env, 2, 1) * halfIU(md.env, 0) +
                      Form::cw(md.env, 2, 2) * (sfz(md.env) - u1sq);
        CHECK(md.dbarFunction(OscillatorElement::generatorSlot(md.env, 0)).equals(expect));
    }
    auto t6 = t6Rank2();
    CHECK_THROWS_AS(t6.dbarFunction(OscillatorElement::constant(t6.env, gi(1))), ModelError);
}

TEST_CASE("grid classification torus") {
    {
        auto rep = torusMni(2, gi(2)).minSampledRank(9);
        CHECK(rep.genericRank == 1);
        CHECK(rep.sampledMinRank == 1);
        CHECK(rep.maxRank == 1);
        CHECK(rep.classification == "maximally-non-integrable (certified)");
        CHECK(rep.certificate.certified);
    }
    {
        auto rep = torusMni(4, gi(3)).minSampledRank(9);
        CHECK(rep.sampledMinRank == 4);
        CHECK(rep.maxRank == 4);
        CHECK(rep.classification == "maximally-non-integrable (certified)");
        CHECK(rep.certificate.certified);
    }
    {
        /* the parameter-bound boundary: grid 9 contains the angle pi where
         * the frame denominators vanish */
        CHECK_THROWS_AS(torusMni(3, gi(2)).minSampledRank(9), EvalError);
        CHECK_THROWS_AS(torusMni(4, gi(2)).minSampledRank(9), EvalError);
    }
    {
        auto rep = torusMni(3, gi(2)).minSampledRank(8);
        CHECK(rep.genericRank == 3);
        CHECK(rep.sampledMinRank == 3);
        CHECK(rep.classification == "maximally-non-integrable (sampled)");
        CHECK(!rep.certificate.certified);
    }
    {
        auto rep = torusMni(3, gi(3)).minSampledRank(9);
        CHECK(rep.sampledMinRank == 3);
        CHECK(rep.classification == "maximally-non-integrable (certified)");
    }
}

TEST_CASE("rank report fields") {
    auto rep = torusMni(3, gi(2)).minSampledRank(8);
    CHECK(rep.model == "torus_mni(3, A=2)");
    CHECK(rep.gridSize == 8);
    REQUIRE(rep.witness.size() == 3);
    CHECK(rep.witness[0].first == "u1");
    CHECK(rep.witness[2].first == "u3");
    for (auto& [nm, t] : rep.witness) {
        CHECK(t > 0);
        CHECK(t < 1);
    }
}

TEST_CASE("pointwise rank") {
    auto md = torusMni(2, gi(2));
    CHECK(md.rankAt(md.evalPoint({Rational(0), Rational(0)})) == 1);
    auto ab = abelianModel(standardJ(4), "abelian_t4");
    CHECK(ab.genericRank() == 0);
    CHECK(ab.rankAt(ab.evalPoint({})) == 0);
    auto prod = productModel(torusMni(2, gi(2)), t2Abelian());
    CHECK(prod.n == 3);
    CHECK(prod.rankAt(prod.evalPoint({Rational(1, 5), Rational(2, 5), Rational(3, 5)})) == 1);
    /* denominator vanishes at angle pi for the n=3 torus at the bound */
    auto t3 = torusMni(3, gi(2));
    CHECK_THROWS_AS(t3.rankAt(t3.evalPoint({Rational(1, 2), Rational(1, 2), Rational(1, 2)})),
                    EvalError);
}

TEST_CASE("product block additivity") {
    auto a = torusMni(2, gi(2));
    auto b = t6Rank2();
    auto c = c2Example("1");
    CHECK(productModel(a, b).genericRank() == 3);
    CHECK(productModel(a, a).genericRank() == 2);
    CHECK(productModel(a, c).genericRank() == 1);
    CHECK(productModel(c, c).genericRank() == 0);
    CHECK(productModel(b, t2Abelian()).genericRank() == 2);
    CHECK(productModel(ktModel(1), ktModel(2)).genericRank() == 1);
    auto p = productModel(a, a);
    CHECK(p.n == 4);
    CHECK(p.env->osc == std::vector<std::string>{"u1", "u2", "u1_2", "u2_2"});
    auto rep = p.minSampledRank(5);
    CHECK(rep.genericRank == 2);
    CHECK(rep.sampledMinRank == 2);
    CHECK(rep.maxRank == 4);
    CHECK(rep.classification == "everywhere-non-integrable (sampled)");
}

TEST_CASE("rank bound invariant") {
    std::vector<FramedModel> models;
    models.push_back(torusMni(2, gi(2)));
    models.push_back(torusMni(3, gi(2)));
    models.push_back(t6Rank2());
    models.push_back(ktModel(1));
    models.push_back(mappingTorusS1S3(2));
    models.push_back(productModel(torusMni(2, gi(2)), t6Rank2()));
    for (auto& md : models) {
        int r = md.genericRank();
        CHECK(r <= std::min(md.n, md.n * (md.n - 1) / 2));
        CHECK(r <= md.maxRank());
    }
}

TEST_CASE("kodaira thurston lie models") {
    auto m1 = ktModel(1);
    CHECK(m1.genericRank() == 1);
    CHECK(m1.dBack[3].equals(MaskForm::basis(m1.env, 4, 0b0011)));
    CHECK(m1.dMask(MaskForm::covector(m1.env, 4, 3)).equals(MaskForm::basis(m1.env, 4, 0b0011)));
    for (int i = 0; i < 2; ++i)
        CHECK(m1.dForm(Form::w(m1.env, 2, i + 1)).equals(constDFormOracle(m1, i)));
    auto r1 = m1.minSampledRank(1);
    CHECK(r1.sampledMinRank == 1);
    CHECK(r1.classification == "maximally-non-integrable (certified)");

    auto m2 = ktModel(2);
    CHECK(m2.genericRank() == 0);
    CHECK(m2.minSampledRank(1).classification == "integrable");
    CHECK(m2.dForm(Form::w(m2.env, 2, 1)).isZero());
    for (int i = 0; i < 2; ++i)
        CHECK(m2.dForm(Form::w(m2.env, 2, i + 1)).equals(constDFormOracle(m2, i)));
    Form dw2 = m2.dForm(Form::w(m2.env, 2, 2));
    CHECK(dw2.project(0, 2).isZero());
    CHECK(dw2.project(2, 0).isZero());
    CHECK(!dw2.project(1, 1).isZero());
}

TEST_CASE("nijenhuis tensor identities") {
    auto md = torusMni(2, gi(2));
    ScalarFraction f{OscillatorElement::generatorSlot(md.env, 0)};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            auto nab = md.nijenhuis(md.frameVector(a), md.frameVector(b));
            auto nba = md.nijenhuis(md.frameVector(b), md.frameVector(a));
            CHECK(vfEquals(nab, scaleVF(ScalarFraction::constant(md.env, gi(-1)), nba)));
        }
    auto X = md.theta(0), Y = md.thetaBar(1);
    CHECK(vfEquals(md.nijenhuis(scaleVF(f, X), Y), scaleVF(f, md.nijenhuis(X, Y))));
    CHECK(vfEquals(md.nijenhuis(X, scaleVF(f, Y)), scaleVF(f, md.nijenhuis(X, Y))));
    auto l2 = md.nijenhuis(md.applyJ(X), Y);
    auto r2 = scaleVF(ScalarFraction::constant(md.env, gi(-1)), md.applyJ(md.nijenhuis(X, Y)));
    CHECK(vfEquals(l2, r2));
    auto mt = mappingTorusS1S3(2);
    auto U = mt.frameVector(1), Z = mt.frameVector(3);
    CHECK(vfEquals(mt.nijenhuis(U, U), VectorField{mt.env, SRow(4, sfz(mt.env))}));
    auto l3 = mt.nijenhuis(mt.applyJ(U), Z);
    auto r3 = scaleVF(ScalarFraction::constant(mt.env, gi(-1)), mt.applyJ(mt.nijenhuis(U, Z)));
    CHECK(vfEquals(l3, r3));
}

TEST_CASE("nijenhuis equals four mubar") {
    CHECK(torusMni(2, gi(2)).checkIdentification());
    CHECK(torusMni(2, GaussianRational(Rational(2), Rational(1))).checkIdentification());
    CHECK(torusMni(3, gi(2)).checkIdentification());
    CHECK(t6Rank2().checkIdentification());
    CHECK(c2Example("u1").checkIdentification());
    CHECK(mappingTorusS1S3(1).checkIdentification());
    CHECK(mappingTorusS1S3(2).checkIdentification());
    CHECK(ktModel(1).checkIdentification());
    CHECK(ktModel(2).checkIdentification());
    CHECK(productModel(ktModel(1), ktModel(2)).checkIdentification());
}

TEST_CASE("identification on randomized lie models") {
    for (unsigned seed : {1u, 2u, 3u, 4u}) {
        GMat J = conjugatedStandardJ(6, seed);
        auto md = fromLieAlgebra(6, {{1, 2, {{5, gi(1)}}}, {1, 3, {{6, gi(1)}}}}, J,
                                 "nilpotent6_" + std::to_string(seed));
        CHECK(md.checkIdentification());
        CHECK(md.genericRank() <= 3);
    }
}

TEST_CASE("left invariant structures on tori are integrable") {
    for (unsigned seed = 0; seed < 50; ++seed) {
        int dim = seed % 2 ? 6 : 4;
        auto md = abelianModel(conjugatedStandardJ(dim, seed), "abelian");
        CHECK(md.genericRank() == 0);
    }
    CHECK(abelianModel(standardJ(6), "abelian_t6").minSampledRank(1).classification == "integrable");
}

TEST_CASE("d squared vanishes on bigraded spans") {
    std::vector<FramedModel> models;
    models.push_back(torusMni(2, gi(2)));
    models.push_back(t6Rank2());
    models.push_back(mappingTorusS1S3(2));
    models.push_back(ktModel(1));
    for (auto& md : models) {
        for (int i = 1; i <= md.n; ++i) {
            CHECK(md.dForm(md.dForm(Form::w(md.env, md.n, i))).isZero());
            CHECK(md.dForm(md.dForm(Form::cw(md.env, md.n, i))).isZero());
        }
        Form f = Form::w(md.env, md.n, 1).wedge(Form::cw(md.env, md.n, 1));
        if (!md.env->osc.empty()) f = f * ScalarFraction{OscillatorElement::generatorSlot(md.env, 0)};
        CHECK(md.dForm(md.dForm(f)).isZero());
        Form g = Form::w(md.env, md.n, 1).wedge(Form::w(md.env, md.n, md.n));
        CHECK(md.dForm(md.dForm(g)).isZero());
    }
}

TEST_CASE("mapping torus J relations") {
    for (int m : {1, 2, 5}) {
        auto md = mappingTorusS1S3(m);
        auto f = mtFields(md, m);
        CHECK(vfEquals(md.applyJ(f.A), f.C));
        CHECK(vfEquals(md.applyJ(f.B), f.D));
        CHECK(vfEquals(md.applyJ(f.C), scaleVF(ScalarFraction::constant(md.env, gi(-1)), f.A)));
        CHECK(vfEquals(md.applyJ(f.D), scaleVF(ScalarFraction::constant(md.env, gi(-1)), f.B)));
        CHECK(md.genericRank() == 1);
    }
}

TEST_CASE("mapping torus nijenhuis expansion") {
    int m = 2;
    auto md = mappingTorusS1S3(m);
    auto f = mtFields(md, m);
    auto U = md.frameVector(1), V = md.frameVector(2);
    ScalarFraction inv2 = ScalarFraction::constant(md.env, GaussianRational(Rational(1, m * m)));
    ScalarFraction inv1 = ScalarFraction::constant(md.env, GaussianRational(Rational(1, m)));
    auto rhs = subVF(md.bracket(f.A, f.B), scaleVF(inv2, md.bracket(U, V)));
    rhs = addVF(rhs, scaleVF(inv1, md.applyJ(md.bracket(U, f.B))));
    rhs = addVF(rhs, scaleVF(inv1, md.applyJ(md.bracket(f.A, V))));
    CHECK(vfEquals(md.nijenhuis(f.A, f.B), rhs));
}

TEST_CASE("mapping torus leading order expansion") {
    for (int m : {10, 100}) {
        auto md = mappingTorusS1S3(m);
        auto f = mtFields(md, m);
        auto N = md.nijenhuis(f.A, f.B);
        auto br = md.bracket(f.A, f.B);
        for (Rational t : {Rational(1, 7), Rational(2, 5), Rational(5, 9)}) {
            EvalPoint p = md.evalPoint({t});
            double num = 0, den = 0;
            for (int a = 0; a < 4; ++a) {
                CD x = N.comp[size_t(a)].eval(p) / double(m);
                CD y = br.comp[size_t(a)].eval(p) / double(m);
                num += std::norm(x - y);
                den += std::norm(y);
            }
            CHECK(std::sqrt(num / den) <= 10.0 / m);
        }
    }
}

TEST_CASE("mapping torus rank scan") {
    /* scanned m = 1..10 on grid 32: the sampled minimum is already 1 at
     * every m, so the smallest m achieving the maximal rank is 1 */
    int smallest = 0;
    std::vector<int> mins;
    for (int m = 1; m <= 10; ++m) {
        auto rep = mappingTorusS1S3(m).minSampledRank(32);
        CHECK(rep.maxRank == 1);
        mins.push_back(rep.sampledMinRank);
        if (smallest == 0 && rep.sampledMinRank == 1) smallest = m;
    }
    CHECK(smallest == 1);
    CHECK(mins[4] == 1);
    CHECK(mappingTorusS1S3(5).minSampledRank(32).classification ==
          "maximally-non-integrable (sampled)");
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(torusMni(1, gi(5)), ModelError);
    CHECK_THROWS_AS(torusMni(2, gi(1)), ModelError);
    CHECK_THROWS_AS(torusMni(3, GaussianRational(Rational(1), Rational(1))), ModelError);
    CHECK(torusMni(2, GaussianRational(Rational(1), Rational(-2))).genericRank() == 1);
    CHECK_THROWS_AS(c2Example("u2"), ModelError);
    CHECK_THROWS_AS(c2Example("u1+u2"), ModelError);
    CHECK_THROWS_AS(mappingTorusS1S3(0), ModelError);
    CHECK_THROWS_AS(productModel(torusMni(2, gi(2)), ktModel(1)), ModelError);
    try {
        fromLieAlgebra(4, {{1, 2, {{3, gi(1)}}}, {1, 3, {{1, gi(1)}}}}, standardJ(4), "bad");
        CHECK(false);
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("(1, 2, 3)") != std::string::npos);
    }
    GMat I4(4, GRow(4, gi(0)));
    for (int i = 0; i < 4; ++i) I4[size_t(i)][size_t(i)] = gi(1);
    CHECK_THROWS_AS(fromLieAlgebra(4, {}, I4, "bad"), ModelError);
    GMat Jc = standardJ(4);
    Jc[0][1] = GaussianRational(Rational(0), Rational(1));
    CHECK_THROWS_AS(fromLieAlgebra(4, {}, Jc, "bad"), ModelError);
}
