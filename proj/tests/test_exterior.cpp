#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acslab/form.hpp"
#include "acslab/scalar_parse.hpp"

using namespace acslab;

namespace {

GenEnvPtr env0() {
    static GenEnvPtr e = std::make_shared<GenEnv>(GenEnv{{"u1"}, {"A"}});
    return e;
}

// independent sign oracle: sort the concatenation by adjacent swaps
int bruteSign(std::vector<int> v) {
    int sign = 1;
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j) {
            if (v[i] == v[j]) return 0;
            if (v[i] > v[j]) {
                std::swap(v[i], v[j]);
                sign = -sign;
            }
        }
    return sign;
}

std::vector<int> flatten(BiMask m, int n) {
    std::vector<int> out = bitsOf(m.I);
    for (int i : bitsOf(m.K)) out.push_back(i + n);
    return out;
}

} // namespace

TEST_CASE("merge sign matches permutation sign") {
    for (Mask a = 0; a < 16; ++a)
        for (Mask b = 0; b < 16; ++b) {
            std::vector<int> v = bitsOf(a);
            for (int j : bitsOf(b)) v.push_back(j);
            CHECK(mergeSign(a, b) == bruteSign(v));
        }
}

TEST_CASE("bigraded wedge sign matches permutation sign") {
    const int n = 3;
    for (Mask i1 = 0; i1 < 8; ++i1)
        for (Mask k1 = 0; k1 < 8; ++k1)
            for (Mask i2 = 0; i2 < 8; ++i2)
                for (Mask k2 = 0; k2 < 8; ++k2) {
                    Form a = Form::basis(env0(), n, i1, k1);
                    Form b = Form::basis(env0(), n, i2, k2);
                    Form ab = a.wedge(b);
                    std::vector<int> v = flatten({i1, k1}, n);
                    for (int j : flatten({i2, k2}, n)) v.push_back(j);
                    int sg = bruteSign(v);
                    if (sg == 0) {
                        CHECK(ab.isZero());
                    } else {
                        REQUIRE(ab.c.size() == 1);
                        auto& [m, s] = *ab.c.begin();
                        CHECK(m == BiMask{i1 | i2, k1 | k2});
                        CHECK(s.equals(ScalarFraction::constant(env0(), GaussianRational(sg))));
                    }
                }
}

TEST_CASE("wedge is graded-commutative and associative") {
    const int n = 2;
    ScalarFraction f = parseFraction(env0(), "u1 + A");
    Form a = Form::w(env0(), n, 1) * f + Form::cw(env0(), n, 2);
    Form b = Form::cw(env0(), n, 1) - Form::w(env0(), n, 2) * parseFraction(env0(), "i*u1^-1");
    Form c = Form::w(env0(), n, 2).wedge(Form::cw(env0(), n, 2));
    CHECK(a.wedge(b).equals(-b.wedge(a)));            // deg 1 * deg 1
    CHECK(a.wedge(c).equals(c.wedge(a)));             // deg 1 * deg 2
    CHECK(a.wedge(b.wedge(c)).equals(a.wedge(b).wedge(c)));
    CHECK(a.wedge(a).isZero());
}

TEST_CASE("conjugation") {
    const int n = 2;
    Form a = Form::w(env0(), n, 1) * parseFraction(env0(), "i*u1") + Form::cw(env0(), n, 2);
    Form b = Form::w(env0(), n, 2).wedge(Form::cw(env0(), n, 1));
    CHECK(a.conj().conj().equals(a));
    CHECK(a.wedge(b).conj().equals(a.conj().wedge(b.conj())));
    // conj(w2 ^ cw1) = -(w1 ^ cw2)
    CHECK(b.conj().equals(-Form::w(env0(), n, 1).wedge(Form::cw(env0(), n, 2))));
}

TEST_CASE("projection splits by bidegree") {
    const int n = 2;
    Form a = Form::w(env0(), n, 1).wedge(Form::w(env0(), n, 2)) +
             Form::w(env0(), n, 1).wedge(Form::cw(env0(), n, 1)) +
             Form::scalar(env0(), n, parseFraction(env0(), "u1"));
    CHECK(a.project(2, 0).equals(Form::w(env0(), n, 1).wedge(Form::w(env0(), n, 2))));
    CHECK(a.project(0, 0).equals(Form::scalar(env0(), n, parseFraction(env0(), "u1"))));
    CHECK(a.project(1, 1).c.size() == 1);
    CHECK(a.project(2, 2).isZero());
    Form sum(env0(), n);
    for (auto [p, q] : a.bidegrees()) sum = sum + a.project(p, q);
    CHECK(sum.equals(a));
}

TEST_CASE("expansion between background and bigraded bases round trips") {
    const int n = 2, dim = 2 * n;
    // canonical correspondence: background slot j <-> w_{j+1}, slot n+j <-> cw_{j+1}
    std::vector<Form> toBi;
    std::vector<MaskForm> img10, img01;
    for (int j = 0; j < dim; ++j)
        toBi.push_back(j < n ? Form::w(env0(), n, j + 1) : Form::cw(env0(), n, j - n + 1));
    for (int i = 0; i < n; ++i) {
        img10.push_back(MaskForm::covector(env0(), dim, i));
        img01.push_back(MaskForm::covector(env0(), dim, n + i));
    }
    Form a = Form::w(env0(), n, 1).wedge(Form::cw(env0(), n, 2)) * parseFraction(env0(), "u1 + A") +
             Form::cw(env0(), n, 1).wedge(Form::cw(env0(), n, 2)) +
             Form::w(env0(), n, 2) * parseFraction(env0(), "i");
    MaskForm back = expandInMask(a, img10, img01, env0(), dim);
    Form again = expandInBasis(back, toBi, env0(), n);
    CHECK(again.equals(a));

    // a nontrivial change of background frame preserves wedge
    MaskForm e0 = MaskForm::covector(env0(), dim, 0), e1 = MaskForm::covector(env0(), dim, 1);
    std::vector<MaskForm> mix10{img10[0] + img01[1] * parseFraction(env0(), "u1"), img10[1]};
    MaskForm lhs = expandInMask(a.wedge(Form::w(env0(), n, 1)), mix10, img01, env0(), dim);
    MaskForm rhs = expandInMask(a, mix10, img01, env0(), dim)
                       .wedge(expandInMask(Form::w(env0(), n, 1), mix10, img01, env0(), dim));
    CHECK(lhs.equals(rhs));
    CHECK(e0.wedge(e1).equals(-e1.wedge(e0)));
}

TEST_CASE("rendering") {
    const int n = 2;
    Form a = Form::w(env0(), n, 1).wedge(Form::cw(env0(), n, 2)) * parseFraction(env0(), "1/2*i");
    CHECK(render(a) == "(1/2*i)*w1^wb2");
    CHECK(render(Form(env0(), n)) == "0");
    MaskForm b = MaskForm::basis(env0(), 4, 0b1010);
    CHECK(render(b, {"e1", "e2", "e3", "e4"}) == "(1)*e2^e4");
}
