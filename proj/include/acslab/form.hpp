#pragma once
/* Exterior algebra with ScalarFraction coefficients.
 *
 * MaskForm: forms over an ordered background coframe b^0..b^{d-1}; a basis
 * monomial is a bitmask, bit a = b^a present, factors in ascending order.
 *
 * Form: bigraded forms over a complex coframe w1..wn, cw1..cwn; a basis
 * monomial is a mask pair (I,K) meaning w_I ^ cw_K with all w factors first.
 */

#include "scalar.hpp"

#include <bit>
#include <cstdint>
#include <functional>

namespace acslab {

using Mask = uint32_t;

/* sign of merging two ascending index lists, 0 on overlap */
inline int mergeSign(Mask a, Mask b) {
    if (a & b) return 0;
    int inv = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        inv += std::popcount(a >> (j + 1));
    }
    return inv % 2 ? -1 : 1;
}

inline std::vector<int> bitsOf(Mask m) {
    std::vector<int> out;
    for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
}

inline std::vector<Mask> subsetsOfSize(int n, int k) {
    std::vector<Mask> out;
    for (Mask m = 0; m < (Mask(1) << n); ++m)
        if (std::popcount(m) == k) out.push_back(m);
    return out;
}

// ---------------------------------------------------------------- MaskForm

struct MaskForm {
    GenEnvPtr env;
    int dim = 0;
    std::map<Mask, ScalarFraction> c;

    MaskForm() : env(emptyEnv()) {}
    MaskForm(GenEnvPtr e, int d) : env(std::move(e)), dim(d) {}

    static MaskForm scalar(const GenEnvPtr& e, int d, const ScalarFraction& s) {
        MaskForm f(e, d);
        f.addTerm(0, s);
        return f;
    }
    static MaskForm basis(const GenEnvPtr& e, int d, Mask m) {
        MaskForm f(e, d);
        f.addTerm(m, ScalarFraction::one(e));
        return f;
    }
    static MaskForm covector(const GenEnvPtr& e, int d, int slot) {
        return basis(e, d, Mask(1) << slot);
    }

    void addTerm(Mask m, const ScalarFraction& s) {
        if (s.isZero()) return;
        auto it = c.find(m);
        if (it == c.end()) {
            c.emplace(m, s);
        } else {
            it->second = it->second + s;
            if (it->second.isZero()) c.erase(it);
        }
    }

    bool isZero() const { return c.empty(); }
    bool equals(const MaskForm& o) const { return (*this - o).isZero(); }

    MaskForm operator+(const MaskForm& o) const {
        MaskForm r = *this;
        for (auto& [m, s] : o.c) r.addTerm(m, s);
        return r;
    }
    MaskForm operator-(const MaskForm& o) const {
        MaskForm r = *this;
        for (auto& [m, s] : o.c) r.addTerm(m, -s);
        return r;
    }
    MaskForm operator-() const {
        MaskForm r(env, dim);
        for (auto& [m, s] : c) r.c.emplace(m, -s);
        return r;
    }
    MaskForm operator*(const ScalarFraction& s) const {
        MaskForm r(env, dim);
        for (auto& [m, t] : c) r.addTerm(m, t * s);
        return r;
    }
    MaskForm wedge(const MaskForm& o) const {
        MaskForm r(env, dim);
        for (auto& [m1, s1] : c)
            for (auto& [m2, s2] : o.c) {
                int sg = mergeSign(m1, m2);
                if (!sg) continue;
                ScalarFraction t = s1 * s2;
                r.addTerm(m1 | m2, sg < 0 ? -t : t);
            }
        return r;
    }

    MaskForm mapScalars(const std::function<ScalarFraction(const ScalarFraction&)>& f) const {
        MaskForm r = *this;
        r.c.clear();
        for (auto& [m, s] : c) r.addTerm(m, f(s));
        return r;
    }
};

inline MaskForm operator*(const ScalarFraction& s, const MaskForm& f) { return f * s; }

// -------------------------------------------------------------------- Form

struct BiMask {
    Mask I = 0, K = 0;
    auto operator<=>(const BiMask&) const = default;
};

struct Form {
    GenEnvPtr env;
    int n = 0;
    std::map<BiMask, ScalarFraction> c;

    Form() : env(emptyEnv()) {}
    Form(GenEnvPtr e, int nn) : env(std::move(e)), n(nn) {}

    static Form scalar(const GenEnvPtr& e, int n, const ScalarFraction& s) {
        Form f(e, n);
        f.addTerm({0, 0}, s);
        return f;
    }
    static Form basis(const GenEnvPtr& e, int n, Mask I, Mask K) {
        Form f(e, n);
        f.addTerm({I, K}, ScalarFraction::one(e));
        return f;
    }
    /* w_i or cw_i, 1-based */
    static Form w(const GenEnvPtr& e, int n, int i) { return basis(e, n, Mask(1) << (i - 1), 0); }
    static Form cw(const GenEnvPtr& e, int n, int i) { return basis(e, n, 0, Mask(1) << (i - 1)); }

    void addTerm(BiMask m, const ScalarFraction& s) {
        if (s.isZero()) return;
        auto it = c.find(m);
        if (it == c.end()) {
            c.emplace(m, s);
        } else {
            it->second = it->second + s;
            if (it->second.isZero()) c.erase(it);
        }
    }

    bool isZero() const { return c.empty(); }
    bool equals(const Form& o) const { return (*this - o).isZero(); }

    Form operator+(const Form& o) const {
        Form r = *this;
        for (auto& [m, s] : o.c) r.addTerm(m, s);
        return r;
    }
    Form operator-(const Form& o) const {
        Form r = *this;
        for (auto& [m, s] : o.c) r.addTerm(m, -s);
        return r;
    }
    Form operator-() const {
        Form r(env, n);
        for (auto& [m, s] : c) r.c.emplace(m, -s);
        return r;
    }
    Form operator*(const ScalarFraction& s) const {
        Form r(env, n);
        for (auto& [m, t] : c) r.addTerm(m, t * s);
        return r;
    }

    /* all w factors stay left of all cw factors; moving the second term's w
     * block past the first term's cw block costs (-1)^(|K1||I2|) */
    Form wedge(const Form& o) const {
        Form r(env, n);
        for (auto& [m1, s1] : c)
            for (auto& [m2, s2] : o.c) {
                int si = mergeSign(m1.I, m2.I);
                int sk = mergeSign(m1.K, m2.K);
                if (!si || !sk) continue;
                int sg = si * sk;
                if ((std::popcount(m1.K) * std::popcount(m2.I)) % 2) sg = -sg;
                ScalarFraction t = s1 * s2;
                r.addTerm({m1.I | m2.I, m1.K | m2.K}, sg < 0 ? -t : t);
            }
        return r;
    }

    /* conj(w_I ^ cw_K) = (-1)^(|I||K|) w_K ^ cw_I, coefficients conjugated */
    Form conj() const {
        Form r(env, n);
        for (auto& [m, s] : c) {
            int sg = (std::popcount(m.I) * std::popcount(m.K)) % 2 ? -1 : 1;
            ScalarFraction t = s.conj();
            r.addTerm({m.K, m.I}, sg < 0 ? -t : t);
        }
        return r;
    }

    Form project(int p, int q) const {
        Form r(env, n);
        for (auto& [m, s] : c)
            if (std::popcount(m.I) == p && std::popcount(m.K) == q) r.c.emplace(m, s);
        return r;
    }

    std::vector<std::pair<int, int>> bidegrees() const {
        std::vector<std::pair<int, int>> out;
        for (auto& [m, s] : c) {
            (void)s;
            std::pair<int, int> pq{std::popcount(m.I), std::popcount(m.K)};
            if (out.empty() || out.back() != pq) {
                if (std::find(out.begin(), out.end(), pq) == out.end()) out.push_back(pq);
            }
        }
        return out;
    }

    /* shift every index up by `by` (for products); order-preserving, signless */
    Form shiftedIndices(int by, int newN) const {
        Form r(env, newN);
        for (auto& [m, s] : c) r.c.emplace(BiMask{m.I << by, m.K << by}, s);
        return r;
    }

    Form mapScalars(const std::function<ScalarFraction(const ScalarFraction&)>& f) const {
        Form r(env, n);
        for (auto& [m, s] : c) r.addTerm(m, f(s));
        return r;
    }
};

inline Form operator*(const ScalarFraction& s, const Form& f) { return f * s; }

/* multiplicative extension of b^a -> images[a] */
inline Form expandInBasis(const MaskForm& f, const std::vector<Form>& images,
                          const GenEnvPtr& env, int n) {
    Form out(env, n);
    for (auto& [m, s] : f.c) {
        Form acc = Form::scalar(env, n, s);
        for (int a : bitsOf(m)) acc = acc.wedge(images[size_t(a)]);
        out = out + acc;
    }
    return out;
}

/* multiplicative extension of w_i -> img10[i-1], cw_i -> img01[i-1] */
inline MaskForm expandInMask(const Form& f, const std::vector<MaskForm>& img10,
                             const std::vector<MaskForm>& img01, const GenEnvPtr& env, int dim) {
    MaskForm out(env, dim);
    for (auto& [m, s] : f.c) {
        MaskForm acc = MaskForm::scalar(env, dim, s);
        for (int i : bitsOf(m.I)) acc = acc.wedge(img10[size_t(i)]);
        for (int i : bitsOf(m.K)) acc = acc.wedge(img01[size_t(i)]);
        out = out + acc;
    }
    return out;
}

std::string render(const Form& f);
std::string render(const MaskForm& f, const std::vector<std::string>& names);

} // namespace acslab
