#pragma once
/* Exact linear algebra over a field with isZero(), used with GaussianRational
 * and with ScalarFraction.  Vectors are rows; kernels are right kernels. */

#include "scalar.hpp"

#include <optional>
#include <vector>

namespace acslab {

template <class F> struct FieldTraits;
template <> struct FieldTraits<GaussianRational> {
    static GaussianRational zero() { return GaussianRational(0); }
    static GaussianRational one() { return GaussianRational(1); }
};
template <> struct FieldTraits<ScalarFraction> {
    static ScalarFraction zero() { return ScalarFraction(); }
    static ScalarFraction one() { return ScalarFraction::one(emptyEnv()); }
};

using GRow = std::vector<GaussianRational>;
using GMat = std::vector<GRow>;

/* reduced row echelon in place; zero rows stay; returns pivot columns */
template <class F>
std::vector<int> rrefT(std::vector<std::vector<F>>& m) {
    std::vector<int> piv;
    if (m.empty()) return piv;
    size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (size_t col = 0; col < cols && r < rows; ++col) {
        size_t sel = r;
        while (sel < rows && m[sel][col].isZero()) ++sel;
        if (sel == rows) continue;
        std::swap(m[r], m[sel]);
        F inv = FieldTraits<F>::one() / m[r][col];
        for (auto& x : m[r]) x = x * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][col].isZero()) continue;
            F f = m[i][col];
            for (size_t j = col; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        piv.push_back(int(col));
        ++r;
    }
    return piv;
}

template <class F>
bool rowIsZero(const std::vector<F>& v) {
    return std::all_of(v.begin(), v.end(), [](const F& x) { return x.isZero(); });
}

template <class F>
int rankT(std::vector<std::vector<F>> m) {
    return int(rrefT(m).size());
}

/* nonzero rows of the rref */
template <class F>
std::vector<std::vector<F>> rowBasisT(std::vector<std::vector<F>> m) {
    std::vector<int> piv = rrefT(m);
    m.resize(piv.size());
    return m;
}

template <class F>
std::vector<std::vector<F>> stackT(std::vector<std::vector<F>> a,
                                   const std::vector<std::vector<F>>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

template <class F>
std::vector<std::vector<F>> mulT(const std::vector<std::vector<F>>& a,
                                 const std::vector<std::vector<F>>& b) {
    size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
    std::vector<std::vector<F>> out(r, std::vector<F>(c, FieldTraits<F>::zero()));
    for (size_t i = 0; i < r; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t].isZero()) continue;
            for (size_t j = 0; j < c; ++j) out[i][j] = out[i][j] + a[i][t] * b[t][j];
        }
    return out;
}

template <class F>
std::vector<std::vector<F>> transposeT(const std::vector<std::vector<F>>& a, size_t cols) {
    std::vector<std::vector<F>> out(cols, std::vector<F>(a.size(), FieldTraits<F>::zero()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < cols; ++j) out[j][i] = a[i][j];
    return out;
}

template <class F>
std::vector<std::vector<F>> identityT(size_t n) {
    std::vector<std::vector<F>> out(n, std::vector<F>(n, FieldTraits<F>::zero()));
    for (size_t i = 0; i < n; ++i) out[i][i] = FieldTraits<F>::one();
    return out;
}

/* determinant by field elimination */
template <class F>
F detT(std::vector<std::vector<F>> m) {
    size_t n = m.size();
    F det = FieldTraits<F>::one();
    bool neg = false;
    for (size_t col = 0; col < n; ++col) {
        size_t sel = col;
        while (sel < n && m[sel][col].isZero()) ++sel;
        if (sel == n) return FieldTraits<F>::zero();
        if (sel != col) {
            std::swap(m[sel], m[col]);
            neg = !neg;
        }
        det = det * m[col][col];
        F inv = FieldTraits<F>::one() / m[col][col];
        for (size_t i = col + 1; i < n; ++i) {
            if (m[i][col].isZero()) continue;
            F f = m[i][col] * inv;
            for (size_t j = col; j < n; ++j) m[i][j] = m[i][j] - f * m[col][j];
        }
    }
    return neg ? FieldTraits<F>::zero() - det : det;
}

/* right kernel {x : A x = 0}, basis as rows of length cols */
template <class F>
std::vector<std::vector<F>> kernelT(std::vector<std::vector<F>> m, size_t cols) {
    std::vector<int> piv = rrefT(m);
    std::vector<bool> isPiv(cols, false);
    for (int p : piv) isPiv[size_t(p)] = true;
    std::vector<std::vector<F>> out;
    for (size_t j = 0; j < cols; ++j) {
        if (isPiv[j]) continue;
        std::vector<F> x(cols, FieldTraits<F>::zero());
        x[j] = FieldTraits<F>::one();
        for (size_t i = 0; i < piv.size(); ++i)
            x[size_t(piv[i])] = FieldTraits<F>::zero() - m[i][j];
        out.push_back(std::move(x));
    }
    return out;
}

/* one solution of A x = b, free coordinates zero */
template <class F>
std::optional<std::vector<F>> solveT(const std::vector<std::vector<F>>& a,
                                     const std::vector<F>& b) {
    size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<std::vector<F>> aug(rows, std::vector<F>(cols + 1, FieldTraits<F>::zero()));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    std::vector<int> piv = rrefT(aug);
    if (!piv.empty() && piv.back() == int(cols)) return std::nullopt;
    std::vector<F> x(cols, FieldTraits<F>::zero());
    for (size_t i = 0; i < piv.size(); ++i) x[size_t(piv[i])] = aug[i][cols];
    return x;
}

/* inverse of a square matrix; throws on singular input */
template <class F>
std::vector<std::vector<F>> inverseT(const std::vector<std::vector<F>>& a) {
    size_t n = a.size();
    std::vector<std::vector<F>> aug(n, std::vector<F>(2 * n, FieldTraits<F>::zero()));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = FieldTraits<F>::one();
    }
    std::vector<int> piv = rrefT(aug);
    if (piv.size() != n || size_t(piv.back()) >= n)
        throw std::domain_error("linalg: singular matrix");
    std::vector<std::vector<F>> out(n, std::vector<F>(n, FieldTraits<F>::zero()));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
    return out;
}

inline bool inRowSpace(const GRow& v, const GMat& m) {
    GMat s = m;
    s.push_back(v);
    return rankT(s) == rankT(m);
}

inline GMat spaceSum(const GMat& a, const GMat& b) { return rowBasisT(stackT(a, b)); }

/* row(a) ∩ row(b): kernel of [a^T | -b^T] gives matching combinations */
inline GMat spaceIntersect(const GMat& a, const GMat& b, size_t ambient) {
    if (a.empty() || b.empty()) return {};
    GMat m(ambient, GRow(a.size() + b.size(), GaussianRational(0)));
    for (size_t j = 0; j < ambient; ++j) {
        for (size_t i = 0; i < a.size(); ++i) m[j][i] = a[i][j];
        for (size_t i = 0; i < b.size(); ++i) m[j][a.size() + i] = -b[i][j];
    }
    GMat ker = kernelT(m, a.size() + b.size());
    GMat out;
    for (auto& xy : ker) {
        GRow v(ambient, GaussianRational(0));
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < ambient; ++j) v[j] += xy[i] * a[i][j];
        out.push_back(std::move(v));
    }
    return rowBasisT(out);
}

/* quotient Z/B with chosen rref representatives; B ⊆ Z is enforced */
struct Subquotient {
    size_t ambient = 0;
    GMat reps;                 // rref rows, zero at every boundary pivot
    GMat bnd;                  // rref rows of the boundary space
    std::vector<int> pivR, pivB;

    int dim() const { return int(reps.size()); }

    static void reduceBy(GRow& v, const GMat& m, const std::vector<int>& piv) {
        for (size_t i = 0; i < piv.size(); ++i) {
            GaussianRational f = v[size_t(piv[i])];
            if (f.isZero()) continue;
            for (size_t j = 0; j < v.size(); ++j) v[j] -= f * m[i][j];
        }
    }

    /* coefficients over reps; throws if v is not in span(reps) + span(bnd) */
    GRow coords(GRow v) const {
        reduceBy(v, bnd, pivB);
        GRow out(reps.size(), GaussianRational(0));
        for (size_t i = 0; i < reps.size(); ++i) out[i] = v[size_t(pivR[i])];
        reduceBy(v, reps, pivR);
        if (!rowIsZero(v)) throw std::domain_error("linalg: vector outside the subspace");
        return out;
    }

    GRow repCombination(const GRow& coeff) const {
        GRow v(ambient, GaussianRational(0));
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = 0; j < ambient; ++j) v[j] += coeff[i] * reps[i][j];
        return v;
    }
};

inline Subquotient makeSubquotient(const GMat& cocycles, const GMat& boundaries, size_t ambient) {
    Subquotient s;
    s.ambient = ambient;
    s.bnd = boundaries;
    s.pivB = rrefT(s.bnd);
    s.bnd.resize(s.pivB.size());
    GMat z = cocycles;
    for (auto& row : z) Subquotient::reduceBy(row, s.bnd, s.pivB);
    s.pivR = rrefT(z);
    z.resize(s.pivR.size());
    s.reps = std::move(z);
    // boundaries must lie inside the cocycles
    for (const auto& b : s.bnd)
        if (!inRowSpace(b, cocycles))
            throw std::domain_error("linalg: boundaries escape the cocycle space");
    return s;
}

} // namespace acslab
