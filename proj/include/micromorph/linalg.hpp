#pragma once

// Small exact linear algebra over the scalar field: inverse, determinant,
// and Sylvester inertia (signature by symmetric congruence, no eigenvalue
// numerics).

#include "micromorph/scalar.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace micromorph {

using ScalarMatrix = std::vector<std::vector<Scalar>>;

inline ScalarMatrix identity_matrix(std::size_t n) {
    ScalarMatrix m(n, std::vector<Scalar>(n, Scalar(0)));
    for (std::size_t j = 0; j < n; ++j)
        m[j][j] = Scalar(1);
    return m;
}

inline ScalarMatrix mat_mul(const ScalarMatrix& a, const ScalarMatrix& b) {
    std::size_t n = a.size(), m = b[0].size(), k = b.size();
    ScalarMatrix r(n, std::vector<Scalar>(m, Scalar(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t].is_zero())
                continue;
            for (std::size_t j = 0; j < m; ++j)
                r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

inline std::vector<Scalar> mat_vec(const ScalarMatrix& a, const std::vector<Scalar>& v) {
    std::vector<Scalar> r(a.size(), Scalar(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            r[i] += a[i][j] * v[j];
    return r;
}

// Gauss-Jordan inverse; throws on singular input.
inline ScalarMatrix mat_inverse(ScalarMatrix a) {
    std::size_t n = a.size();
    ScalarMatrix inv = identity_matrix(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero())
            ++piv;
        if (piv == n)
            throw std::domain_error("mat_inverse: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Scalar d = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero())
                continue;
            Scalar f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

inline Scalar mat_det(ScalarMatrix a) {
    std::size_t n = a.size();
    Scalar det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero())
            ++piv;
        if (piv == n)
            return Scalar(0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero())
                continue;
            Scalar f = a[r][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j)
                a[r][j] -= f * a[col][j];
        }
    }
    return det;
}

struct Inertia {
    int n_plus{0};
    int n_minus{0};
    int n_zero{0};
    int signature() const { return n_plus - n_minus; }
};

// Sylvester inertia of a real rational symmetric matrix by congruence
// elimination. Zero diagonal pivots are handled by the hyperbolic row/column
// addition trick, which is itself a congruence.
inline Inertia symmetric_inertia(ScalarMatrix a) {
    std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!a[i][j].is_real())
                throw std::domain_error("symmetric_inertia: complex entry");
            if (!(a[i][j] == a[j][i]))
                throw std::domain_error("symmetric_inertia: not symmetric");
        }
    Inertia out;
    std::size_t k = 0;
    while (k < n) {
        if (a[k][k].is_zero()) {
            std::size_t j = k + 1;
            while (j < n && a[k][j].is_zero())
                ++j;
            if (j == n) {
                // Row k is zero on and after the diagonal; by symmetry of the
                // remaining block the whole row/column is zero.
                ++out.n_zero;
                ++k;
                continue;
            }
            // congruence: row_k += row_j, col_k += col_j gives 2*a_kj on the diagonal
            for (std::size_t t = 0; t < n; ++t)
                a[k][t] += a[j][t];
            for (std::size_t t = 0; t < n; ++t)
                a[t][k] += a[t][j];
        }
        Scalar p = a[k][k];
        if (p.re() > Rational(0))
            ++out.n_plus;
        else
            ++out.n_minus;
        for (std::size_t r = k + 1; r < n; ++r) {
            if (a[r][k].is_zero())
                continue;
            Scalar f = a[r][k] / p;
            for (std::size_t t = 0; t < n; ++t)
                a[r][t] -= f * a[k][t];
            for (std::size_t t = 0; t < n; ++t)
                a[t][r] -= f * a[t][k];
        }
        ++k;
    }
    return out;
}

}  // namespace micromorph
