#pragma once

// Dense complex matrix kernel used by every other part of the library.
// Matrices are small (desk scale, d <= 1024) and stored row major; all
// operations are pure functions returning fresh values.

#include <complex>
#include <cstddef>
#include <vector>

#include "paradis/error.hpp"

namespace paradis {

using Cx = std::complex<double>;

struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<Cx> a; // row major, size rows*cols

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Cx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Cx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool square() const { return rows == cols; }

    static CMat zeros(int r, int c) { return CMat(r, c); }
    static CMat identity(int d);
    static CMat diag(const std::vector<Cx>& entries);
};

// Eigendecomposition of a Hermitian matrix: a = V diag(values) V^dagger,
// eigenvalues ascending, eigenvectors the columns of V (orthonormal).
struct EigDecomposition {
    std::vector<double> values;
    CMat vectors;
};

// Singular value decomposition a = U diag(sigma) V^dagger with sigma
// descending; values below 1e-12 * sigma_max are reported as exactly 0.
struct SvdDecomposition {
    CMat u;
    std::vector<double> sigma;
    CMat v;
};

// ── basic algebra ──────────────────────────────────────────────────────

CMat adjoint(const CMat& m);
CMat transpose_mat(const CMat& m);
CMat conj_mat(const CMat& m);

CMat add(const CMat& x, const CMat& y);
CMat sub(const CMat& x, const CMat& y);
CMat scale(Cx s, const CMat& m);
CMat matmul(const CMat& x, const CMat& y);

Cx trace(const CMat& m);
double frob_norm(const CMat& m);
double max_abs(const CMat& m);

// Hilbert-Schmidt inner product tr(x^dagger y); linear in y.
Cx hs_inner(const CMat& x, const CMat& y);

// Kronecker product, row-major convention:
// kron(x, y)[(i1*y.rows + i2), (j1*y.cols + j2)] = x(i1,j1) * y(i2,j2).
CMat kron(const CMat& x, const CMat& y);

// n-fold Kronecker power; n >= 1.
CMat kron_power(const CMat& m, int n);

// Hermitian and skew parts: m = herm_part(m) + i * skew_part(m), both
// parts Hermitian.
CMat herm_part(const CMat& m);
CMat skew_part(const CMat& m);

// ── decompositions ─────────────────────────────────────────────────────

// Eigendecomposition of a Hermitian matrix. Inputs within the relative
// hermiticity tolerance 1e-10 are symmetrized to (a + a^dagger)/2 first;
// anything farther raises NotHermitian.
EigDecomposition eigh(const CMat& a);

SvdDecomposition svd(const CMat& a);

// Largest singular value (0 for the zero matrix).
double spectral_norm(const CMat& a);

// Nearest positive semidefinite matrix in Frobenius norm: eigenvalues of
// the symmetrized input clipped at 0.
CMat psd_project(const CMat& a);

// Real power of a positive definite matrix. Raises NotPositiveDefinite
// when lambda_min <= 1e-12 * lambda_max.
CMat pd_power(const CMat& a, double p);

} // namespace paradis
