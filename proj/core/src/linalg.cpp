#include "paradis/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace paradis {

namespace {

constexpr double kHermTol = 1e-10;     // relative hermiticity tolerance
constexpr double kSigmaFloor = 1e-12;  // singular values below this * sigma_max become 0
constexpr double kPdFloor = 1e-12;     // lambda_min / lambda_max limit for pd_power

using EMat = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;

ECMap view(const CMat& m) { return ECMap(m.a.data(), m.rows, m.cols); }
EMap view(CMat& m) { return EMap(m.a.data(), m.rows, m.cols); }

void require_square(const CMat& m, const char* op) {
    if (!m.square() || m.rows == 0)
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(op) + ": square nonempty matrix required, got " +
                        std::to_string(m.rows) + "x" + std::to_string(m.cols));
}

void require_same_shape(const CMat& x, const CMat& y, const char* op) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(op) + ": shapes " + std::to_string(x.rows) + "x" +
                        std::to_string(x.cols) + " and " + std::to_string(y.rows) + "x" +
                        std::to_string(y.cols) + " differ");
}

} // namespace

const char* error_kind_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::ZeroMatrix: return "ZeroMatrix";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::AllZeroGenerators: return "AllZeroGenerators";
        case ErrorKind::NotHermitianClosed: return "NotHermitianClosed";
        case ErrorKind::NotDensityOperator: return "NotDensityOperator";
        case ErrorKind::NotDistinguishable: return "NotDistinguishable";
        case ErrorKind::InsufficientCopies: return "InsufficientCopies";
        case ErrorKind::NegativeEntry: return "NegativeEntry";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

CMat CMat::identity(int d) {
    CMat m(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::diag(const std::vector<Cx>& entries) {
    CMat m(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
    for (size_t i = 0; i < entries.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = entries[i];
    return m;
}

CMat adjoint(const CMat& m) {
    CMat r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

CMat transpose_mat(const CMat& m) {
    CMat r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(j, i) = m(i, j);
    return r;
}

CMat conj_mat(const CMat& m) {
    CMat r(m.rows, m.cols);
    for (size_t k = 0; k < m.a.size(); ++k) r.a[k] = std::conj(m.a[k]);
    return r;
}

CMat add(const CMat& x, const CMat& y) {
    require_same_shape(x, y, "add");
    CMat r(x.rows, x.cols);
    for (size_t k = 0; k < x.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
}

CMat sub(const CMat& x, const CMat& y) {
    require_same_shape(x, y, "sub");
    CMat r(x.rows, x.cols);
    for (size_t k = 0; k < x.a.size(); ++k) r.a[k] = x.a[k] - y.a[k];
    return r;
}

CMat scale(Cx s, const CMat& m) {
    CMat r(m.rows, m.cols);
    for (size_t k = 0; k < m.a.size(); ++k) r.a[k] = s * m.a[k];
    return r;
}

CMat matmul(const CMat& x, const CMat& y) {
    if (x.cols != y.rows)
        throw Error(ErrorKind::DimensionMismatch,
                    "matmul: inner dimensions " + std::to_string(x.cols) + " and " +
                        std::to_string(y.rows) + " differ");
    CMat r(x.rows, y.cols);
    view(r) = view(x) * view(y);
    return r;
}

Cx trace(const CMat& m) {
    require_square(m, "trace");
    Cx t = 0.0;
    for (int i = 0; i < m.rows; ++i) t += m(i, i);
    return t;
}

double frob_norm(const CMat& m) {
    double s = 0.0;
    for (const Cx& v : m.a) s += std::norm(v);
    return std::sqrt(s);
}

double max_abs(const CMat& m) {
    double s = 0.0;
    for (const Cx& v : m.a) s = std::max(s, std::abs(v));
    return s;
}

Cx hs_inner(const CMat& x, const CMat& y) {
    require_same_shape(x, y, "hs_inner");
    Cx s = 0.0;
    for (size_t k = 0; k < x.a.size(); ++k) s += std::conj(x.a[k]) * y.a[k];
    return s;
}

CMat kron(const CMat& x, const CMat& y) {
    CMat r(x.rows * y.rows, x.cols * y.cols);
    for (int i1 = 0; i1 < x.rows; ++i1)
        for (int j1 = 0; j1 < x.cols; ++j1) {
            const Cx f = x(i1, j1);
            if (f == Cx(0.0)) continue;
            for (int i2 = 0; i2 < y.rows; ++i2)
                for (int j2 = 0; j2 < y.cols; ++j2)
                    r(i1 * y.rows + i2, j1 * y.cols + j2) = f * y(i2, j2);
        }
    return r;
}

CMat kron_power(const CMat& m, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "kron_power: n must be >= 1");
    CMat r = m;
    for (int k = 1; k < n; ++k) r = kron(r, m);
    return r;
}

CMat herm_part(const CMat& m) {
    require_square(m, "herm_part");
    CMat r(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

CMat skew_part(const CMat& m) {
    require_square(m, "skew_part");
    CMat r(m.rows, m.cols);
    const Cx half_over_i(0.0, -0.5); // 1/(2i)
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(i, j) = half_over_i * (m(i, j) - std::conj(m(j, i)));
    return r;
}

EigDecomposition eigh(const CMat& a) {
    require_square(a, "eigh");
    const double scale = std::max(1.0, frob_norm(a));
    double dev = 0.0;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) dev += std::norm(a(i, j) - std::conj(a(j, i)));
    if (std::sqrt(dev) > kHermTol * scale)
        throw Error(ErrorKind::NotHermitian,
                    "eigh: matrix deviates from Hermitian by " + std::to_string(std::sqrt(dev)));

    const CMat h = herm_part(a);
    Eigen::SelfAdjointEigenSolver<EMat> solver(view(h));
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::InvalidArgument, "eigh: eigensolver failed to converge");

    EigDecomposition out;
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + a.rows);
    out.vectors = CMat(a.rows, a.rows);
    view(out.vectors) = solver.eigenvectors();
    return out;
}

SvdDecomposition svd(const CMat& a) {
    if (a.rows == 0 || a.cols == 0)
        throw Error(ErrorKind::DimensionMismatch, "svd: empty matrix");
    Eigen::JacobiSVD<EMat> solver(view(a), Eigen::ComputeFullU | Eigen::ComputeFullV);

    SvdDecomposition out;
    const int k = std::min(a.rows, a.cols);
    out.sigma.assign(solver.singularValues().data(), solver.singularValues().data() + k);
    const double floor = out.sigma.empty() ? 0.0 : kSigmaFloor * out.sigma.front();
    for (double& s : out.sigma)
        if (s < floor) s = 0.0;
    out.u = CMat(a.rows, a.rows);
    view(out.u) = solver.matrixU();
    out.v = CMat(a.cols, a.cols);
    view(out.v) = solver.matrixV();
    return out;
}

double spectral_norm(const CMat& a) {
    if (a.rows == 0 || a.cols == 0) return 0.0;
    Eigen::JacobiSVD<EMat> solver(view(a));
    return solver.singularValues().size() > 0 ? solver.singularValues()(0) : 0.0;
}

CMat psd_project(const CMat& a) {
    EigDecomposition eig = eigh(a);
    const int d = a.rows;
    CMat r(d, d);
    for (int k = 0; k < d; ++k) {
        const double lam = eig.values[k];
        if (lam <= 0.0) continue;
        for (int i = 0; i < d; ++i) {
            const Cx vi = eig.vectors(i, k);
            if (vi == Cx(0.0)) continue;
            for (int j = 0; j < d; ++j)
                r(i, j) += lam * vi * std::conj(eig.vectors(j, k));
        }
    }
    return r;
}

CMat pd_power(const CMat& a, double p) {
    EigDecomposition eig = eigh(a);
    const int d = a.rows;
    const double lmax = eig.values.back();
    if (lmax <= 0.0 || eig.values.front() <= kPdFloor * lmax)
        throw Error(ErrorKind::NotPositiveDefinite,
                    "pd_power: lambda_min " + std::to_string(eig.values.front()) +
                        " too small relative to lambda_max " + std::to_string(lmax));
    CMat r(d, d);
    for (int k = 0; k < d; ++k) {
        const double lam = std::pow(eig.values[k], p);
        for (int i = 0; i < d; ++i) {
            const Cx vi = eig.vectors(i, k);
            if (vi == Cx(0.0)) continue;
            for (int j = 0; j < d; ++j)
                r(i, j) += lam * vi * std::conj(eig.vectors(j, k));
        }
    }
    return r;
}

} // namespace paradis
