#include "paradis/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace paradis {

namespace {

constexpr double kCompletenessTol = 1e-9;
constexpr double kHermNullTol = 1e-8; // relative singular value cutoff for Hermitian directions

// Projection of m onto the span of an orthonormal family.
CMat project_onto(const std::vector<CMat>& basis, const CMat& m) {
    CMat p = CMat::zeros(m.rows, m.cols);
    for (const CMat& b : basis) p = add(p, scale(hs_inner(b, m), b));
    return p;
}

} // namespace

KrausChannel KrausChannel::from_kraus(std::vector<CMat> kraus) {
    if (kraus.empty())
        throw Error(ErrorKind::InvalidArgument, "KrausChannel: at least one Kraus operator required");
    const int d_out = kraus.front().rows;
    const int d_in = kraus.front().cols;
    if (d_in < 1 || d_out < 1)
        throw Error(ErrorKind::DimensionMismatch, "KrausChannel: empty Kraus operator");
    for (const CMat& k : kraus)
        if (k.rows != d_out || k.cols != d_in)
            throw Error(ErrorKind::DimensionMismatch, "KrausChannel: Kraus operators have mixed shapes");

    CMat acc = CMat::zeros(d_in, d_in);
    for (const CMat& k : kraus) acc = add(acc, matmul(adjoint(k), k));
    const double dev = frob_norm(sub(acc, CMat::identity(d_in)));
    if (dev > kCompletenessTol)
        throw Error(ErrorKind::InvalidArgument,
                    "KrausChannel: completeness violated, |sum K^t K - I|_F = " + std::to_string(dev));

    KrausChannel ch;
    ch.dim_in = d_in;
    ch.dim_out = d_out;
    ch.kraus = std::move(kraus);
    return ch;
}

OperatorSubspace from_generators(const std::vector<CMat>& generators, double dep_tol) {
    if (generators.empty())
        throw Error(ErrorKind::InvalidArgument, "from_generators: no generators given");
    const int d = generators.front().rows;
    if (d < 1 || generators.front().cols != d)
        throw Error(ErrorKind::DimensionMismatch, "from_generators: generators must be square");
    for (const CMat& g : generators)
        if (g.rows != d || g.cols != d)
            throw Error(ErrorKind::DimensionMismatch, "from_generators: generator shapes differ");

    OperatorSubspace s;
    s.d = d;
    s.generators = generators;
    for (const CMat& g : generators) {
        // one re-orthogonalization pass keeps the basis orthonormal to
        // machine precision even for nearly dependent inputs
        CMat r = sub(g, project_onto(s.basis, g));
        r = sub(r, project_onto(s.basis, r));
        const double nrm = frob_norm(r);
        if (nrm < dep_tol * std::max(1.0, frob_norm(g))) continue;
        s.basis.push_back(scale(1.0 / nrm, r));
    }
    if (s.basis.empty())
        throw Error(ErrorKind::AllZeroGenerators, "from_generators: all generators dependent or zero");
    return s;
}

OperatorSubspace from_channel_pair(const KrausChannel& e, const KrausChannel& f) {
    if (e.dim_in != f.dim_in || e.dim_out != f.dim_out)
        throw Error(ErrorKind::DimensionMismatch, "from_channel_pair: channel dimensions differ");
    std::vector<CMat> products;
    products.reserve(e.kraus.size() * f.kraus.size());
    for (const CMat& ek : e.kraus)
        for (const CMat& fk : f.kraus) products.push_back(matmul(adjoint(ek), fk));
    return from_generators(products);
}

std::vector<CMat> tensor_power_generators(const OperatorSubspace& s, int n, int cap) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "tensor_power_generators: n must be >= 1");
    const int m = s.dim();
    long long count = 1;
    for (int k = 0; k < n; ++k) {
        count *= m;
        if (count > cap)
            throw Error(ErrorKind::CapExceeded,
                        "tensor_power_generators: dim(s)^n = " + std::to_string(m) + "^" +
                            std::to_string(n) + " exceeds cap " + std::to_string(cap));
    }

    std::vector<CMat> out;
    out.reserve(static_cast<size_t>(count));
    std::vector<int> idx(static_cast<size_t>(n), 0);
    for (long long c = 0; c < count; ++c) {
        CMat t = s.basis[idx[0]];
        for (int k = 1; k < n; ++k) t = kron(t, s.basis[idx[k]]);
        out.push_back(std::move(t));
        for (int k = n - 1; k >= 0; --k) { // first factor slowest
            if (++idx[k] < m) break;
            idx[k] = 0;
        }
    }
    return out;
}

std::vector<CMat> hermitian_elements(const OperatorSubspace& s) {
    const int m = s.dim();
    const int d = s.d;

    // X = sum (u_k + i v_k) B_k is Hermitian iff R c = 0 where the
    // columns of R are the real vectorizations of B_k - B_k^dagger
    // (for u_k) and i(B_k + B_k^dagger) (for v_k).
    const int nrows = 2 * d * d;
    std::vector<std::vector<double>> r(static_cast<size_t>(2 * m),
                                       std::vector<double>(static_cast<size_t>(nrows), 0.0));
    for (int k = 0; k < m; ++k) {
        const CMat& b = s.basis[k];
        const CMat bd = adjoint(b);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const Cx cu = b(i, j) - bd(i, j);
                const Cx cv = Cx(0.0, 1.0) * (b(i, j) + bd(i, j));
                const size_t e = static_cast<size_t>(i) * d + j;
                r[static_cast<size_t>(2 * k)][2 * e] = cu.real();
                r[static_cast<size_t>(2 * k)][2 * e + 1] = cu.imag();
                r[static_cast<size_t>(2 * k + 1)][2 * e] = cv.real();
                r[static_cast<size_t>(2 * k + 1)][2 * e + 1] = cv.imag();
            }
    }

    // Null space of R from the small Gram matrix R^T R (2m x 2m).
    CMat gram(2 * m, 2 * m);
    for (int p = 0; p < 2 * m; ++p)
        for (int q = p; q < 2 * m; ++q) {
            double dot = 0.0;
            for (int e = 0; e < nrows; ++e) dot += r[static_cast<size_t>(p)][static_cast<size_t>(e)] *
                                                   r[static_cast<size_t>(q)][static_cast<size_t>(e)];
            gram(p, q) = dot;
            gram(q, p) = dot;
        }
    EigDecomposition eig = eigh(gram);
    const double lmax = std::max(eig.values.back(), 0.0);
    // Squaring kHermNullTol lands below what eigh can resolve for zero
    // eigenvalues of the Gram, so keep a floor at the solver noise level.
    const double cut = std::max(kHermNullTol * kHermNullTol, 1e-13) * std::max(1.0, lmax);

    // eigh works over C; the Gram matrix is real, so recover a real
    // orthonormal null basis from the real and imaginary parts of the
    // complex null eigenvectors.
    int null_dim = 0;
    std::vector<std::vector<double>> raw;
    for (int k = 0; k < 2 * m; ++k) {
        if (eig.values[k] > cut) continue;
        ++null_dim;
        std::vector<double> re(static_cast<size_t>(2 * m)), im(static_cast<size_t>(2 * m));
        for (int i = 0; i < 2 * m; ++i) {
            re[static_cast<size_t>(i)] = eig.vectors(i, k).real();
            im[static_cast<size_t>(i)] = eig.vectors(i, k).imag();
        }
        raw.push_back(std::move(re));
        raw.push_back(std::move(im));
    }
    std::vector<std::vector<double>> null_basis;
    for (const std::vector<double>& cand : raw) {
        if (static_cast<int>(null_basis.size()) == null_dim) break;
        std::vector<double> v = cand;
        for (const std::vector<double>& u : null_basis) {
            double dot = 0.0;
            for (int i = 0; i < 2 * m; ++i) dot += u[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
            for (int i = 0; i < 2 * m; ++i) v[static_cast<size_t>(i)] -= dot * u[static_cast<size_t>(i)];
        }
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm < 1e-6) continue;
        for (double& x : v) x /= nrm;
        null_basis.push_back(std::move(v));
    }

    std::vector<CMat> out;
    for (const std::vector<double>& c : null_basis) {
        CMat x = CMat::zeros(d, d);
        for (int i = 0; i < m; ++i) {
            const Cx coeff(c[static_cast<size_t>(2 * i)], c[static_cast<size_t>(2 * i + 1)]);
            x = add(x, scale(coeff, s.basis[i]));
        }
        x = herm_part(x);
        const double nrm = frob_norm(x);
        if (nrm < 1e-12) continue;
        out.push_back(scale(1.0 / nrm, x));
    }
    return out;
}

bool is_hermitian_closed(const OperatorSubspace& s, double tol) {
    for (const CMat& b : s.basis)
        if (!contains(s, adjoint(b), tol)) return false;
    return true;
}

bool contains(const OperatorSubspace& s, const CMat& m, double tol) {
    if (m.rows != s.d || m.cols != s.d)
        throw Error(ErrorKind::DimensionMismatch, "contains: matrix dimension does not match subspace");
    const CMat res = sub(m, project_onto(s.basis, m));
    return frob_norm(res) <= tol * std::max(1.0, frob_norm(m));
}

} // namespace paradis
