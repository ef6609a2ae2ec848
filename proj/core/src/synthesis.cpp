#include "paradis/synthesis.hpp"

#include <cmath>

#include "paradis/error.hpp"

namespace paradis {

namespace {

constexpr double kDensityTol = 1e-9;

// Isometry pair (u, v) from H_d into H_{2d} with adj(u) v equal to a,
// which must have spectral norm at most 1. Singular triple k occupies
// the two-dimensional block spanned by rows 2k and 2k+1.
void isometry_pair(const CMat& a, CMat* u, CMat* v) {
    const int d = a.rows;
    const SvdDecomposition sv = svd(a);
    *u = CMat::zeros(2 * d, d);
    *v = CMat::zeros(2 * d, d);
    for (int k = 0; k < d; ++k) {
        const double s = std::min(1.0, sv.sigma[k]);
        const double t = std::sqrt(std::max(0.0, 1.0 - s * s));
        for (int c = 0; c < d; ++c) {
            (*u)(2 * k, c) = std::conj(sv.u(c, k));
            (*v)(2 * k, c) = s * std::conj(sv.v(c, k));
            (*v)(2 * k + 1, c) = t * std::conj(sv.v(c, k));
        }
    }
}

} // namespace

ChannelPair channels_from_subspace(const OperatorSubspace& s) {
    const int n = s.dim();
    if (n == 0) throw Error(ErrorKind::AllZeroGenerators, "subspace has no basis");
    ChannelPair out;
    out.scale_factors.reserve(n);
    std::vector<CMat> ek, fk;
    const double root = std::sqrt(double(n));
    for (int j = 0; j < n; ++j) {
        const double smax = spectral_norm(s.basis[j]);
        if (smax <= 0.0) throw Error(ErrorKind::AllZeroGenerators, "zero basis element");
        out.scale_factors.push_back(smax);
        const CMat normalized = scale(Cx(1.0 / smax, 0.0), s.basis[j]);
        CMat u, v;
        isometry_pair(normalized, &u, &v);
        // Flag slot |j> marks which isometry fired; cross terms between
        // different flags vanish, so adj(E_i) F_j = delta_ij a_j / n.
        CMat flag = CMat::zeros(n, 1);
        flag(j, 0) = Cx(1.0 / root, 0.0);
        ek.push_back(kron(u, flag));
        fk.push_back(kron(v, flag));
    }
    out.e = KrausChannel::from_kraus(ek);
    out.f = KrausChannel::from_kraus(fk);
    return out;
}

CMat discrimination_input(const CMat& rho, double tol) {
    if (!rho.square()) throw Error(ErrorKind::NotDensityOperator, "density operator must be square");
    const int d = rho.rows;
    EigDecomposition ed;
    try {
        ed = eigh(rho);
    } catch (const Error&) {
        throw Error(ErrorKind::NotDensityOperator, "density operator must be Hermitian");
    }
    const double top = std::max(1.0, std::abs(ed.values.back()));
    if (ed.values.front() < -tol * top)
        throw Error(ErrorKind::NotDensityOperator, "density operator has a negative eigenvalue");
    double tr = 0.0;
    for (double v : ed.values) tr += v;
    if (std::abs(tr - 1.0) > 100 * tol) throw Error(ErrorKind::NotDensityOperator, "density operator trace is not 1");

    CMat x = CMat::zeros(d, d); // Hermitian square root
    for (int k = 0; k < d; ++k) {
        if (ed.values[k] <= 0.0) continue;
        const double r = std::sqrt(ed.values[k]);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) x(i, j) += r * ed.vectors(i, k) * std::conj(ed.vectors(j, k));
    }
    // phi[i * d + q] = x(q, i): tracing the ancilla index i reproduces rho.
    CMat phi = CMat::zeros(d * d, 1);
    for (int i = 0; i < d; ++i)
        for (int q = 0; q < d; ++q) phi(i * d + q, 0) = x(q, i);
    return phi;
}

CMat apply_parallel(const KrausChannel& ch, int n, const CMat& rho_in, int dim_cap) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one use");
    if (!rho_in.square()) throw Error(ErrorKind::DimensionMismatch, "input state must be square");
    double din_pow = 1.0, dout_pow = 1.0, tuples = 1.0;
    for (int k = 0; k < n; ++k) {
        din_pow *= ch.dim_in;
        dout_pow *= ch.dim_out;
        tuples *= static_cast<double>(ch.kraus.size());
        if (dout_pow > dim_cap || tuples > 65536.0)
            throw Error(ErrorKind::CapExceeded, "parallel application exceeds the size cap");
    }
    const int din_n = static_cast<int>(din_pow);
    const int dout_n = static_cast<int>(dout_pow);
    if (rho_in.rows % din_n != 0)
        throw Error(ErrorKind::DimensionMismatch, "input state does not factor over the channel input");
    const int anc = rho_in.rows / din_n;
    if (static_cast<double>(anc) * dout_pow > dim_cap)
        throw Error(ErrorKind::CapExceeded, "parallel application exceeds the size cap");

    const CMat ianc = CMat::identity(anc);
    CMat acc = CMat::zeros(anc * dout_n, anc * dout_n);
    const int nk = static_cast<int>(ch.kraus.size());
    std::vector<int> tuple(n, 0);
    while (true) {
        CMat k = ch.kraus[tuple[0]];
        for (int slot = 1; slot < n; ++slot) k = kron(k, ch.kraus[tuple[slot]]);
        const CMat m = anc == 1 ? k : kron(ianc, k);
        acc = add(acc, matmul(matmul(m, rho_in), adjoint(m)));
        int slot = n - 1;
        while (slot >= 0 && ++tuple[slot] == nk) tuple[slot--] = 0;
        if (slot < 0) break;
    }
    return acc;
}

double output_overlap(const CMat& rho_e, const CMat& rho_f) {
    if (!rho_e.square() || !rho_f.square() || rho_e.rows != rho_f.rows)
        throw Error(ErrorKind::DimensionMismatch, "output states must share a dimension");
    return std::real(hs_inner(rho_e, rho_f));
}

} // namespace paradis
