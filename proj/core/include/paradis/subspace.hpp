#pragma once

// Operator subspaces S of B(H_d) and Kraus channels. A subspace is held
// as an orthonormal basis under the Hilbert-Schmidt inner product; the
// generators that produced it are retained untouched.

#include <vector>

#include "paradis/linalg.hpp"

namespace paradis {

struct OperatorSubspace {
    int d = 0;
    std::vector<CMat> basis;      // HS-orthonormal, linearly independent
    std::vector<CMat> generators; // raw input, retained

    int dim() const { return static_cast<int>(basis.size()); }
};

struct KrausChannel {
    int dim_in = 0;
    int dim_out = 0;
    std::vector<CMat> kraus;

    // Validates equal shapes and completeness |sum K^dagger K - I|_F <= 1e-9.
    static KrausChannel from_kraus(std::vector<CMat> kraus);
};

// Span of the given d x d generators via modified Gram-Schmidt; a
// generator whose residual falls below dep_tol * max(1, |g|_F) is
// dropped as dependent. AllZeroGenerators if nothing survives.
OperatorSubspace from_generators(const std::vector<CMat>& generators, double dep_tol = 1e-9);

// S_{E,F} = span{ E_j^dagger F_k }, the discrimination subspace of a
// channel pair with matching dimensions.
OperatorSubspace from_channel_pair(const KrausChannel& e, const KrausChannel& f);

// All n-fold Kronecker products of basis elements, dim(s)^n of them in
// lexicographic order (first factor slowest). CapExceeded when the count
// passes cap.
std::vector<CMat> tensor_power_generators(const OperatorSubspace& s, int n, int cap = 4096);

// Real-linear basis of { X in S : X = X^dagger }, each element unit
// Frobenius norm; empty when S contains no Hermitian element but 0.
std::vector<CMat> hermitian_elements(const OperatorSubspace& s);

// True when the adjoint of every basis element lies back in S.
bool is_hermitian_closed(const OperatorSubspace& s, double tol = 1e-9);

// Membership test: |m - Proj_S(m)|_F <= tol * max(1, |m|_F).
bool contains(const OperatorSubspace& s, const CMat& m, double tol = 1e-9);

} // namespace paradis
