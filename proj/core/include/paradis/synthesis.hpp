#pragma once

// Realizes an operator subspace as a concrete channel pair and applies
// parallel uses of a channel to a joint input. Each basis element is
// absorbed into a pair of isometries into a doubled output space, and
// the two channels select matching isometries with a classical flag, so
// the cross products of their Kraus operators span exactly the original
// subspace (up to scale).

#include <vector>

#include "paradis/linalg.hpp"
#include "paradis/subspace.hpp"

namespace paradis {

struct ChannelPair {
    KrausChannel e;
    KrausChannel f;
    // Largest singular value of each basis element before normalization;
    // adj(E_j) F_j equals basis[j] / (scale_factors[j] * kraus count).
    std::vector<double> scale_factors;
};

// Channels with dim_in = s.d and dim_out = 2 * s.d * s.dim() whose Kraus
// cross products span s.
ChannelPair channels_from_subspace(const OperatorSubspace& s);

// Purification of rho as a column vector on ancilla (x) system, laid out
// ancilla-major, with <phi| (I (x) A) |phi> = tr(A rho) for every A.
// Rejects inputs that are not density operators.
CMat discrimination_input(const CMat& rho, double tol = 1e-9);

// (I (x) ch^{(x)n}) applied to rho_in. The trailing n tensor slots of
// rho_in carry ch's input dimension; whatever leading factor remains is
// treated as an untouched ancilla. CapExceeded guards output size.
CMat apply_parallel(const KrausChannel& ch, int n, const CMat& rho_in, int dim_cap = 4096);

// Re tr(rho_e rho_f); zero means the outputs are perfectly discriminated.
double output_overlap(const CMat& rho_e, const CMat& rho_f);

} // namespace paradis
