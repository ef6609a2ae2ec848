#pragma once

// Feasibility side of the discrimination question: either a density
// operator orthogonal to every constraint exists (witness), or a
// positive definite combination of the constraints certifies that none
// can (certificate). The two cannot coexist; INDETERMINATE means the
// solver hit its iteration budget at the numerical boundary.

#include <cstdint>
#include <optional>
#include <vector>

#include "paradis/linalg.hpp"
#include "paradis/subspace.hpp"

namespace paradis {

enum class FeasibilityStatus { Witness, Certificate, Indeterminate };

const char* feasibility_status_name(FeasibilityStatus s) noexcept;

struct FeasibilityOutcome {
    FeasibilityStatus status = FeasibilityStatus::Indeterminate;
    std::optional<CMat> witness;                     // density operator, orthogonal to constraints
    std::optional<std::vector<double>> certificate;  // combination over the split Hermitian list
    double certificate_lambda_min = 0.0;
    double projection_residual = 0.0; // last affine residual of the PSD iterate
    double dual_supremum = 0.0;       // best lambda_min reached by the ascent
    int iterations = 0;
};

struct FeasibilityOptions {
    double tol = 1e-7;      // witness acceptance residual
    int max_iter = 20000;   // alternating projection budget
    int starts = 16;        // random multi-starts for the ascent
    std::uint64_t seed = 0x5EED;
    int dim_cap = 1024;     // largest constraint dimension accepted
};

// Hermitian constraint pairs (m + m^dagger)/2 and i(m - m^dagger)/2 for
// every input, near-zero parts dropped, each normalized to unit
// Frobenius norm. tr(rho m) = 0 for Hermitian rho iff rho is orthogonal
// to both parts.
std::vector<CMat> hermitian_split(const std::vector<CMat>& constraints);

struct PdSearchResult {
    bool found = false;
    std::vector<double> coefficients; // unit Euclidean norm
    double lambda_min = 0.0;          // of the returned combination
};

// Maximizes lambda_min(sum c_i h_i) over the unit sphere by projected
// supergradient ascent (step 1/sqrt(t)) from axis, identity-projection
// and seeded random starts. Success means lambda_min > 1e-9.
PdSearchResult pd_in_span(const std::vector<CMat>& hermitians,
                          const FeasibilityOptions& opts = {});

// Searches for a density operator rho with tr(rho m_i) = 0 for all i by
// Dykstra alternating projections between the PSD cone and the affine
// set, racing the certificate search above.
FeasibilityOutcome density_in_complement(const std::vector<CMat>& constraints,
                                         const FeasibilityOptions& opts = {});

// Decision for Hermitian-closed subspaces, where one use settles the
// question: Witness = distinguishable with the found input, Certificate
// = never distinguishable. NotHermitianClosed if s is not.
FeasibilityOutcome hermitian_space_decision(const OperatorSubspace& s,
                                            const FeasibilityOptions& opts = {});

struct ParallelCheckRow {
    int copies = 0;
    FeasibilityOutcome outcome;
};

// Runs density_in_complement on the tensor powers of s for n = 1..n_max,
// stopping early at the first witness.
std::vector<ParallelCheckRow> parallel_check(const OperatorSubspace& s, int n_max,
                                             const FeasibilityOptions& opts = {});

} // namespace paradis
