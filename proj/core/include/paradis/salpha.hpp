#pragma once

// The one-parameter family S_alpha = span{ |0><0| + e^{i alpha}|1><1|,
//                                          |1><1| + e^{i alpha}|2><2| }
// on a qutrit, alpha in [pi/2, pi]. A diagonal witness exists iff any
// witness exists, and permutation symmetry collapses the diagonal
// orthogonality conditions on n copies to n+1 equations over the
// (n+1)(n+2)/2 occupation-count variables p_{a,b,c}, a+b+c = n.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paradis/linalg.hpp"

namespace paradis {

struct SAlphaSystem {
    int n = 0;
    double alpha = 0.0;
    bool reduced = true;               // reduced occupation form vs full diagonal form
    std::vector<std::vector<Cx>> rows; // one equation per row
};

// The two generators of S_alpha as 3 x 3 matrices.
std::vector<CMat> salpha_generators(double alpha);

int salpha_var_count(int n);

struct Occupation {
    int a = 0, b = 0, c = 0;
};

// Bijection between occupation triples and variable columns; the order
// is a descending, then b descending, so (n,0,0) comes first.
int salpha_var_index(int n, int a, int b, int c);
Occupation salpha_var_abc(int n, int idx);

// Reduced system, n+1 complex equations indexed l = 0..n:
//   sum_r e^{i r alpha} sum_s C(2s+r-l, s) p_{n-r-s, 2s+r-l, l-s} = 0,
// terms with a negative index or an invalid binomial absent.
SAlphaSystem build_reduced_system(int n, double alpha);

// Unreduced diagonal system: 2^n equations (one per choice of generator
// per slot) over the 3^n diagonal entries, first slot the most
// significant ternary digit. Capped at n <= 8.
SAlphaSystem build_full_diagonal_system(int n, double alpha);

struct SAlphaSolveResult {
    bool feasible = false;
    double phase1_objective = 0.0;     // artificial mass, equation units
    double scaled_infeasibility = 0.0; // same mass over row-normalized equations
    std::vector<double> p; // variable order of the system; present when feasible
};

// Nonnegative solution of the system with the normalization sum p = 1
// (equivalently unit trace of the lifted diagonal state), by phase-1
// simplex. Feasible when the artificial mass is at most obj_tol in the
// units of the system rows.
SAlphaSolveResult solve_nonneg(const SAlphaSystem& system, double obj_tol = 1e-9);

// Diagonal of the lifted state on n qutrits: entry for the ternary
// string k is (a! b! c!/n!) p_{a,b,c} with (a,b,c) the digit counts of
// k, rescaled to unit sum. NegativeEntry if p dips below -1e-12.
std::vector<double> lift_diagonal(const std::vector<double>& p, int n);

// Same lift as a dense diagonal density matrix; capped at 3^n <= 1024.
CMat lift_solution(const std::vector<double>& p, int n);

struct ClosedFormReport {
    std::vector<double> p;
    double max_residual = 0.0; // against the reduced system
    double min_entry = 0.0;
};

// Closed-form solutions for n = 3 and n = 4 evaluated at alpha:
//   n = 3: p_300 = p_003 = p_120 = p_021 = sin a, p_210 = p_012 = -sin 2a,
//          p_111 = -2 sin 2a, p_102 = p_201 = sin 3a, p_030 = 0
//          (entrywise nonnegative from 2pi/3 on);
//   n = 4: p_400 = p_004 = p_040 = 1, p_022 = p_220 = 2,
//          p_013 = p_310 = p_031 = p_130 = -2 cos a,
//          p_112 = p_211 = 2 cos 3a, p_202 = -2 cos 4a, rest 0
//          (entrywise nonnegative from 5pi/8 on).
ClosedFormReport closed_form_solution(int n, double alpha);

struct ThresholdPoint {
    double alpha = 0.0;
    bool feasible = false;
    double phase1_objective = 0.0;
    bool boundary_uncertain = false;
};

struct ThresholdReport {
    int n = 0;
    std::vector<ThresholdPoint> profile;
    bool monotone = false;
    std::optional<double> alpha_star; // absent when the profile is not monotone
};

// Scans alpha over [pi/2, pi] on a grid, then bisects the transition to
// refine_tol. A non-monotone profile aborts the bisection and reports
// the raw profile only. jobs > 1 splits the grid across threads; the
// result does not depend on jobs. Capped at n <= 18.
ThresholdReport threshold_alpha(int n, double grid_step = 1e-3, double refine_tol = 1e-6,
                                int jobs = 1);

struct CounterexampleRow {
    int n = 0;
    bool reduced_infeasible = false;
    std::optional<bool> full_infeasible;    // run for n <= 8
    std::optional<std::string> sdp_outcome; // run for n <= 3
    bool consistent = false;                // nothing found a witness
};

// At alpha = pi/2 no finite number of copies admits a witness; this
// cross-checks the reduced LP, the full diagonal LP and the general
// positive-semidefinite search against that expectation.
std::vector<CounterexampleRow> counterexample_check(int n_max);

} // namespace paradis
