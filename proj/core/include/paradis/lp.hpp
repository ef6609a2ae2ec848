#pragma once

// Phase-1 simplex for the feasibility problem A x = b, x >= 0. Dantzig
// entering with a lexicographic ratio test, so runs are deterministic and
// no basis ever repeats.

#include <optional>
#include <vector>

namespace paradis {

struct LpResult {
    bool feasible = false;
    double phase1_objective = 0.0;     // artificial mass, in input equation units
    double scaled_infeasibility = 0.0; // same mass in row-normalized units
    std::vector<double> x;             // present when feasible
};

// rows: dense matrix rows of A; b: right hand side, same length as rows.
// Feasible when the phase-1 optimum is <= obj_tol (default 1e-9).
LpResult phase1_feasible(const std::vector<std::vector<double>>& rows,
                         const std::vector<double>& b,
                         double obj_tol = 1e-9);

} // namespace paradis
