#pragma once

#include <span>
#include <vector>

namespace gridrestore {

/// Dense LP in canonical form: maximize c.x subject to A x <= b, x >= 0,
/// with b >= 0 so the origin is feasible. A is row-major (rows x c.size()).
struct CanonicalLp {
    std::vector<double> objective;
    std::vector<double> matrix;
    std::vector<double> rhs;
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
};

/// Primal simplex with Bland's rule. Throws InfeasibleError on a negative
/// rhs and SolverError if the LP is unbounded.
LpSolution solve_canonical_lp(const CanonicalLp& lp);

}  // namespace gridrestore
