#include "gridrestore/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridrestore/errors.hpp"

namespace gridrestore {

LpSolution solve_canonical_lp(const CanonicalLp& lp) {
    const std::size_t n = lp.objective.size();
    const std::size_t m = lp.rhs.size();
    if (lp.matrix.size() != n * m) throw ValidationError("LP matrix shape does not match objective and rhs");
    for (double b : lp.rhs)
        if (b < 0.0) throw InfeasibleError("canonical LP needs a nonnegative right-hand side");

    // Tableau columns: n structural, m slack, then rhs. Last row holds reduced costs.
    const std::size_t width = n + m + 1;
    std::vector<double> t((m + 1) * width, 0.0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };
    std::vector<std::size_t> basis(m);
    double scale = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            at(r, c) = lp.matrix[r * n + c];
            scale = std::max(scale, std::abs(at(r, c)));
        }
        at(r, n + r) = 1.0;
        at(r, width - 1) = lp.rhs[r];
        basis[r] = n + r;
    }
    for (std::size_t c = 0; c < n; ++c) {
        at(m, c) = -lp.objective[c];
        scale = std::max(scale, std::abs(lp.objective[c]));
    }
    const double eps = 1e-12 * scale;

    for (std::size_t iter = 0;; ++iter) {
        if (iter > 100000) throw SolverError("simplex iteration limit reached");
        // Bland: lowest-index improving column.
        std::size_t enter = width;
        for (std::size_t c = 0; c + 1 < width; ++c)
            if (at(m, c) < -eps) {
                enter = c;
                break;
            }
        if (enter == width) break;

        std::size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            const double a = at(r, enter);
            if (a <= eps) continue;
            const double ratio = at(r, width - 1) / a;
            if (ratio < best || (ratio == best && basis[r] < basis[leave])) {
                best = ratio;
                leave = r;
            }
        }
        if (leave == m) throw SolverError("LP is unbounded");

        const double pivot = at(leave, enter);
        for (std::size_t c = 0; c < width; ++c) at(leave, c) /= pivot;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == leave) continue;
            const double f = at(r, enter);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
        }
        basis[leave] = enter;
    }

    LpSolution sol;
    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) sol.x[basis[r]] = std::max(0.0, at(r, width - 1));
    for (std::size_t c = 0; c < n; ++c) sol.objective += lp.objective[c] * sol.x[c];
    return sol;
}

}  // namespace gridrestore
