#include "gridrestore/allocate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridrestore/errors.hpp"
#include "gridrestore/simplex.hpp"

namespace gridrestore {

void AllocationProblem::validate() const {
    for (const auto& n : nodes)
        if (!(n.demand > 0.0) || !std::isfinite(n.demand))
            throw ValidationError("allocation node " + std::to_string(raw(n.id)) + " needs positive demand");
    for (const auto& c : crews)
        if (!(c.capacity > 0.0) || !std::isfinite(c.capacity))
            throw ValidationError("allocation crew " + c.id + " needs positive capacity");
    if (!(weights.alpha >= 0.0) || !(weights.beta >= 0.0))
        throw ValidationError("allocation weights must be nonnegative");
}

double AllocationProblem::unit_score(std::size_t i) const {
    const auto& n = nodes[i];
    return (weights.alpha * n.power_kw - weights.beta * n.repair_hours) / n.demand;
}

namespace {

// Per-unit scores that drive the solve; nonpositive entries are excluded.
std::vector<double> effective_scores(const AllocationProblem& p) {
    std::vector<double> s(p.nodes.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = p.unit_score(i);
    if (p.force_service && !s.empty()) {
        const double lowest = *std::min_element(s.begin(), s.end());
        for (auto& v : s) v += 1.0 - lowest;
    }
    return s;
}

void greedy_single_crew(const AllocationProblem& p, const std::vector<double>& score, std::vector<double>& y) {
    std::vector<std::size_t> order(p.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return score[a] > score[b]; });
    double remaining = p.crews.front().capacity;
    for (auto i : order) {
        if (!(score[i] > 0.0) || remaining <= 0.0) break;
        y[i] = std::min(p.nodes[i].demand, remaining);
        remaining -= y[i];
    }
}

void lp_multi_crew(const AllocationProblem& p, const std::vector<double>& score, std::vector<double>& y) {
    const std::size_t K = p.crews.size();
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
        if (score[i] > 0.0) eligible.push_back(i);
    if (eligible.empty()) return;

    const std::size_t nvar = eligible.size() * K;
    CanonicalLp lp;
    lp.objective.resize(nvar);
    auto var = [&](std::size_t e, std::size_t k) { return e * K + k; };
    auto add_row = [&](double rhs) {
        lp.matrix.resize(lp.matrix.size() + nvar, 0.0);
        lp.rhs.push_back(rhs);
        return lp.rhs.size() - 1;
    };
    auto row = [&](std::size_t r, std::size_t v) -> double& { return lp.matrix[r * nvar + v]; };

    for (std::size_t e = 0; e < eligible.size(); ++e)
        for (std::size_t k = 0; k < K; ++k) lp.objective[var(e, k)] = score[eligible[e]];
    for (std::size_t k = 0; k < K; ++k) {
        const auto r = add_row(p.crews[k].capacity);
        for (std::size_t e = 0; e < eligible.size(); ++e) row(r, var(e, k)) = 1.0;
    }
    for (std::size_t k = 1; k < K; ++k)
        for (std::size_t e = 0; e < eligible.size(); ++e) {
            const auto r = add_row(0.0);
            row(r, var(e, k - 1)) = 1.0;
            row(r, var(e, k)) = -1.0;
        }
    for (std::size_t e = 0; e < eligible.size(); ++e)
        for (std::size_t k = 0; k < K; ++k) {
            const auto r = add_row(p.nodes[eligible[e]].demand);
            row(r, var(e, k)) = 1.0;
        }

    const auto sol = solve_canonical_lp(lp);
    for (std::size_t e = 0; e < eligible.size(); ++e) {
        const std::size_t i = eligible[e];
        const double q = p.nodes[i].demand;
        const double tol = 1e-9 * std::max(1.0, q);
        for (std::size_t k = 0; k < K; ++k) {
            double v = sol.x[var(e, k)];
            if (v < tol) v = 0.0;
            if (v > q - tol) v = q;
            y[i * K + k] = v;
        }
    }
}

}  // namespace

AllocationSolution solve_allocation(const AllocationProblem& problem) {
    problem.validate();
    const std::size_t N = problem.nodes.size();
    const std::size_t K = problem.crews.size();

    AllocationSolution sol;
    for (const auto& n : problem.nodes) sol.nodes.push_back(n.id);
    for (const auto& c : problem.crews) sol.crews.push_back(c.id);
    sol.y.assign(N * K, 0.0);
    if (N == 0 || K == 0) return sol;

    const auto score = effective_scores(problem);
    if (K == 1)
        greedy_single_crew(problem, score, sol.y);
    else
        lp_multi_crew(problem, score, sol.y);

    for (std::size_t i = 0; i < N; ++i) {
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            total += sol.y[i * K + k];
            sol.objective += problem.unit_score(i) * sol.y[i * K + k];
        }
        if (total > 0.0) sol.selected.push_back(problem.nodes[i].id);
    }
    return sol;
}

IterationSelection select_iteration_nodes(const AllocationSolution& solution) {
    IterationSelection sel;
    const std::size_t K = solution.crews.size();
    sel.per_crew.resize(K);
    for (std::size_t i = 0; i < solution.nodes.size(); ++i) {
        double served = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double v = solution.at(i, k);
            if (v > 0.0) sel.per_crew[k][solution.nodes[i]] = v;
            served = std::max(served, v);
        }
        if (served > 0.0) {
            sel.nodes.push_back(solution.nodes[i]);
            sel.served[solution.nodes[i]] = served;
        }
    }
    return sel;
}

}  // namespace gridrestore
