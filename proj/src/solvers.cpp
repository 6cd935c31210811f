#include "actnet/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace actnet {

namespace {

double backup(const TabularMDP& mdp, std::size_t x, std::size_t a, const VFunction& v) {
    const auto& row = mdp.transitions[x][a];
    double expect = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y) expect += row[y] * v[y];
    return mdp.rewards[x][a] + mdp.discount * expect;
}

// Sweep change threshold that guarantees the requested residual.
double stopping_threshold(double tolerance, double gamma) {
    if (gamma == 0.0) return std::numeric_limits<double>::infinity();
    return tolerance * (1.0 - gamma) / (2.0 * gamma);
}

}  // namespace

VFunction state_values(const QFunction& q) {
    VFunction v(q.state_count());
    for (std::size_t x = 0; x < v.size(); ++x) v[x] = *std::max_element(q.values[x].begin(), q.values[x].end());
    return v;
}

double bellman_optimality_residual(const TabularMDP& mdp, const QFunction& q) {
    const VFunction v = state_values(q);
    double residual = 0.0;
    for (std::size_t x = 0; x < mdp.state_count(); ++x)
        for (std::size_t a = 0; a < mdp.action_count(x); ++a)
            residual = std::max(residual, std::abs(backup(mdp, x, a, v) - q(x, a)));
    return residual;
}

QSolution value_iteration(const TabularMDP& mdp, const SolverSettings& settings) {
    require_valid(mdp);
    if (!(settings.tolerance > 0.0) || settings.max_iterations < 1)
        throw std::invalid_argument("value_iteration: tolerance must be > 0 and max_iterations >= 1");

    QSolution sol;
    sol.q.values = mdp.rewards;
    for (auto& row : sol.q.values) std::fill(row.begin(), row.end(), 0.0);
    const double threshold = stopping_threshold(settings.tolerance, mdp.discount);

    QFunction next = sol.q;
    double change = std::numeric_limits<double>::infinity();
    while (sol.iterations < settings.max_iterations) {
        const VFunction v = state_values(sol.q);
        change = 0.0;
        for (std::size_t x = 0; x < mdp.state_count(); ++x)
            for (std::size_t a = 0; a < mdp.action_count(x); ++a) {
                next.values[x][a] = backup(mdp, x, a, v);
                change = std::max(change, std::abs(next.values[x][a] - sol.q(x, a)));
            }
        std::swap(sol.q, next);
        ++sol.iterations;
        if (change <= threshold) break;
    }
    sol.residual = bellman_optimality_residual(mdp, sol.q);
    if (sol.residual > settings.tolerance)
        throw ConvergenceError("value_iteration did not converge: residual " + std::to_string(sol.residual),
                               sol.residual, sol.iterations);
    return sol;
}

Policy greedy_policy(const QFunction& q) {
    Policy pi(q.state_count());
    for (std::size_t x = 0; x < pi.size(); ++x) pi[x] = argmax_lowest(q.row(x));
    return pi;
}

Policy greedy_policy(const QFunction& q, const ActionSubset& subset) {
    if (subset.state_count() != q.state_count())
        throw std::invalid_argument("greedy_policy: subset covers " + std::to_string(subset.state_count()) +
                                    " states, Q covers " + std::to_string(q.state_count()));
    Policy pi(q.state_count());
    for (std::size_t x = 0; x < pi.size(); ++x) {
        const auto& actions = subset.actions(x);
        if (actions.empty()) throw std::invalid_argument("greedy_policy: empty subset at state " + std::to_string(x));
        std::size_t best = actions.front();
        for (std::size_t a : actions) {
            if (a >= q.values[x].size())
                throw std::invalid_argument("greedy_policy: action " + std::to_string(a) +
                                            " not admissible at state " + std::to_string(x));
            if (q(x, a) > q(x, best)) best = a;
        }
        pi[x] = best;
    }
    return pi;
}

VSolution policy_evaluation(const TabularMDP& mdp, const Policy& policy, const SolverSettings& settings) {
    require_valid(mdp);
    if (policy.size() != mdp.state_count())
        throw std::invalid_argument("policy_evaluation: policy is not total on states");
    for (std::size_t x = 0; x < policy.size(); ++x)
        if (policy[x] >= mdp.action_count(x))
            throw std::invalid_argument("policy_evaluation: inadmissible action at state " + std::to_string(x));

    const double threshold = stopping_threshold(settings.tolerance, mdp.discount);
    VSolution sol;
    sol.v.assign(mdp.state_count(), 0.0);
    VFunction next(sol.v.size());
    while (sol.iterations < settings.max_iterations) {
        double change = 0.0;
        for (std::size_t x = 0; x < next.size(); ++x) {
            next[x] = backup(mdp, x, policy[x], sol.v);
            change = std::max(change, std::abs(next[x] - sol.v[x]));
        }
        std::swap(sol.v, next);
        ++sol.iterations;
        if (change <= threshold) break;
    }
    sol.residual = 0.0;
    for (std::size_t x = 0; x < sol.v.size(); ++x)
        sol.residual = std::max(sol.residual, std::abs(backup(mdp, x, policy[x], sol.v) - sol.v[x]));
    if (sol.residual > settings.tolerance)
        throw ConvergenceError("policy_evaluation did not converge: residual " + std::to_string(sol.residual),
                               sol.residual, sol.iterations);
    return sol;
}

std::vector<double> state_regret(const QFunction& qstar, const ActionSubset& subset) {
    const Policy restricted = greedy_policy(qstar, subset);
    std::vector<double> regret(qstar.state_count());
    for (std::size_t x = 0; x < regret.size(); ++x) {
        const double best = *std::max_element(qstar.values[x].begin(), qstar.values[x].end());
        regret[x] = best - qstar(x, restricted[x]);
    }
    return regret;
}

PerformanceDifference performance_difference(const TabularMDP& mdp, const ActionSubset& subset,
                                             const SolverSettings& settings) {
    const QSolution qs = value_iteration(mdp, settings);
    PerformanceDifference out;
    out.regret = state_regret(qs.q, subset);
    out.policy = greedy_policy(qs.q, subset);
    const VSolution vpi = policy_evaluation(mdp, out.policy, settings);
    const VFunction vstar = state_values(qs.q);
    out.value_gap.resize(vstar.size());
    for (std::size_t x = 0; x < vstar.size(); ++x) out.value_gap[x] = vstar[x] - vpi.v[x];
    out.bound_rhs = *std::max_element(out.regret.begin(), out.regret.end()) / (1.0 - mdp.discount);
    return out;
}

std::vector<double> discounted_visitation(const TabularMDP& mdp, const Policy& policy, std::size_t start) {
    require_valid(mdp);
    const std::size_t n = mdp.state_count();
    if (start >= n) throw std::invalid_argument("discounted_visitation: start state out of range");
    std::vector<double> occupancy(n, 0.0), dist(n, 0.0), next(n);
    dist[start] = 1.0;
    const double gamma = mdp.discount;
    double weight = 1.0;  // gamma^t
    while (weight >= 1e-12) {
        for (std::size_t x = 0; x < n; ++x) occupancy[x] += weight * dist[x];
        if (gamma == 0.0) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t x = 0; x < n; ++x) {
            if (dist[x] == 0.0) continue;
            const auto& row = mdp.transitions[x][policy[x]];
            for (std::size_t y = 0; y < n; ++y) next[y] += dist[x] * row[y];
        }
        std::swap(dist, next);
        weight *= gamma;
    }
    for (auto& d : occupancy) d *= (1.0 - gamma);
    return occupancy;
}

}  // namespace actnet
