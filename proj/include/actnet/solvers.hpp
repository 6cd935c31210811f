#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "actnet/mdp.hpp"

namespace actnet {

struct SolverSettings {
    double tolerance = 1e-10;  // sup-norm Bellman residual target
    std::size_t max_iterations = 1'000'000;
};

/// Raised when an iterative solver exhausts max_iterations.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, std::size_t iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
    double residual() const { return residual_; }
    std::size_t iterations() const { return iterations_; }

private:
    double residual_;
    std::size_t iterations_;
};

struct QSolution {
    QFunction q;
    std::size_t iterations = 0;
    double residual = 0.0;  // sup-norm Bellman optimality residual of q
};

struct VSolution {
    VFunction v;
    std::size_t iterations = 0;
    double residual = 0.0;
};

QSolution value_iteration(const TabularMDP& mdp, const SolverSettings& settings = {});

/// Sup-norm of T*Q - Q.
double bellman_optimality_residual(const TabularMDP& mdp, const QFunction& q);

/// Greedy policy over the full action space (ties -> lowest index).
Policy greedy_policy(const QFunction& q);

/// Greedy policy restricted to `subset`. Throws naming the first state with an
/// empty subset.
Policy greedy_policy(const QFunction& q, const ActionSubset& subset);

VSolution policy_evaluation(const TabularMDP& mdp, const Policy& policy,
                            const SolverSettings& settings = {});

/// V*(x) = max_a Q(x, a)
VFunction state_values(const QFunction& q);

/// regret(x) = max over all actions minus max over subset(x).
std::vector<double> state_regret(const QFunction& qstar, const ActionSubset& subset);

struct PerformanceDifference {
    std::vector<double> value_gap;  // V*(x) - V^pi(x) for every start state x
    std::vector<double> regret;     // per-state regret of the subset
    double bound_rhs = 0.0;         // max_x regret(x) / (1 - gamma)
    Policy policy;                  // restricted greedy policy
};

PerformanceDifference performance_difference(const TabularMDP& mdp, const ActionSubset& subset,
                                             const SolverSettings& settings = {});

/// d^{pi,x0}(x) = (1 - gamma) sum_t gamma^t Pr(x_t = x), truncated once
/// gamma^t < 1e-12.
std::vector<double> discounted_visitation(const TabularMDP& mdp, const Policy& policy,
                                          std::size_t start);

}  // namespace actnet
