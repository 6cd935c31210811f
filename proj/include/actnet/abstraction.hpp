#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "actnet/mdp.hpp"
#include "actnet/solvers.hpp"

namespace actnet {

/// psi: ground state -> abstract state, with per-ground-state weights that
/// sum to 1 inside every abstract state.
struct AggregationMap {
    std::vector<std::size_t> psi;
    std::vector<double> weights;

    /// Uniform weights within every abstract state.
    static AggregationMap uniform(std::vector<std::size_t> psi);
    static AggregationMap identity(std::size_t states);

    std::size_t abstract_state_count() const;
    /// ground states mapped to each abstract state, ascending
    std::vector<std::vector<std::size_t>> preimages() const;

    friend bool operator==(const AggregationMap&, const AggregationMap&) = default;
};

/// Throws std::invalid_argument when psi is not onto 0..k-1, weights are not
/// per-block distributions (1e-9), or a ground state's action count differs
/// from the others in its block.
void validate_map(const AggregationMap& map, const TabularMDP& ground);

/// Weighted-average abstract model:
///   P(x'|x,a) = sum_{g in psi^-1(x)} w(g) sum_{g' in psi^-1(x')} P_G(g'|g,a)
///   R(x,a)    = sum_{g in psi^-1(x)} w(g) R_G(g,a)
TabularMDP aggregate(const TabularMDP& ground, const AggregationMap& map);

struct Dispersion {
    std::vector<double> per_state;  // nu_x
    double global = 0.0;            // nu
};

/// nu_x = max over (g, a), (g', a') in Z_x of |Q_G(g, a) - Q_G(g', a')|, where
/// Z_x pairs every ground state of block x with every action.
Dispersion dispersion(const QFunction& ground_q, const AggregationMap& map);

struct AbstractionCheck {
    /// Q_G(g, a*_G) - Q_G(g, a*_A) per ground state, a*_A the abstract greedy
    /// action restricted to the subset
    std::vector<double> suboptimality;
    /// 2 nu / (1 - gamma) + regret(psi(g)) per ground state
    std::vector<double> bound;
    std::vector<double> margin;  // bound - suboptimality
    double lhs = 0.0;            // max_g suboptimality
    double rhs = 0.0;            // 2 nu / (1 - gamma) + max_x regret(x)
    double nu = 0.0;
    /// max_{g,a} |Q_G(g, a) - Q(psi(g), a)| against nu / (1 - gamma)
    double lemma10_max_gap = 0.0;
    double lemma10_bound = 0.0;
    bool lemma10_holds = true;
    bool lemma11_holds = true;
    QFunction ground_q;
    QFunction abstract_q;
};

AbstractionCheck abstraction_suboptimality_check(const TabularMDP& ground, const AggregationMap& map,
                                                 const ActionSubset& subset, const SolverSettings& settings = {});

// JSON {psi: [...], weights: [...]}
std::string to_json(const AggregationMap& map);
AggregationMap aggregation_map_from_json(const std::string& text);

}  // namespace actnet
