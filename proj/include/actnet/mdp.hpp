#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "actnet/rng.hpp"

namespace actnet {

/// Finite MDP with explicit state-dependent action sets. Actions are dense
/// indices 0..action_count(x)-1 at each state.
struct TabularMDP {
    /// transitions[x][a][y] = P(y | x, a)
    std::vector<std::vector<std::vector<double>>> transitions;
    /// rewards[x][a] = R(x, a)
    std::vector<std::vector<double>> rewards;
    double discount = 0.0;
    std::size_t initial_state = 0;

    std::size_t state_count() const { return rewards.size(); }
    std::size_t action_count(std::size_t x) const { return rewards.at(x).size(); }
    std::vector<std::size_t> actions_per_state() const;

    friend bool operator==(const TabularMDP&, const TabularMDP&) = default;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_mdp(const TabularMDP& mdp);

/// Throws std::invalid_argument listing every violation.
void require_valid(const TabularMDP& mdp);

/// Optimal or evaluated state-action values, ragged by state.
struct QFunction {
    std::vector<std::vector<double>> values;

    std::size_t state_count() const { return values.size(); }
    double operator()(std::size_t x, std::size_t a) const { return values[x][a]; }
    std::span<const double> row(std::size_t x) const { return values[x]; }

    friend bool operator==(const QFunction&, const QFunction&) = default;
};

using VFunction = std::vector<double>;

/// Deterministic stationary decision rule: state -> action index.
using Policy = std::vector<std::size_t>;

/// Per-state retained actions, kept sorted and deduplicated.
class ActionSubset {
public:
    ActionSubset() = default;
    explicit ActionSubset(std::size_t state_count) : per_state_(state_count) {}

    static ActionSubset full(std::span<const std::size_t> actions_per_state);
    static ActionSubset from_lists(std::vector<std::vector<std::size_t>> lists);

    void insert(std::size_t x, std::size_t a);
    bool contains(std::size_t x, std::size_t a) const;

    std::size_t state_count() const { return per_state_.size(); }
    const std::vector<std::size_t>& actions(std::size_t x) const { return per_state_.at(x); }
    std::size_t size(std::size_t x) const { return per_state_.at(x).size(); }
    std::size_t max_size() const;
    std::size_t total_size() const;
    bool empty_somewhere() const;

    /// True when every retained action is admissible at its state.
    bool admissible_for(std::span<const std::size_t> actions_per_state) const;

    friend bool operator==(const ActionSubset&, const ActionSubset&) = default;

private:
    std::vector<std::vector<std::size_t>> per_state_;
};

/// Argmax over a row with ties broken toward the lowest index.
std::size_t argmax_lowest(std::span<const double> row);

/// Random MDP with Dirichlet-like rows and uniform rewards in [0, 1).
TabularMDP random_tabular_mdp(std::size_t states, std::span<const std::size_t> actions_per_state,
                              double discount, Engine& engine);

// JSON {states, actions_per_state, transitions, rewards, discount, initial_state}
std::string to_json(const TabularMDP& mdp);
TabularMDP mdp_from_json(const std::string& text);

}  // namespace actnet
