#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "actnet/family.hpp"
#include "actnet/mdp.hpp"
#include "actnet/rng.hpp"
#include "actnet/solvers.hpp"
#include "actnet/stats.hpp"

namespace actnet {

struct SelectionDraw {
    EnvironmentParameter parameter;
    /// Action added at every state for this draw.
    std::vector<std::size_t> actions;
    /// ||phi(x, chosen) - phi(x, exact argmax)|| per state; empty when the
    /// family cannot audit (no feature map or no exact Q*).
    std::vector<double> feature_distance;
};

struct SelectionTrace {
    std::size_t sample_count = 0;
    std::vector<SelectionDraw> draws;
    ActionSubset subset;
    std::vector<std::string> warnings;
};

/// Sample K environments, solve each, and keep every state's argmax action.
/// Draw i uses seed.child(i), so a trace for K is a prefix of the trace for
/// K + 1 under the same seed.
SelectionTrace epsilon_net(const EnvironmentFamily& family, std::size_t sample_count, const RngSeed& seed);

/// Returns the action to keep at every state for one sampled environment.
using ArgmaxOracle = std::function<std::vector<std::size_t>(const EnvironmentParameter&, const RngSeed&)>;

/// epsilon_net with the exact argmax replaced by `oracle`. When the family has
/// a feature map and exact Q*, each choice is audited against the exact
/// argmax; distances above `delta` are logged as warnings.
SelectionTrace approximate_epsilon_net(const EnvironmentFamily& family, std::size_t sample_count,
                                       const RngSeed& seed, const ArgmaxOracle& oracle, double delta);

/// Monte-Carlo E_theta[max_x regret(x)] over fresh draws.
Estimate expected_max_regret(const EnvironmentFamily& family, const ActionSubset& subset, std::size_t samples,
                             const RngSeed& seed);

/// Exact E_theta[max_x regret(x)] by enumerating a finite support.
double expected_max_regret_exact(const EnvironmentFamily& family, const ActionSubset& subset);

struct PerformanceLossEstimate {
    double mean = 0.0;
    /// Standard error across replications (within-replication error when
    /// only one replication ran).
    double std_error = 0.0;
    std::size_t replications = 0;
    std::size_t samples_per_replication = 0;
    std::vector<double> replication_means;
};

/// E_{theta, A}[V*(x0) - V^pi(x0)]: each replication reruns the selection with
/// K draws, then averages the loss over fresh environments, where pi is the
/// greedy policy restricted to the selected subset and x0 is each
/// environment's initial state.
PerformanceLossEstimate expected_performance_loss(const EnvironmentFamily& family, std::size_t sample_count,
                                                  const RngSeed& seed, std::size_t replications,
                                                  std::size_t samples_per_replication,
                                                  const SolverSettings& settings = {});

/// Fraction of replications in which no draw fell into cluster l, per cluster.
std::vector<Estimate> missed_cluster_frequency(const EnvironmentFamily& family, const ClusterPartition& partition,
                                               std::size_t sample_count, std::size_t replications,
                                               const RngSeed& seed);

/// JSON lines: {"draw_index", "parameter_id", "argmax_actions"} per draw;
/// vector parameters are written under "theta" with a null parameter_id.
void write_trace_jsonl(std::ostream& out, const SelectionTrace& trace);

struct TraceRecord {
    std::size_t draw_index = 0;
    EnvironmentParameter parameter;
    std::vector<std::size_t> argmax_actions;
};
std::vector<TraceRecord> read_trace_jsonl(std::istream& in);

}  // namespace actnet
