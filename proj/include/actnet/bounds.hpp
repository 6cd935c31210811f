#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "actnet/family.hpp"
#include "actnet/mdp.hpp"
#include "actnet/rng.hpp"
#include "actnet/stats.hpp"
#include "actnet/width.hpp"

namespace actnet {

/// Absolute constants of the reference-set bounds. The theory leaves them
/// unspecified, so they are configuration.
struct BoundConstants {
    double c = 1.0;
    double c_prime = 1.0;
    double c_double_prime = 1.0;

    /// Throws std::invalid_argument unless all are strictly positive.
    void validate() const;
};

/// sqrt(8 log n + 4 sqrt 2): bound on sqrt(E[(max over S (-) S)^2]) for n
/// unit-vector arms.
double iid_squared_width_constant(std::size_t n);

/// sum_N Pr[|A| = N] (E max_n - E max_N) for K uniform argmax draws over n
/// i.i.d. standard normal arms; the E max terms come from `table`
/// (table.size() = n).
Estimate iid_exact_regret(const GaussianMaxTable& table, std::size_t draws);
Estimate iid_exact_regret(std::size_t n, std::size_t draws, std::size_t mc_samples, const RngSeed& seed);

/// (E max_n - E max_m) + (1 - 1/m)^K sqrt(8 log n + 4 sqrt 2) for m equal
/// clusters of n/m arms. The reference set keeps one arm per cluster, so its
/// regret is E max_n - E max_m. Throws if m does not divide n.
Estimate iid_upper_bound(const GaussianMaxTable& table, std::size_t m, std::size_t draws);
Estimate iid_upper_bound(std::size_t n, std::size_t m, std::size_t draws, std::size_t mc_samples,
                         const RngSeed& seed);

/// Direct simulation: each episode runs the selection with K draws of theta,
/// then scores max_n theta' - max_{a in A} theta' on a fresh theta'.
Estimate iid_simulated_regret(std::size_t n, std::size_t draws, std::size_t episodes, const RngSeed& seed);

/// Distinct argmax counts after K draws, as frequencies over `episodes`
/// simulated selections; entry N - 1 estimates Pr[N].
std::vector<Estimate> simulated_distinct_counts(std::size_t n, std::size_t draws, std::size_t episodes,
                                                const RngSeed& seed);

/// reference_term + sqrt(sum_l p_l (1 - p_l)^{2K} * z_second_moment).
double theorem3_bound(const std::vector<double>& masses, std::size_t draws, double z_second_moment,
                      double reference_term);

struct Theorem1Terms {
    double max_width = 0.0;      // max_{x,l} G(r_{x,l})
    double max_min_width = 0.0;  // max_x min_l G(r_{x,l})
    double epsilon = 0.0;        // largest cluster diameter
    double upper = 0.0;
    double lower = 0.0;
    /// widths[x][l]
    std::vector<std::vector<Estimate>> widths;
};

/// Cluster widths by Monte Carlo and both bounds of the canonical-process
/// theorem. Requires partition.cluster_points.
Theorem1Terms theorem1_terms(const ClusterPartition& partition, std::size_t state_count, std::size_t samples,
                             const RngSeed& seed, const BoundConstants& constants = {});

/// C' max G + C'' eps sqrt(log(L m |X|)) for the sub-Gaussian extension.
double theorem2_upper(const Theorem1Terms& terms, std::size_t cluster_count, std::size_t state_count,
                      double subgaussian_constant, const BoundConstants& constants = {});

struct ClusterRegretSamples {
    std::vector<double> max_values;      // max_{x,l} Y_{x,l} per draw
    std::vector<double> max_min_values;  // max_x min_l Y_{x,l} per draw
    Estimate max_estimate;
    Estimate max_min_estimate;
};

/// Y_{x,l} = max_{a in r_{x,l}} Q*(x, a) - Q*(x, a_ref(x, l)) over fresh draws.
/// `reference` must hold exactly one action of every r_{x,l}.
ClusterRegretSamples cluster_regret_samples(const EnvironmentFamily& family, const ClusterPartition& partition,
                                            const ActionSubset& reference, std::size_t samples,
                                            const RngSeed& seed);

struct SquaredWidthCheck {
    Estimate lhs;          // E[(max over S (-) S)^2]
    Estimate width;        // G(S (-) S)
    double diameter = 0.0;
    double rhs = 0.0;      // width^2 + 4 diam(S)
    double std_error = 0.0;  // of lhs - rhs (delta method, same draws)
    bool holds = true;     // lhs <= rhs + 3 std_error
};

SquaredWidthCheck squared_width_bound(const PointSet& points, std::size_t samples, const RngSeed& seed);

struct BoundSweepRow {
    std::size_t draws = 0;
    std::size_t m = 0;
    Estimate exact;
    Estimate bound;
};

/// Long-format sweep over K = 1..max_draws and every m.
std::vector<BoundSweepRow> iid_bound_sweep(const GaussianMaxTable& table, const std::vector<std::size_t>& ms,
                                           std::size_t max_draws);

/// CSV columns K, m, exact_regret, exact_stderr, bound_m.
void write_bound_sweep_csv(std::ostream& out, const std::vector<BoundSweepRow>& rows);

}  // namespace actnet
