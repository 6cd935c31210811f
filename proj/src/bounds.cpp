#include "actnet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "actnet/occupancy.hpp"
#include "actnet/parallel.hpp"

namespace actnet {

void BoundConstants::validate() const {
    if (!(c > 0.0) || !(c_prime > 0.0) || !(c_double_prime > 0.0))
        throw std::invalid_argument("bound constants must be strictly positive");
}

double iid_squared_width_constant(std::size_t n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    return std::sqrt(8.0 * std::log(static_cast<double>(n)) + 4.0 * std::sqrt(2.0));
}

Estimate iid_exact_regret(const GaussianMaxTable& table, std::size_t draws) {
    const std::size_t n = table.size();
    if (draws < 1) throw std::invalid_argument("K must be >= 1");
    const auto occupancy = occupancy_distribution(n, draws).probability;
    // sum_N Pr[N] (M_n - M_N) as one linear functional of the prefix maxima
    std::vector<double> w(n, 0.0);
    for (std::size_t count = 1; count <= occupancy.size(); ++count) {
        w[n - 1] += occupancy[count - 1];
        w[count - 1] -= occupancy[count - 1];
    }
    return table.linear(w);
}

Estimate iid_exact_regret(std::size_t n, std::size_t draws, std::size_t mc_samples, const RngSeed& seed) {
    return iid_exact_regret(*GaussianMaxTable::shared(n, mc_samples, seed), draws);
}

Estimate iid_upper_bound(const GaussianMaxTable& table, std::size_t m, std::size_t draws) {
    const std::size_t n = table.size();
    if (m < 1 || n % m != 0)
        throw std::invalid_argument("iid_upper_bound: m = " + std::to_string(m) + " does not divide n = " +
                                    std::to_string(n));
    Estimate e = table.gap(m);
    const double miss = std::pow(1.0 - 1.0 / static_cast<double>(m), static_cast<double>(draws));
    e.mean += miss * iid_squared_width_constant(n);
    return e;
}

Estimate iid_upper_bound(std::size_t n, std::size_t m, std::size_t draws, std::size_t mc_samples,
                         const RngSeed& seed) {
    if (m < 1 || n % m != 0)
        throw std::invalid_argument("iid_upper_bound: m = " + std::to_string(m) + " does not divide n = " +
                                    std::to_string(n));
    return iid_upper_bound(*GaussianMaxTable::shared(n, mc_samples, seed), m, draws);
}

namespace {

// One simulated selection: returns which arms were kept.
std::vector<char> simulate_selection(std::size_t n, std::size_t draws, Engine& engine,
                                     std::normal_distribution<double>& normal, std::vector<double>& theta) {
    std::vector<char> kept(n, 0);
    for (std::size_t k = 0; k < draws; ++k) {
        for (auto& t : theta) t = normal(engine);
        kept[argmax_lowest(theta)] = 1;
    }
    return kept;
}

}  // namespace

Estimate iid_simulated_regret(std::size_t n, std::size_t draws, std::size_t episodes, const RngSeed& seed) {
    if (n < 1 || draws < 1 || episodes < 1) throw std::invalid_argument("n, K and episodes must be >= 1");
    return monte_carlo(episodes, seed, [n, draws](Engine& engine) {
               std::normal_distribution<double> normal;
               std::vector<double> theta(n);
               const auto kept = simulate_selection(n, draws, engine, normal, theta);
               for (auto& t : theta) t = normal(engine);
               double best = -std::numeric_limits<double>::infinity();
               double best_kept = best;
               for (std::size_t a = 0; a < n; ++a) {
                   best = std::max(best, theta[a]);
                   if (kept[a]) best_kept = std::max(best_kept, theta[a]);
               }
               return best - best_kept;
           }).estimate();
}

std::vector<Estimate> simulated_distinct_counts(std::size_t n, std::size_t draws, std::size_t episodes,
                                                const RngSeed& seed) {
    if (n < 1 || draws < 1 || episodes < 1) throw std::invalid_argument("n, K and episodes must be >= 1");
    const std::size_t top = std::min(n, draws);
    std::vector<std::vector<std::size_t>> block_hist(block_count(episodes), std::vector<std::size_t>(top, 0));
    for_each_block(episodes, seed, [&](std::size_t b, std::size_t, std::size_t count, Engine& engine) {
        std::normal_distribution<double> normal;
        std::vector<double> theta(n);
        for (std::size_t e = 0; e < count; ++e) {
            const auto kept = simulate_selection(n, draws, engine, normal, theta);
            const auto distinct = static_cast<std::size_t>(std::count(kept.begin(), kept.end(), 1));
            ++block_hist[b][distinct - 1];
        }
    });
    std::vector<Estimate> out(top);
    const double total = static_cast<double>(episodes);
    for (std::size_t i = 0; i < top; ++i) {
        std::size_t hits = 0;
        for (const auto& h : block_hist) hits += h[i];
        const double p = static_cast<double>(hits) / total;
        out[i] = {p, std::sqrt(p * (1.0 - p) / total), episodes};
    }
    return out;
}

double theorem3_bound(const std::vector<double>& masses, std::size_t draws, double z_second_moment,
                      double reference_term) {
    if (masses.empty()) throw std::invalid_argument("theorem3_bound: no cluster masses");
    if (z_second_moment < 0.0 || reference_term < 0.0)
        throw std::invalid_argument("theorem3_bound: negative second moment or reference term");
    double total = 0.0;
    for (double p : masses) {
        if (p < 0.0) throw std::invalid_argument("theorem3_bound: negative cluster mass");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("theorem3_bound: masses do not sum to 1");
    double miss = 0.0;
    for (double p : masses) miss += p * std::pow(1.0 - p, 2.0 * static_cast<double>(draws));
    return reference_term + std::sqrt(miss * z_second_moment);
}

Theorem1Terms theorem1_terms(const ClusterPartition& partition, std::size_t state_count, std::size_t samples,
                             const RngSeed& seed, const BoundConstants& constants) {
    constants.validate();
    if (partition.cluster_points.size() != state_count)
        throw std::invalid_argument("theorem1_terms: partition has no feature vectors for every state");
    Theorem1Terms t;
    t.widths.resize(state_count);
    t.max_min_width = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < state_count; ++x) {
        const auto& clusters = partition.cluster_points[x];
        if (clusters.size() != partition.cluster_count)
            throw std::invalid_argument("theorem1_terms: missing cluster feature vectors at state " +
                                        std::to_string(x));
        double min_width = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < clusters.size(); ++l) {
            const Estimate w = gaussian_width(clusters[l], samples, seed.child(x).child(l));
            t.widths[x].push_back(w);
            t.max_width = std::max(t.max_width, w.mean);
            min_width = std::min(min_width, w.mean);
            t.epsilon = std::max(t.epsilon, diameter(clusters[l]));
        }
        t.max_min_width = std::max(t.max_min_width, min_width);
    }
    const double log_term =
        std::sqrt(std::log(static_cast<double>(partition.cluster_count * state_count)));
    t.upper = t.max_width + constants.c * t.epsilon * log_term;
    t.lower = t.max_min_width - constants.c * t.epsilon * log_term;
    return t;
}

double theorem2_upper(const Theorem1Terms& terms, std::size_t cluster_count, std::size_t state_count,
                      double subgaussian_constant, const BoundConstants& constants) {
    constants.validate();
    if (subgaussian_constant < 1.0) throw std::invalid_argument("theorem2_upper: L must be >= 1");
    const double log_term =
        std::sqrt(std::log(subgaussian_constant * static_cast<double>(cluster_count * state_count)));
    return constants.c_prime * terms.max_width + constants.c_double_prime * terms.epsilon * log_term;
}

ClusterRegretSamples cluster_regret_samples(const EnvironmentFamily& family, const ClusterPartition& partition,
                                            const ActionSubset& reference, std::size_t samples,
                                            const RngSeed& seed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (!family.has_resolver()) throw std::invalid_argument("cluster_regret_samples: family has no resolver");
    const std::size_t states = family.state_count();
    if (partition.action_clusters.size() != states || reference.state_count() != states)
        throw std::invalid_argument("cluster_regret_samples: partition/reference do not cover every state");

    // ref[x][l] = the reference action inside r_{x,l}
    std::vector<std::vector<std::size_t>> ref(states);
    for (std::size_t x = 0; x < states; ++x) {
        for (std::size_t l = 0; l < partition.cluster_count; ++l) {
            const auto& cluster = partition.action_clusters[x].at(l);
            std::size_t hits = 0, chosen = 0;
            for (std::size_t a : cluster)
                if (reference.contains(x, a)) {
                    ++hits;
                    chosen = a;
                }
            if (hits != 1)
                throw std::invalid_argument("reference set must hold exactly one action of cluster " +
                                            std::to_string(l) + " at state " + std::to_string(x));
            ref[x].push_back(chosen);
        }
    }

    ClusterRegretSamples out;
    out.max_values.resize(samples);
    out.max_min_values.resize(samples);
    for_each_block(samples, seed, [&](std::size_t, std::size_t first, std::size_t count, Engine& engine) {
        for (std::size_t s = first; s < first + count; ++s) {
            const QFunction q = family.resolve(family.sample(engine));
            double overall = -std::numeric_limits<double>::infinity();
            double max_min = overall;
            for (std::size_t x = 0; x < states; ++x) {
                double state_min = std::numeric_limits<double>::infinity();
                for (std::size_t l = 0; l < partition.cluster_count; ++l) {
                    double best = -std::numeric_limits<double>::infinity();
                    for (std::size_t a : partition.action_clusters[x][l]) best = std::max(best, q(x, a));
                    const double y = best - q(x, ref[x][l]);
                    overall = std::max(overall, y);
                    state_min = std::min(state_min, y);
                }
                max_min = std::max(max_min, state_min);
            }
            out.max_values[s] = overall;
            out.max_min_values[s] = max_min;
        }
    });
    out.max_estimate = summarize(out.max_values).estimate();
    out.max_min_estimate = summarize(out.max_min_values).estimate();
    return out;
}

SquaredWidthCheck squared_width_bound(const PointSet& points, std::size_t samples, const RngSeed& seed) {
    if (points.empty()) throw std::invalid_argument("squared_width_bound: empty point set");
    if (samples < 2) throw std::invalid_argument("squared_width_bound: need at least two samples");
    const std::size_t dim = points.front().size();
    for (const auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("points have different dimensions");

    // max over S (-) S of <u, z> = max_s <u, s> - min_s <u, s>
    std::vector<double> spread(samples);
    for_each_block(samples, seed, [&](std::size_t, std::size_t first, std::size_t count, Engine& engine) {
        std::normal_distribution<double> normal;
        std::vector<double> u(dim);
        for (std::size_t s = first; s < first + count; ++s) {
            for (auto& v : u) v = normal(engine);
            double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
            for (const auto& p : points) {
                double dot = 0.0;
                for (std::size_t i = 0; i < dim; ++i) dot += p[i] * u[i];
                hi = std::max(hi, dot);
                lo = std::min(lo, dot);
            }
            spread[s] = hi - lo;
        }
    });

    SquaredWidthCheck check;
    RunningStats width, square;
    for (double m : spread) {
        width.add(m);
        square.add(m * m);
    }
    check.width = width.estimate();
    check.lhs = square.estimate();
    check.diameter = diameter(points);
    check.rhs = check.width.mean * check.width.mean + 4.0 * check.diameter;
    RunningStats diff;
    for (double m : spread) diff.add(m * m - 2.0 * check.width.mean * m);
    check.std_error = diff.std_error();
    check.holds = check.lhs.mean <= check.rhs + 3.0 * check.std_error;
    return check;
}

std::vector<BoundSweepRow> iid_bound_sweep(const GaussianMaxTable& table, const std::vector<std::size_t>& ms,
                                           std::size_t max_draws) {
    std::vector<BoundSweepRow> rows;
    for (std::size_t k = 1; k <= max_draws; ++k) {
        const Estimate exact = iid_exact_regret(table, k);
        for (std::size_t m : ms) rows.push_back({k, m, exact, iid_upper_bound(table, m, k)});
    }
    return rows;
}

void write_bound_sweep_csv(std::ostream& out, const std::vector<BoundSweepRow>& rows) {
    const auto old = out.precision(15);
    out << "K,m,exact_regret,exact_stderr,bound_m\n";
    for (const auto& r : rows)
        out << r.draws << ',' << r.m << ',' << r.exact.mean << ',' << r.exact.std_error << ',' << r.bound.mean
            << '\n';
    out.precision(old);
}

}  // namespace actnet
