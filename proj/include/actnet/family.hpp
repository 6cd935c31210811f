#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actnet/mdp.hpp"
#include "actnet/rng.hpp"
#include "actnet/solvers.hpp"

namespace actnet {

/// One environment draw: an index into a finite support, or a real vector.
struct EnvironmentParameter {
    std::optional<std::size_t> id;
    std::vector<double> theta;

    static EnvironmentParameter finite(std::size_t id) { return {id, {}}; }
    static EnvironmentParameter vector(std::vector<double> theta) { return {std::nullopt, std::move(theta)}; }

    friend bool operator==(const EnvironmentParameter&, const EnvironmentParameter&) = default;
};

struct WeightedEnvironment {
    TabularMDP mdp;
    double probability = 0.0;
};

/// A distribution p over environments sharing one state/action layout.
///
/// Finite families hold an enumerated support with the optimal Q of every
/// member solved once at construction. Continuous families supply a seeded
/// sampler and, optionally, a resolver producing Q*, an MDP builder and a
/// feature map phi(x, a). Instances are immutable and thread-safe.
class EnvironmentFamily {
public:
    using Sampler = std::function<EnvironmentParameter(Engine&)>;
    using Resolver = std::function<QFunction(const EnvironmentParameter&)>;
    using MdpBuilder = std::function<TabularMDP(const EnvironmentParameter&)>;
    using FeatureMap = std::function<std::vector<double>(std::size_t x, std::size_t a)>;

    static EnvironmentFamily finite(std::vector<WeightedEnvironment> support,
                                    const SolverSettings& settings = {}, FeatureMap features = {});

    static EnvironmentFamily continuous(std::vector<std::size_t> actions_per_state, std::size_t dimension,
                                        Sampler sampler, Resolver resolver = {}, FeatureMap features = {},
                                        MdpBuilder builder = {});

    std::size_t state_count() const { return actions_per_state_.size(); }
    std::span<const std::size_t> actions_per_state() const { return actions_per_state_; }
    std::size_t dimension() const { return dimension_; }
    bool is_finite() const { return static_cast<bool>(support_); }

    EnvironmentParameter sample(Engine& engine) const;

    bool has_resolver() const { return is_finite() || static_cast<bool>(resolver_); }
    QFunction resolve(const EnvironmentParameter& theta) const;

    bool has_environment() const { return is_finite() || static_cast<bool>(builder_); }
    TabularMDP environment(const EnvironmentParameter& theta) const;

    bool has_features() const { return static_cast<bool>(features_); }
    std::vector<double> feature(std::size_t x, std::size_t a) const;

    /// Finite support probabilities (empty for continuous families).
    std::vector<double> support_probabilities() const;
    std::size_t support_size() const;

private:
    struct FiniteSupport {
        std::vector<WeightedEnvironment> members;
        std::vector<double> cumulative;
        std::vector<QFunction> qstar;
    };

    void check(const EnvironmentParameter& theta) const;

    std::vector<std::size_t> actions_per_state_;
    std::size_t dimension_ = 0;
    std::shared_ptr<const FiniteSupport> support_;
    Sampler sampler_;
    Resolver resolver_;
    MdpBuilder builder_;
    FeatureMap features_;
};

/// One draw from p, a pure function of (family, seed).
EnvironmentParameter sample_environment(const EnvironmentFamily& family, const RngSeed& seed);

/// `count` distinct support members drawn without replacement; throws
/// std::out_of_range when the finite support is exhausted.
std::vector<EnvironmentParameter> sample_without_replacement(const EnvironmentFamily& family,
                                                             std::size_t count, const RngSeed& seed);

/// Partition of the parameter support into clusters Theta_l, with the induced
/// per-state action clusters r_{x,l}.
struct ClusterPartition {
    std::size_t cluster_count = 0;
    std::function<std::size_t(const EnvironmentParameter&)> assign;
    std::vector<double> masses;
    /// action_clusters[x][l] = actions of r_{x,l}; empty when unknown.
    std::vector<std::vector<std::vector<std::size_t>>> action_clusters;
    /// cluster_points[x][l] = feature vectors of r_{x,l}; empty when unknown.
    std::vector<std::vector<std::vector<std::vector<double>>>> cluster_points;
};

/// Throws std::invalid_argument if masses are not a distribution (1e-9) or
/// cluster tables have the wrong shape.
void validate_partition(const ClusterPartition& partition);

/// Fills cluster_points from the family's feature map.
void attach_features(ClusterPartition& partition, const EnvironmentFamily& family);

}  // namespace actnet
