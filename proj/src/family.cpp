#include "actnet/family.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace actnet {

EnvironmentFamily EnvironmentFamily::finite(std::vector<WeightedEnvironment> support,
                                            const SolverSettings& settings, FeatureMap features) {
    if (support.empty()) throw std::invalid_argument("finite family needs at least one member");
    auto fs = std::make_shared<FiniteSupport>();
    double total = 0.0;
    for (const auto& member : support) {
        if (!(member.probability >= 0.0)) throw std::invalid_argument("finite family: negative probability");
        total += member.probability;
        fs->cumulative.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("finite family: probabilities must sum to 1");
    fs->cumulative.back() = 1.0;

    const auto layout = support.front().mdp.actions_per_state();
    for (const auto& member : support) {
        if (member.mdp.actions_per_state() != layout)
            throw std::invalid_argument("finite family: members must share the state/action layout");
        fs->qstar.push_back(value_iteration(member.mdp, settings).q);
    }
    fs->members = std::move(support);

    EnvironmentFamily family;
    family.actions_per_state_ = layout;
    family.support_ = std::move(fs);
    family.features_ = std::move(features);
    return family;
}

EnvironmentFamily EnvironmentFamily::continuous(std::vector<std::size_t> actions_per_state, std::size_t dimension,
                                                Sampler sampler, Resolver resolver, FeatureMap features,
                                                MdpBuilder builder) {
    if (!sampler) throw std::invalid_argument("continuous family needs a sampler");
    EnvironmentFamily family;
    family.actions_per_state_ = std::move(actions_per_state);
    family.dimension_ = dimension;
    family.sampler_ = std::move(sampler);
    family.resolver_ = std::move(resolver);
    family.features_ = std::move(features);
    family.builder_ = std::move(builder);
    return family;
}

EnvironmentParameter EnvironmentFamily::sample(Engine& engine) const {
    if (support_) {
        const double u = std::generate_canonical<double, 64>(engine);
        const auto& cum = support_->cumulative;
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        std::size_t id = it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
        return EnvironmentParameter::finite(id);
    }
    auto theta = sampler_(engine);
    if (dimension_ != 0 && !theta.id && theta.theta.size() != dimension_)
        throw std::logic_error("family sampler returned a parameter of the wrong dimension");
    return theta;
}

void EnvironmentFamily::check(const EnvironmentParameter& theta) const {
    if (support_) {
        if (!theta.id || *theta.id >= support_->members.size())
            throw std::invalid_argument("parameter is not a member of this finite family");
    } else if (dimension_ != 0 && !theta.id && theta.theta.size() != dimension_) {
        throw std::invalid_argument("parameter dimension " + std::to_string(theta.theta.size()) +
                                    " does not match family dimension " + std::to_string(dimension_));
    }
}

QFunction EnvironmentFamily::resolve(const EnvironmentParameter& theta) const {
    check(theta);
    if (support_) return support_->qstar[*theta.id];
    if (!resolver_) throw std::logic_error("family has no Q* resolver");
    return resolver_(theta);
}

TabularMDP EnvironmentFamily::environment(const EnvironmentParameter& theta) const {
    check(theta);
    if (support_) return support_->members[*theta.id].mdp;
    if (!builder_) throw std::logic_error("family has no environment builder");
    return builder_(theta);
}

std::vector<double> EnvironmentFamily::feature(std::size_t x, std::size_t a) const {
    if (!features_) throw std::logic_error("family has no feature map");
    return features_(x, a);
}

std::vector<double> EnvironmentFamily::support_probabilities() const {
    std::vector<double> p;
    if (!support_) return p;
    for (const auto& m : support_->members) p.push_back(m.probability);
    return p;
}

std::size_t EnvironmentFamily::support_size() const { return support_ ? support_->members.size() : 0; }

EnvironmentParameter sample_environment(const EnvironmentFamily& family, const RngSeed& seed) {
    Engine engine = seed.engine();
    return family.sample(engine);
}

std::vector<EnvironmentParameter> sample_without_replacement(const EnvironmentFamily& family,
                                                             std::size_t count, const RngSeed& seed) {
    if (!family.is_finite()) throw std::invalid_argument("sampling without replacement needs a finite family");
    std::vector<double> weights = family.support_probabilities();
    const std::size_t available =
        static_cast<std::size_t>(std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
    if (count > available)
        throw std::out_of_range("finite family exhausted: requested " + std::to_string(count) + " of " +
                                std::to_string(available) + " members");
    Engine engine = seed.engine();
    std::vector<EnvironmentParameter> out;
    for (std::size_t k = 0; k < count; ++k) {
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        const std::size_t id = pick(engine);
        weights[id] = 0.0;
        out.push_back(EnvironmentParameter::finite(id));
    }
    return out;
}

void validate_partition(const ClusterPartition& partition) {
    if (partition.cluster_count == 0) throw std::invalid_argument("partition needs at least one cluster");
    if (partition.masses.size() != partition.cluster_count)
        throw std::invalid_argument("partition masses size differs from cluster_count");
    double total = 0.0;
    for (double p : partition.masses) {
        if (!(p >= 0.0)) throw std::invalid_argument("partition masses must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("partition masses must sum to 1");
    for (const auto& per_state : partition.action_clusters)
        if (per_state.size() != partition.cluster_count)
            throw std::invalid_argument("action_clusters must list every cluster at every state");
    for (const auto& per_state : partition.cluster_points)
        if (per_state.size() != partition.cluster_count)
            throw std::invalid_argument("cluster_points must list every cluster at every state");
}

void attach_features(ClusterPartition& partition, const EnvironmentFamily& family) {
    if (!family.has_features()) throw std::invalid_argument("family has no feature map");
    partition.cluster_points.assign(partition.action_clusters.size(), {});
    for (std::size_t x = 0; x < partition.action_clusters.size(); ++x) {
        auto& per_state = partition.cluster_points[x];
        per_state.resize(partition.action_clusters[x].size());
        for (std::size_t l = 0; l < per_state.size(); ++l)
            for (std::size_t a : partition.action_clusters[x][l]) per_state[l].push_back(family.feature(x, a));
    }
}

}  // namespace actnet
