#include "actnet/families.hpp"

#include <memory>
#include <stdexcept>

namespace actnet {

namespace {

TabularMDP deterministic_two_state(const std::size_t next[2][2], const double reward[2][2]) {
    TabularMDP mdp;
    mdp.discount = 0.5;
    mdp.initial_state = 1;
    mdp.transitions.assign(2, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
    mdp.rewards.assign(2, std::vector<double>(2, 0.0));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t a = 0; a < 2; ++a) {
            mdp.transitions[x][a][next[x][a]] = 1.0;
            mdp.rewards[x][a] = reward[x][a];
        }
    return mdp;
}

std::vector<double> unit_vector(std::size_t dim, std::size_t i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    return e;
}

}  // namespace

TabularMDP first_two_state_mdp() {
    const std::size_t next[2][2] = {{0, 1}, {0, 1}};
    const double reward[2][2] = {{2.0, 0.0}, {1.0, 3.0}};
    return deterministic_two_state(next, reward);
}

TabularMDP second_two_state_mdp() {
    const std::size_t next[2][2] = {{1, 0}, {1, 0}};
    const double reward[2][2] = {{0.0, 2.0}, {3.0, 1.0}};
    return deterministic_two_state(next, reward);
}

EnvironmentFamily two_mdp_family(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
    return EnvironmentFamily::finite({{first_two_state_mdp(), rho}, {second_two_state_mdp(), 1.0 - rho}}, {},
                                     [](std::size_t x, std::size_t a) { return unit_vector(4, 2 * x + a); });
}

ClusterPartition two_mdp_partition(double rho) {
    ClusterPartition p;
    p.cluster_count = 2;
    p.masses = {rho, 1.0 - rho};
    p.assign = [](const EnvironmentParameter& theta) {
        if (!theta.id) throw std::invalid_argument("two-MDP partition expects a finite parameter");
        return *theta.id;
    };
    // theta_1 prefers (a1, a2); theta_2 prefers (a2, a1).
    p.action_clusters = {{{0}, {1}}, {{1}, {0}}};
    return p;
}

EnvironmentFamily canonical_gaussian_family(std::vector<std::vector<std::vector<double>>> features) {
    if (features.empty() || features.front().empty())
        throw std::invalid_argument("canonical family needs at least one state-action feature");
    const std::size_t dim = features.front().front().size();
    std::vector<std::size_t> actions;
    for (const auto& per_state : features) {
        if (per_state.empty()) throw std::invalid_argument("canonical family: state without actions");
        for (const auto& phi : per_state)
            if (phi.size() != dim) throw std::invalid_argument("canonical family: feature dimensions differ");
        actions.push_back(per_state.size());
    }
    auto phi = std::make_shared<const std::vector<std::vector<std::vector<double>>>>(std::move(features));

    auto sampler = [dim](Engine& engine) {
        std::normal_distribution<double> normal;
        std::vector<double> theta(dim);
        for (auto& t : theta) t = normal(engine);
        return EnvironmentParameter::vector(std::move(theta));
    };
    auto resolver = [phi](const EnvironmentParameter& theta) {
        QFunction q;
        q.values.resize(phi->size());
        for (std::size_t x = 0; x < phi->size(); ++x)
            for (const auto& f : (*phi)[x]) {
                double dot = 0.0;
                for (std::size_t i = 0; i < f.size(); ++i) dot += f[i] * theta.theta[i];
                q.values[x].push_back(dot);
            }
        return q;
    };
    auto feature = [phi](std::size_t x, std::size_t a) { return phi->at(x).at(a); };

    EnvironmentFamily::MdpBuilder builder;
    if (phi->size() == 1) {
        builder = [resolver](const EnvironmentParameter& theta) {
            TabularMDP mdp;
            mdp.rewards = resolver(theta).values;
            mdp.transitions.assign(1, std::vector<std::vector<double>>(mdp.rewards[0].size(), {1.0}));
            mdp.discount = 0.0;
            return mdp;
        };
    }
    return EnvironmentFamily::continuous(std::move(actions), dim, sampler, resolver, feature, builder);
}

EnvironmentFamily iid_bandit_family(std::size_t n) {
    if (n == 0) throw std::invalid_argument("iid bandit needs n >= 1");
    std::vector<std::vector<std::vector<double>>> features(1);
    for (std::size_t a = 0; a < n; ++a) features[0].push_back(unit_vector(n, a));
    return canonical_gaussian_family(std::move(features));
}

ClusterPartition iid_bandit_partition(std::size_t n, std::size_t m) {
    if (m == 0 || n % m != 0) throw std::invalid_argument("cluster count m must divide n");
    const std::size_t width = n / m;
    ClusterPartition p;
    p.cluster_count = m;
    p.masses.assign(m, 1.0 / static_cast<double>(m));
    p.assign = [width](const EnvironmentParameter& theta) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < theta.theta.size(); ++i)
            if (theta.theta[i] > theta.theta[best]) best = i;
        return best / width;
    };
    p.action_clusters.resize(1);
    for (std::size_t l = 0; l < m; ++l) {
        std::vector<std::size_t> members;
        for (std::size_t a = l * width; a < (l + 1) * width; ++a) members.push_back(a);
        p.action_clusters[0].push_back(std::move(members));
    }
    return p;
}

}  // namespace actnet
