#include "actnet/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace actnet {

AggregationMap AggregationMap::uniform(std::vector<std::size_t> psi) {
    AggregationMap map{std::move(psi), {}};
    const auto blocks = map.preimages();
    map.weights.assign(map.psi.size(), 0.0);
    for (const auto& block : blocks)
        for (std::size_t g : block) map.weights[g] = 1.0 / static_cast<double>(block.size());
    return map;
}

AggregationMap AggregationMap::identity(std::size_t states) {
    std::vector<std::size_t> psi(states);
    for (std::size_t g = 0; g < states; ++g) psi[g] = g;
    return {std::move(psi), std::vector<double>(states, 1.0)};
}

std::size_t AggregationMap::abstract_state_count() const {
    return psi.empty() ? 0 : *std::max_element(psi.begin(), psi.end()) + 1;
}

std::vector<std::vector<std::size_t>> AggregationMap::preimages() const {
    std::vector<std::vector<std::size_t>> blocks(abstract_state_count());
    for (std::size_t g = 0; g < psi.size(); ++g) blocks[psi[g]].push_back(g);
    return blocks;
}

void validate_map(const AggregationMap& map, const TabularMDP& ground) {
    const std::size_t states = ground.state_count();
    if (map.psi.size() != states)
        throw std::invalid_argument("aggregation map covers " + std::to_string(map.psi.size()) +
                                    " ground states, MDP has " + std::to_string(states));
    if (map.weights.size() != states) throw std::invalid_argument("aggregation weights have the wrong length");
    const auto blocks = map.preimages();
    for (std::size_t x = 0; x < blocks.size(); ++x) {
        if (blocks[x].empty())
            throw std::invalid_argument("abstract state " + std::to_string(x) + " has no ground states");
        double total = 0.0;
        for (std::size_t g : blocks[x]) {
            if (!(map.weights[g] >= 0.0))
                throw std::invalid_argument("negative aggregation weight at ground state " + std::to_string(g));
            total += map.weights[g];
            if (ground.action_count(g) != ground.action_count(blocks[x].front()))
                throw std::invalid_argument("ground states of abstract state " + std::to_string(x) +
                                            " have different action sets");
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("weights of abstract state " + std::to_string(x) + " do not sum to 1");
    }
}

TabularMDP aggregate(const TabularMDP& ground, const AggregationMap& map) {
    require_valid(ground);
    validate_map(map, ground);
    const auto blocks = map.preimages();
    const std::size_t k = blocks.size();

    TabularMDP out;
    out.discount = ground.discount;
    out.initial_state = map.psi[ground.initial_state];
    out.transitions.resize(k);
    out.rewards.resize(k);
    for (std::size_t x = 0; x < k; ++x) {
        const std::size_t actions = ground.action_count(blocks[x].front());
        out.rewards[x].assign(actions, 0.0);
        out.transitions[x].assign(actions, std::vector<double>(k, 0.0));
        for (std::size_t a = 0; a < actions; ++a)
            for (std::size_t g : blocks[x]) {
                const double w = map.weights[g];
                out.rewards[x][a] += w * ground.rewards[g][a];
                for (std::size_t y = 0; y < ground.state_count(); ++y)
                    out.transitions[x][a][map.psi[y]] += w * ground.transitions[g][a][y];
            }
    }
    return out;
}

Dispersion dispersion(const QFunction& ground_q, const AggregationMap& map) {
    if (map.psi.size() != ground_q.state_count())
        throw std::invalid_argument("dispersion: map and Q cover different ground states");
    const auto blocks = map.preimages();
    Dispersion d;
    d.per_state.assign(blocks.size(), 0.0);
    for (std::size_t x = 0; x < blocks.size(); ++x) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t g : blocks[x])
            for (double v : ground_q.row(g)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        d.per_state[x] = blocks[x].empty() ? 0.0 : hi - lo;
        d.global = std::max(d.global, d.per_state[x]);
    }
    return d;
}

AbstractionCheck abstraction_suboptimality_check(const TabularMDP& ground, const AggregationMap& map,
                                                 const ActionSubset& subset, const SolverSettings& settings) {
    const TabularMDP abstract = aggregate(ground, map);
    if (subset.state_count() != abstract.state_count())
        throw std::invalid_argument("subset must be defined on the abstract states");

    AbstractionCheck c;
    c.ground_q = value_iteration(ground, settings).q;
    c.abstract_q = value_iteration(abstract, settings).q;
    c.nu = dispersion(c.ground_q, map).global;
    const double scale = 1.0 / (1.0 - ground.discount);
    const auto regret = state_regret(c.abstract_q, subset);
    const Policy restricted = greedy_policy(c.abstract_q, subset);

    c.lemma10_bound = c.nu * scale;
    const std::size_t states = ground.state_count();
    c.suboptimality.resize(states);
    c.bound.resize(states);
    c.margin.resize(states);
    for (std::size_t g = 0; g < states; ++g) {
        const std::size_t x = map.psi[g];
        const auto row = c.ground_q.row(g);
        for (std::size_t a = 0; a < row.size(); ++a)
            c.lemma10_max_gap = std::max(c.lemma10_max_gap, std::abs(row[a] - c.abstract_q(x, a)));
        c.suboptimality[g] = row[argmax_lowest(row)] - row[restricted[x]];
        c.bound[g] = 2.0 * c.nu * scale + regret[x];
        c.margin[g] = c.bound[g] - c.suboptimality[g];
        c.lhs = std::max(c.lhs, c.suboptimality[g]);
        if (c.margin[g] < -1e-8) c.lemma11_holds = false;
    }
    c.rhs = 2.0 * c.nu * scale + *std::max_element(regret.begin(), regret.end());
    c.lemma10_holds = c.lemma10_max_gap <= c.lemma10_bound + 1e-8;
    return c;
}

std::string to_json(const AggregationMap& map) {
    nlohmann::ordered_json j;
    j["psi"] = map.psi;
    j["weights"] = map.weights;
    return j.dump();
}

AggregationMap aggregation_map_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        AggregationMap map;
        map.psi = j.at("psi").get<std::vector<std::size_t>>();
        map.weights = j.at("weights").get<std::vector<double>>();
        if (map.psi.size() != map.weights.size())
            throw std::invalid_argument("aggregation map: psi and weights differ in length");
        return map;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("aggregation map JSON: ") + e.what());
    }
}

}  // namespace actnet
