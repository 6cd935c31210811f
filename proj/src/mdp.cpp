#include "actnet/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace actnet {

using nlohmann::json;

std::vector<std::size_t> TabularMDP::actions_per_state() const {
    std::vector<std::size_t> counts(state_count());
    for (std::size_t x = 0; x < counts.size(); ++x) counts[x] = rewards[x].size();
    return counts;
}

ValidationReport validate_mdp(const TabularMDP& mdp) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

    const std::size_t n = mdp.state_count();
    if (n == 0) fail("state_count must be positive");
    if (!(mdp.discount >= 0.0 && mdp.discount < 1.0))
        fail("discount " + std::to_string(mdp.discount) + " outside [0, 1)");
    if (n != 0 && mdp.initial_state >= n)
        fail("initial_state " + std::to_string(mdp.initial_state) + " out of range");
    if (mdp.transitions.size() != n) {
        fail("transitions has " + std::to_string(mdp.transitions.size()) + " states, rewards has " +
             std::to_string(n));
        return report;
    }
    for (std::size_t x = 0; x < n; ++x) {
        const std::size_t actions = mdp.rewards[x].size();
        if (actions == 0) fail("state " + std::to_string(x) + " has no actions");
        if (mdp.transitions[x].size() != actions) {
            fail("state " + std::to_string(x) + ": transitions list " +
                 std::to_string(mdp.transitions[x].size()) + " actions, rewards list " +
                 std::to_string(actions));
            continue;
        }
        for (std::size_t a = 0; a < actions; ++a) {
            const std::string where = "(" + std::to_string(x) + "," + std::to_string(a) + ")";
            if (!std::isfinite(mdp.rewards[x][a])) fail("reward at " + where + " is not finite");
            const auto& row = mdp.transitions[x][a];
            if (row.size() != n) {
                fail("transition row at " + where + " has length " + std::to_string(row.size()));
                continue;
            }
            double sum = 0.0;
            bool negative = false;
            for (double p : row) {
                if (!(p >= 0.0)) negative = true;
                sum += p;
            }
            if (negative) fail("transition row at " + where + " has a negative or NaN entry");
            if (std::abs(sum - 1.0) > 1e-12) {
                std::ostringstream os;
                os.precision(17);
                os << "transition row at " << where << " sums to " << sum;
                fail(os.str());
            }
        }
    }
    return report;
}

void require_valid(const TabularMDP& mdp) {
    const auto report = validate_mdp(mdp);
    if (report.ok()) return;
    std::string msg = "invalid MDP:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
}

ActionSubset ActionSubset::full(std::span<const std::size_t> actions_per_state) {
    ActionSubset s(actions_per_state.size());
    for (std::size_t x = 0; x < actions_per_state.size(); ++x) {
        auto& v = s.per_state_[x];
        v.resize(actions_per_state[x]);
        for (std::size_t a = 0; a < v.size(); ++a) v[a] = a;
    }
    return s;
}

ActionSubset ActionSubset::from_lists(std::vector<std::vector<std::size_t>> lists) {
    ActionSubset s;
    for (auto& v : lists) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    s.per_state_ = std::move(lists);
    return s;
}

void ActionSubset::insert(std::size_t x, std::size_t a) {
    auto& v = per_state_.at(x);
    auto it = std::lower_bound(v.begin(), v.end(), a);
    if (it == v.end() || *it != a) v.insert(it, a);
}

bool ActionSubset::contains(std::size_t x, std::size_t a) const {
    const auto& v = per_state_.at(x);
    return std::binary_search(v.begin(), v.end(), a);
}

std::size_t ActionSubset::max_size() const {
    std::size_t m = 0;
    for (const auto& v : per_state_) m = std::max(m, v.size());
    return m;
}

std::size_t ActionSubset::total_size() const {
    std::size_t t = 0;
    for (const auto& v : per_state_) t += v.size();
    return t;
}

bool ActionSubset::empty_somewhere() const {
    return std::any_of(per_state_.begin(), per_state_.end(), [](const auto& v) { return v.empty(); });
}

bool ActionSubset::admissible_for(std::span<const std::size_t> actions_per_state) const {
    if (per_state_.size() != actions_per_state.size()) return false;
    for (std::size_t x = 0; x < per_state_.size(); ++x)
        if (!per_state_[x].empty() && per_state_[x].back() >= actions_per_state[x]) return false;
    return true;
}

std::size_t argmax_lowest(std::span<const double> row) {
    if (row.empty()) throw std::invalid_argument("argmax of an empty row");
    std::size_t best = 0;
    for (std::size_t a = 1; a < row.size(); ++a)
        if (row[a] > row[best]) best = a;
    return best;
}

TabularMDP random_tabular_mdp(std::size_t states, std::span<const std::size_t> actions_per_state,
                              double discount, Engine& engine) {
    if (actions_per_state.size() != states)
        throw std::invalid_argument("random_tabular_mdp: actions_per_state size mismatch");
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    TabularMDP mdp;
    mdp.discount = discount;
    mdp.transitions.resize(states);
    mdp.rewards.resize(states);
    for (std::size_t x = 0; x < states; ++x) {
        mdp.transitions[x].resize(actions_per_state[x]);
        mdp.rewards[x].resize(actions_per_state[x]);
        for (std::size_t a = 0; a < actions_per_state[x]; ++a) {
            std::vector<double> row(states);
            double sum = 0.0;
            for (auto& p : row) {
                p = expo(engine);
                sum += p;
            }
            for (auto& p : row) p /= sum;
            // Put the rounding residue on the largest entry so the row sums to 1.
            double total = 0.0;
            for (double p : row) total += p;
            auto big = std::max_element(row.begin(), row.end());
            *big += 1.0 - total;
            mdp.transitions[x][a] = std::move(row);
            mdp.rewards[x][a] = unif(engine);
        }
    }
    return mdp;
}

std::string to_json(const TabularMDP& mdp) {
    json j;
    j["states"] = mdp.state_count();
    j["actions_per_state"] = mdp.actions_per_state();
    j["transitions"] = mdp.transitions;
    j["rewards"] = mdp.rewards;
    j["discount"] = mdp.discount;
    j["initial_state"] = mdp.initial_state;
    return j.dump();
}

TabularMDP mdp_from_json(const std::string& text) {
    TabularMDP mdp;
    std::size_t states = 0;
    std::vector<std::size_t> actions;
    try {
        const json j = json::parse(text);
        mdp.transitions = j.at("transitions").get<std::vector<std::vector<std::vector<double>>>>();
        mdp.rewards = j.at("rewards").get<std::vector<std::vector<double>>>();
        mdp.discount = j.at("discount").get<double>();
        mdp.initial_state = j.at("initial_state").get<std::size_t>();
        states = j.at("states").get<std::size_t>();
        actions = j.at("actions_per_state").get<std::vector<std::size_t>>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("mdp json: ") + e.what());
    }
    if (states != mdp.state_count())
        throw std::invalid_argument("mdp json: 'states' disagrees with rewards table");
    if (actions != mdp.actions_per_state())
        throw std::invalid_argument("mdp json: 'actions_per_state' disagrees with rewards table");
    return mdp;
}

}  // namespace actnet
