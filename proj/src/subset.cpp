#include "actnet/subset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "actnet/parallel.hpp"

namespace actnet {

namespace {

std::vector<std::size_t> argmax_per_state(const QFunction& q) { return greedy_policy(q); }

double max_regret(const QFunction& q, const ActionSubset& subset) {
    const auto regret = state_regret(q, subset);
    return *std::max_element(regret.begin(), regret.end());
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

void require_subset(const EnvironmentFamily& family, const ActionSubset& subset) {
    if (!subset.admissible_for(family.actions_per_state()))
        throw std::invalid_argument("subset is not admissible for this family");
    if (subset.empty_somewhere()) throw std::invalid_argument("subset is empty at some state");
}

SelectionTrace collect(const EnvironmentFamily& family, std::size_t sample_count, const RngSeed& seed,
                       const ArgmaxOracle* oracle, double delta) {
    if (sample_count < 1) throw std::invalid_argument("epsilon_net: K must be >= 1");
    if (!oracle && !family.has_resolver()) throw std::invalid_argument("epsilon_net: family has no Q* resolver");

    SelectionTrace trace;
    trace.sample_count = sample_count;
    trace.draws.resize(sample_count);
    const bool audit = oracle && family.has_features() && family.has_resolver();
    const RngSeed oracle_seed = seed.labelled("oracle");

    parallel_for(sample_count, [&](std::size_t i) {
        SelectionDraw& draw = trace.draws[i];
        draw.parameter = sample_environment(family, seed.child(i));
        try {
            if (!oracle) {
                draw.actions = argmax_per_state(family.resolve(draw.parameter));
                return;
            }
            draw.actions = (*oracle)(draw.parameter, oracle_seed.child(i));
            if (draw.actions.size() != family.state_count())
                throw std::logic_error("oracle returned " + std::to_string(draw.actions.size()) + " actions for " +
                                       std::to_string(family.state_count()) + " states");
            for (std::size_t x = 0; x < draw.actions.size(); ++x)
                if (draw.actions[x] >= family.actions_per_state()[x])
                    throw std::logic_error("oracle returned an inadmissible action at state " + std::to_string(x));
            if (audit) {
                const auto exact = argmax_per_state(family.resolve(draw.parameter));
                for (std::size_t x = 0; x < exact.size(); ++x)
                    draw.feature_distance.push_back(
                        euclidean(family.feature(x, draw.actions[x]), family.feature(x, exact[x])));
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("selection draw " + std::to_string(i) + " failed: " + e.what());
        }
    });

    trace.subset = ActionSubset(family.state_count());
    for (std::size_t i = 0; i < trace.draws.size(); ++i) {
        const auto& draw = trace.draws[i];
        for (std::size_t x = 0; x < draw.actions.size(); ++x) trace.subset.insert(x, draw.actions[x]);
        for (std::size_t x = 0; x < draw.feature_distance.size(); ++x)
            if (draw.feature_distance[x] > delta) {
                std::ostringstream os;
                os << "draw " << i << " state " << x << ": oracle action " << draw.actions[x]
                   << " is at feature distance " << draw.feature_distance[x] << " > delta " << delta;
                trace.warnings.push_back(os.str());
            }
    }
    return trace;
}

}  // namespace

SelectionTrace epsilon_net(const EnvironmentFamily& family, std::size_t sample_count, const RngSeed& seed) {
    return collect(family, sample_count, seed, nullptr, 0.0);
}

SelectionTrace approximate_epsilon_net(const EnvironmentFamily& family, std::size_t sample_count,
                                       const RngSeed& seed, const ArgmaxOracle& oracle, double delta) {
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
    return collect(family, sample_count, seed, &oracle, delta);
}

Estimate expected_max_regret(const EnvironmentFamily& family, const ActionSubset& subset, std::size_t samples,
                             const RngSeed& seed) {
    if (samples < 1) throw std::invalid_argument("expected_max_regret: samples must be >= 1");
    require_subset(family, subset);
    if (family.is_finite()) {
        std::vector<double> per_member(family.support_size());
        for (std::size_t id = 0; id < per_member.size(); ++id)
            per_member[id] = max_regret(family.resolve(EnvironmentParameter::finite(id)), subset);
        return monte_carlo(samples, seed, [&](Engine& e) { return per_member[*family.sample(e).id]; }).estimate();
    }
    return monte_carlo(samples, seed, [&](Engine& e) {
               return max_regret(family.resolve(family.sample(e)), subset);
           }).estimate();
}

double expected_max_regret_exact(const EnvironmentFamily& family, const ActionSubset& subset) {
    if (!family.is_finite()) throw std::invalid_argument("exact enumeration needs a finite family");
    require_subset(family, subset);
    const auto probs = family.support_probabilities();
    double total = 0.0;
    for (std::size_t id = 0; id < probs.size(); ++id)
        if (probs[id] > 0.0) total += probs[id] * max_regret(family.resolve(EnvironmentParameter::finite(id)), subset);
    return total;
}

PerformanceLossEstimate expected_performance_loss(const EnvironmentFamily& family, std::size_t sample_count,
                                                  const RngSeed& seed, std::size_t replications,
                                                  std::size_t samples_per_replication,
                                                  const SolverSettings& settings) {
    if (replications < 1 || samples_per_replication < 1)
        throw std::invalid_argument("expected_performance_loss: replications and samples must be >= 1");
    if (!family.has_environment()) throw std::invalid_argument("family cannot build environments");

    auto loss = [&](const EnvironmentParameter& theta, const ActionSubset& subset) {
        const TabularMDP mdp = family.environment(theta);
        const QFunction qstar = family.resolve(theta);
        const Policy pi = greedy_policy(qstar, subset);
        const VSolution v = policy_evaluation(mdp, pi, settings);
        const std::size_t x0 = mdp.initial_state;
        const double best = *std::max_element(qstar.values[x0].begin(), qstar.values[x0].end());
        return best - v.v[x0];
    };

    std::vector<RunningStats> per_rep(replications);
    const RngSeed selection_seed = seed.labelled("selection");
    const RngSeed evaluation_seed = seed.labelled("evaluation");
    parallel_for(replications, [&](std::size_t r) {
        const SelectionTrace trace = epsilon_net(family, sample_count, selection_seed.child(r));
        Engine engine = evaluation_seed.child(r).engine();
        RunningStats stats;
        if (family.is_finite()) {
            std::vector<double> cached(family.support_size());
            std::vector<bool> known(cached.size(), false);
            for (std::size_t j = 0; j < samples_per_replication; ++j) {
                const auto theta = family.sample(engine);
                const std::size_t id = *theta.id;
                if (!known[id]) {
                    cached[id] = loss(theta, trace.subset);
                    known[id] = true;
                }
                stats.add(cached[id]);
            }
        } else {
            for (std::size_t j = 0; j < samples_per_replication; ++j) stats.add(loss(family.sample(engine), trace.subset));
        }
        per_rep[r] = stats;
    });

    PerformanceLossEstimate out;
    out.replications = replications;
    out.samples_per_replication = samples_per_replication;
    RunningStats across;
    for (const auto& s : per_rep) {
        out.replication_means.push_back(s.mean());
        across.add(s.mean());
    }
    out.mean = across.mean();
    out.std_error = replications > 1 ? across.std_error() : per_rep.front().std_error();
    return out;
}

std::vector<Estimate> missed_cluster_frequency(const EnvironmentFamily& family, const ClusterPartition& partition,
                                               std::size_t sample_count, std::size_t replications,
                                               const RngSeed& seed) {
    validate_partition(partition);
    if (sample_count < 1 || replications < 1) throw std::invalid_argument("missed_cluster_frequency: bad counts");
    std::vector<std::vector<char>> missed(replications, std::vector<char>(partition.cluster_count, 1));
    parallel_for(replications, [&](std::size_t r) {
        const RngSeed rep = seed.child(r);
        for (std::size_t i = 0; i < sample_count; ++i) {
            const std::size_t l = partition.assign(sample_environment(family, rep.child(i)));
            if (l >= partition.cluster_count) throw std::out_of_range("partition assign returned an invalid cluster");
            missed[r][l] = 0;
        }
    });
    std::vector<Estimate> out;
    for (std::size_t l = 0; l < partition.cluster_count; ++l) {
        RunningStats s;
        for (const auto& m : missed) s.add(m[l] ? 1.0 : 0.0);
        out.push_back(s.estimate());
    }
    return out;
}

void write_trace_jsonl(std::ostream& out, const SelectionTrace& trace) {
    for (std::size_t i = 0; i < trace.draws.size(); ++i) {
        const auto& d = trace.draws[i];
        nlohmann::ordered_json j;
        j["draw_index"] = i;
        if (d.parameter.id)
            j["parameter_id"] = *d.parameter.id;
        else {
            j["parameter_id"] = nullptr;
            j["theta"] = d.parameter.theta;
        }
        j["argmax_actions"] = d.actions;
        out << j.dump() << '\n';
    }
}

std::vector<TraceRecord> read_trace_jsonl(std::istream& in) {
    std::vector<TraceRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        TraceRecord r;
        r.draw_index = j.at("draw_index").get<std::size_t>();
        if (!j.at("parameter_id").is_null())
            r.parameter.id = j.at("parameter_id").get<std::size_t>();
        else
            r.parameter.theta = j.at("theta").get<std::vector<double>>();
        r.argmax_actions = j.at("argmax_actions").get<std::vector<std::size_t>>();
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace actnet
