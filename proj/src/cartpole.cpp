#include "actnet/cartpole.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "actnet/subset.hpp"

namespace actnet::cartpole {

void CartPoleParams::validate() const {
    if (!(gravity > 0.0) || !(pole_mass > 0.0) || !(pole_length > 0.0) || !(cart_mass > 0.0) ||
        !(force_limit > 0.0) || !(time_step > 0.0) || !(angle_limit > 0.0) || !(position_limit > 0.0))
        throw std::invalid_argument("cart-pole parameters must be positive");
    if (angle_limit >= std::numbers::pi / 2.0) throw std::invalid_argument("angle limit must be below pi/2");
    if (max_episode_steps < 1) throw std::invalid_argument("max_episode_steps must be >= 1");
}

ContinuousState integrate(const ContinuousState& s, double force, const CartPoleParams& p, Integrator integrator) {
    const double total_mass = p.cart_mass + p.pole_mass;
    const double pole_moment = p.pole_mass * p.pole_length;
    const double cos_t = std::cos(s.pole_angle);
    const double sin_t = std::sin(s.pole_angle);
    const double temp = (force + pole_moment * s.pole_angular_velocity * s.pole_angular_velocity * sin_t) / total_mass;
    const double angle_acc = (p.gravity * sin_t - cos_t * temp) /
                             (p.pole_length * (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
    const double cart_acc = temp - pole_moment * angle_acc * cos_t / total_mass;

    ContinuousState n = s;
    const double dt = p.time_step;
    if (integrator == Integrator::explicit_euler) {
        n.cart_position += dt * s.cart_velocity;
        n.cart_velocity += dt * cart_acc;
        n.pole_angle += dt * s.pole_angular_velocity;
        n.pole_angular_velocity += dt * angle_acc;
    } else {
        n.cart_velocity += dt * cart_acc;
        n.cart_position += dt * n.cart_velocity;
        n.pole_angular_velocity += dt * angle_acc;
        n.pole_angle += dt * n.pole_angular_velocity;
    }
    return n;
}

bool out_of_bounds(const ContinuousState& s, const CartPoleParams& p) {
    return std::abs(s.pole_angle) > p.angle_limit || std::abs(s.cart_position) > p.position_limit;
}

StepResult step(const ContinuousState& s, double force, const CartPoleParams& params) {
    if (!std::isfinite(s.cart_position) || !std::isfinite(s.cart_velocity) || !std::isfinite(s.pole_angle) ||
        !std::isfinite(s.pole_angular_velocity))
        throw std::invalid_argument("cart-pole state is not finite");
    if (!(std::abs(force) <= params.force_limit)) throw std::invalid_argument("force exceeds the force limit");
    if (out_of_bounds(s, params)) return {s, 0.0, true};
    const ContinuousState next = integrate(s, force, params);
    return {next, 1.0, out_of_bounds(next, params)};
}

CartPoleEnv::CartPoleEnv(CartPoleParams params) : params_(params) { params_.validate(); }

void CartPoleEnv::reset(const ContinuousState& start) {
    state_ = start;
    steps_ = 0;
}

CartPoleEnv::Outcome CartPoleEnv::step(double force) {
    const StepResult r = cartpole::step(state_, force, params_);
    state_ = r.next_state;
    ++steps_;
    return {r.next_state, r.reward, r.terminated, !r.terminated && steps_ >= params_.max_episode_steps};
}

double action_force(std::size_t index) {
    if (index >= kActionCount) throw std::out_of_range("action index outside the 501-action grid");
    // integer arithmetic first so f_250 is exactly 0
    return static_cast<double>(static_cast<long>(index) * 2 - 500) / 5.0;
}

std::vector<double> action_grid() {
    std::vector<double> grid(kActionCount);
    for (std::size_t i = 0; i < kActionCount; ++i) grid[i] = action_force(i);
    return grid;
}

Discretizer Discretizer::symmetric(double velocity_outer, double angle_outer, double angular_velocity_outer) {
    Discretizer d;
    const std::array<double, 3> outer{velocity_outer, angle_outer, angular_velocity_outer};
    for (std::size_t i = 0; i < 3; ++i) d.edges[i] = {-outer[i], -outer[i] / 4.0, outer[i] / 4.0, outer[i]};
    d.validate();
    return d;
}

void Discretizer::validate() const {
    for (const auto& e : edges) {
        if (e.size() != 4) throw std::invalid_argument("each dimension needs 4 edges (5 bins)");
        for (std::size_t i = 1; i < e.size(); ++i)
            if (!(e[i] > e[i - 1])) throw std::invalid_argument("bin edges must be strictly increasing");
    }
}

std::size_t discretize(const ContinuousState& s, const Discretizer& d) {
    auto bin = [](const std::vector<double>& edges, double v) {
        return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
    };
    return bin(d.edges[0], s.cart_velocity) * 25 + bin(d.edges[1], s.pole_angle) * 5 +
           bin(d.edges[2], s.pole_angular_velocity);
}

Difficulty parse_difficulty(const std::string& name) {
    if (name == "easy") return Difficulty::easy;
    if (name == "medium") return Difficulty::medium;
    throw std::invalid_argument("unknown difficulty '" + name + "' (expected easy or medium)");
}

std::string to_string(Difficulty d) { return d == Difficulty::easy ? "easy" : "medium"; }

DifficultySpec difficulty_spec(Difficulty d) {
    if (d == Difficulty::easy) return {8.0, 0.08, 0.4, 0.05};
    return {9.8, 0.1, 0.5, 0.10};
}

EnvironmentFamily make_family(Difficulty d, std::optional<double> variation) {
    DifficultySpec spec = difficulty_spec(d);
    if (variation) {
        if (!(*variation >= 0.0 && *variation < 1.0)) throw std::invalid_argument("variation must be in [0, 1)");
        spec.variation = *variation;
    }
    auto sampler = [spec](Engine& engine) {
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::vector<double> theta{spec.gravity, spec.pole_mass, spec.pole_length};
        for (auto& v : theta) {
            const double u = unit(engine);
            if (spec.variation > 0.0) v *= 1.0 + spec.variation * u;
        }
        return EnvironmentParameter::vector(std::move(theta));
    };
    return EnvironmentFamily::continuous(std::vector<std::size_t>(kStateCount, kActionCount), 3, sampler);
}

CartPoleParams params_from(const EnvironmentParameter& theta, const CartPoleParams& base) {
    if (theta.theta.size() != 3) throw std::invalid_argument("cart-pole parameter must be (gravity, mass, length)");
    CartPoleParams p = base;
    p.gravity = theta.theta[0];
    p.pole_mass = theta.theta[1];
    p.pole_length = theta.theta[2];
    p.validate();
    return p;
}

void LearningSettings::validate() const {
    if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
    if (!(discount >= 0.0 && discount < 1.0)) throw std::invalid_argument("discount must be in [0, 1)");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw std::invalid_argument("learning rate must be in (0, 1]");
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0))
        throw std::invalid_argument("exploration rates must be in [0, 1]");
    if (!(epsilon_decay_fraction >= 0.0 && epsilon_decay_fraction <= 1.0))
        throw std::invalid_argument("epsilon decay fraction must be in [0, 1]");
    if (!(td_threshold > 0.0) || td_patience < 1) throw std::invalid_argument("TD stop rule needs positive values");
    if (!(start_noise >= 0.0)) throw std::invalid_argument("start noise must be nonnegative");
    discretizer.validate();
}

double LearningSettings::epsilon(std::size_t episode) const {
    const double horizon = epsilon_decay_fraction * static_cast<double>(episodes);
    if (horizon <= 0.0 || static_cast<double>(episode) >= horizon) return epsilon_end;
    return epsilon_start + (epsilon_end - epsilon_start) * static_cast<double>(episode) / horizon;
}

Policy LearningResult::greedy_policy() const {
    Policy pi(q.size());
    for (std::size_t s = 0; s < q.size(); ++s) pi[s] = actions.actions(s)[argmax_lowest(q[s])];
    return pi;
}

ActionSubset full_action_set() {
    const std::vector<std::size_t> counts(kStateCount, kActionCount);
    return ActionSubset::full(counts);
}

LearningResult q_learning(const CartPoleParams& params, const ActionSubset& actions, const LearningSettings& settings,
                          const RngSeed& seed) {
    params.validate();
    settings.validate();
    if (actions.state_count() != kStateCount) throw std::invalid_argument("action set must cover 125 states");
    if (actions.empty_somewhere()) throw std::invalid_argument("action set is empty at some state");
    if (!actions.admissible_for(std::vector<std::size_t>(kStateCount, kActionCount)))
        throw std::invalid_argument("action set holds indices outside the force grid");

    LearningResult result;
    result.actions = actions;
    result.q.resize(kStateCount);
    std::vector<std::vector<double>> forces(kStateCount);
    for (std::size_t s = 0; s < kStateCount; ++s) {
        result.q[s].assign(actions.size(s), 0.0);
        for (std::size_t a : actions.actions(s)) forces[s].push_back(action_force(a));
    }

    Engine engine = seed.engine();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> start(-settings.start_noise, settings.start_noise);
    CartPoleEnv env(params);
    std::size_t quiet_steps = 0;

    const auto begin = std::chrono::steady_clock::now();
    for (std::size_t episode = 0; episode < settings.episodes && !result.stopped_by_td; ++episode) {
        ContinuousState s0;
        s0.cart_position = start(engine);
        s0.cart_velocity = start(engine);
        s0.pole_angle = start(engine);
        s0.pole_angular_velocity = start(engine);
        env.reset(s0);
        std::size_t s = discretize(s0, settings.discretizer);
        const double eps = settings.epsilon(episode);
        ++result.episodes_run;

        while (true) {
            auto& row = result.q[s];
            std::size_t j;
            if (unit(engine) < eps) {
                j = std::uniform_int_distribution<std::size_t>(0, row.size() - 1)(engine);
            } else {
                j = argmax_lowest(row);
            }
            const auto out = env.step(forces[s][j]);
            ++result.steps;
            const std::size_t next = discretize(out.next_state, settings.discretizer);
            double target = out.reward;
            if (!out.terminated) target += settings.discount * *std::max_element(result.q[next].begin(), result.q[next].end());
            const double td = target - row[j];
            row[j] += settings.learning_rate * td;
            if (std::abs(td) < settings.td_threshold && ++quiet_steps >= settings.td_patience) {
                result.stopped_by_td = true;
                break;
            }
            if (out.terminated || out.truncated) break;
            s = next;
        }
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    return result;
}

double evaluate_policy(const CartPoleParams& params, const Policy& policy, const ContinuousState& initial,
                       const Discretizer& d) {
    if (policy.size() != kStateCount) throw std::invalid_argument("policy must cover 125 states");
    CartPoleEnv env(params);
    env.reset(initial);
    double total = 0.0;
    std::size_t s = discretize(initial, d);
    while (true) {
        const auto out = env.step(action_force(policy[s]));
        total += out.reward;
        if (out.terminated || out.truncated) break;
        s = discretize(out.next_state, d);
    }
    return total;
}

std::vector<ExperimentRow> run_cartpole_experiment(const ExperimentSettings& settings, const RngSeed& seed) {
    if (settings.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (settings.ks.empty()) throw std::invalid_argument("K list is empty");
    for (std::size_t k : settings.ks)
        if (k < 1) throw std::invalid_argument("every K must be >= 1");
    settings.learning.validate();
    settings.base.validate();

    const EnvironmentFamily family = make_family(settings.difficulty, settings.variation);
    const ActionSubset full = full_action_set();
    const ContinuousState origin{};
    const auto& learning = settings.learning;
    const auto& base = settings.base;

    ArgmaxOracle oracle = [&](const EnvironmentParameter& theta, const RngSeed& s) {
        return q_learning(params_from(theta, base), full, learning, s).greedy_policy();
    };

    std::vector<ExperimentRow> rows;
    for (std::size_t r = 0; r < settings.repetitions; ++r) {
        const RngSeed rep = seed.child(r);
        const CartPoleParams env = params_from(sample_environment(family, rep.labelled("environment")), base);

        const RngSeed full_seed = rep.labelled("full");
        const LearningResult baseline = q_learning(env, full, learning, full_seed);
        rows.push_back({0, r, "full", kActionCount, baseline.wall_seconds,
                        evaluate_policy(env, baseline.greedy_policy(), origin, learning.discretizer),
                        full_seed.fingerprint()});

        for (std::size_t k : settings.ks) {
            const RngSeed ks = rep.child(k);
            const SelectionTrace trace = approximate_epsilon_net(family, k, ks.labelled("selection"), oracle, 0.0);
            const RngSeed train_seed = ks.labelled("train");
            const LearningResult learned = q_learning(env, trace.subset, learning, train_seed);
            rows.push_back({k, r, "subset", trace.subset.max_size(), learned.wall_seconds,
                            evaluate_policy(env, learned.greedy_policy(), origin, learning.discretizer),
                            train_seed.fingerprint()});
        }
    }
    return rows;
}

}  // namespace actnet::cartpole
