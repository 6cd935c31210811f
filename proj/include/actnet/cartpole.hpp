#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actnet/family.hpp"
#include "actnet/mdp.hpp"
#include "actnet/rng.hpp"

namespace actnet::cartpole {

/// 12 degrees.
inline constexpr double kDefaultAngleLimit = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;

struct CartPoleParams {
    double gravity = 9.8;
    double pole_mass = 0.1;
    /// Half the pole length, as in the classic benchmark.
    double pole_length = 0.5;
    double cart_mass = 1.0;
    double force_limit = 100.0;
    double time_step = 0.02;
    double angle_limit = kDefaultAngleLimit;
    double position_limit = 2.4;
    std::size_t max_episode_steps = 500;

    /// Throws std::invalid_argument on non-positive quantities or an angle
    /// limit >= pi/2.
    void validate() const;
};

struct ContinuousState {
    double cart_position = 0.0;
    double cart_velocity = 0.0;
    double pole_angle = 0.0;
    double pole_angular_velocity = 0.0;

    friend bool operator==(const ContinuousState&, const ContinuousState&) = default;
};

enum class Integrator { explicit_euler, semi_implicit_euler };

/// One integration step of the frictionless equations of motion, without any
/// termination logic.
ContinuousState integrate(const ContinuousState& s, double force, const CartPoleParams& params,
                          Integrator integrator = Integrator::explicit_euler);

bool out_of_bounds(const ContinuousState& s, const CartPoleParams& params);

struct StepResult {
    ContinuousState next_state;
    double reward = 0.0;
    bool terminated = false;
};

/// A state already outside the limits terminates with reward 0 and no motion.
/// Otherwise the state advances, the reward is 1, and the limits are checked
/// on the new state. Throws on |force| > force_limit or a non-finite state.
StepResult step(const ContinuousState& s, double force, const CartPoleParams& params);

/// Episode wrapper adding the step budget.
class CartPoleEnv {
public:
    explicit CartPoleEnv(CartPoleParams params);

    const CartPoleParams& params() const { return params_; }
    const ContinuousState& state() const { return state_; }
    void reset(const ContinuousState& start);

    struct Outcome {
        ContinuousState next_state;
        double reward = 0.0;
        bool terminated = false;  // pole fell or cart left the track
        bool truncated = false;   // step budget exhausted
    };
    Outcome step(double force);

private:
    CartPoleParams params_;
    ContinuousState state_;
    std::size_t steps_ = 0;
};

inline constexpr std::size_t kActionCount = 501;
inline constexpr std::size_t kStateCount = 125;

/// f_i = -100 + 0.4 i, i = 0..500.
std::vector<double> action_grid();
double action_force(std::size_t index);

/// Five bins each for cart velocity, pole angle and angular velocity; cart
/// position is ignored.
struct Discretizer {
    std::array<std::vector<double>, 3> edges;

    /// Edges at -outer, -outer/4, outer/4, outer.
    static Discretizer symmetric(double velocity_outer = 2.0, double angle_outer = kDefaultAngleLimit,
                                 double angular_velocity_outer = 2.0);
    void validate() const;
};

/// bin(velocity) * 25 + bin(angle) * 5 + bin(angular velocity); values outside
/// the outer edges fall in the end bins.
std::size_t discretize(const ContinuousState& s, const Discretizer& d);

enum class Difficulty { easy, medium };
Difficulty parse_difficulty(const std::string& name);
std::string to_string(Difficulty d);

struct DifficultySpec {
    double gravity;
    double pole_mass;
    double pole_length;
    double variation;  // relative half-width of the uniform perturbation
};
DifficultySpec difficulty_spec(Difficulty d);

/// Continuous family over theta = (gravity, pole_mass, pole_length), each
/// drawn uniformly within +-variation of the difficulty's nominal value.
/// No exact resolver: optimal actions come from a learning oracle.
EnvironmentFamily make_family(Difficulty d, std::optional<double> variation = std::nullopt);

/// Physical parameters of one family draw on top of `base`.
CartPoleParams params_from(const EnvironmentParameter& theta, const CartPoleParams& base = {});

struct LearningSettings {
    std::size_t episodes = 10'000;
    double discount = 0.99;
    double learning_rate = 0.1;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    /// Fraction of episodes over which epsilon decays linearly.
    double epsilon_decay_fraction = 0.5;
    double td_threshold = 1e-3;
    std::size_t td_patience = 5;
    /// Training episodes start uniformly within +-start_noise in every coordinate.
    double start_noise = 0.05;
    Discretizer discretizer = Discretizer::symmetric();

    void validate() const;
    double epsilon(std::size_t episode) const;
};

struct LearningResult {
    /// q[s][j] is the value of actions(s)[j]
    std::vector<std::vector<double>> q;
    ActionSubset actions;
    std::size_t episodes_run = 0;
    std::size_t steps = 0;
    bool stopped_by_td = false;
    double wall_seconds = 0.0;

    /// Greedy grid action per discretized state (ties -> lowest grid index).
    Policy greedy_policy() const;
};

/// Tabular Q-learning restricted to `actions` (grid indices per discretized
/// state). Training stops after settings.episodes episodes or once
/// td_patience steps in total had |TD error| < td_threshold.
LearningResult q_learning(const CartPoleParams& params, const ActionSubset& actions, const LearningSettings& settings,
                          const RngSeed& seed);

ActionSubset full_action_set();

/// Total reward of one greedy rollout from `initial`.
double evaluate_policy(const CartPoleParams& params, const Policy& policy, const ContinuousState& initial,
                       const Discretizer& d = Discretizer::symmetric());

struct ExperimentSettings {
    Difficulty difficulty = Difficulty::easy;
    std::optional<double> variation;
    std::vector<std::size_t> ks{3, 5, 8, 10, 12, 15, 20};
    std::size_t repetitions = 30;
    LearningSettings learning;
    CartPoleParams base;
};

struct ExperimentRow {
    std::size_t k = 0;  // 0 for the full-space baseline
    std::size_t repetition = 0;
    std::string mode;  // "full" or "subset"
    std::size_t subset_size = 0;
    double train_seconds = 0.0;
    double total_reward = 0.0;
    std::uint64_t seed = 0;
};

/// Per repetition: sample an evaluation environment and train on it with all
/// 501 actions once; then for every K select a subset with the Q-learning
/// oracle, train on the same environment restricted to it, and evaluate both
/// greedy policies from the zero state.
std::vector<ExperimentRow> run_cartpole_experiment(const ExperimentSettings& settings, const RngSeed& seed);

}  // namespace actnet::cartpole
