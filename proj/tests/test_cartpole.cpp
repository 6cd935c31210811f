#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "actnet/cartpole.hpp"

using namespace actnet;
using namespace actnet::cartpole;

namespace {

// Total mechanical energy with the pole's inertia (4/3) m l^2 about the
// pivot, measured from the hanging rest state.
double oscillation_energy(const ContinuousState& s, const CartPoleParams& p) {
    const double m = p.pole_mass, l = p.pole_length;
    const double kinetic = 0.5 * (p.cart_mass + m) * s.cart_velocity * s.cart_velocity +
                           m * l * s.cart_velocity * s.pole_angular_velocity * std::cos(s.pole_angle) +
                           (2.0 / 3.0) * m * l * l * s.pole_angular_velocity * s.pole_angular_velocity;
    return kinetic + m * p.gravity * l * (1.0 + std::cos(s.pole_angle));
}

ActionSubset single_action(std::size_t index) {
    ActionSubset s(kStateCount);
    for (std::size_t x = 0; x < kStateCount; ++x) s.insert(x, index);
    return s;
}

}  // namespace

TEST(ActionGrid, Endpoints) {
    const auto grid = action_grid();
    ASSERT_EQ(grid.size(), kActionCount);
    EXPECT_DOUBLE_EQ(grid.front(), -100.0);
    EXPECT_DOUBLE_EQ(grid[250], 0.0);
    EXPECT_DOUBLE_EQ(grid.back(), 100.0);
    EXPECT_DOUBLE_EQ(action_force(1), -99.6);
    for (std::size_t i = 0; i < kActionCount; ++i) EXPECT_EQ(grid[i], action_force(i));
    EXPECT_THROW(action_force(kActionCount), std::out_of_range);
}

TEST(Discretize, CenterAndClamping) {
    const auto d = Discretizer::symmetric();
    EXPECT_EQ(discretize({}, d), 62u);
    ContinuousState far{100.0, 50.0, 1.0, 50.0};
    EXPECT_EQ(discretize(far, d), kStateCount - 1);
    ContinuousState low{-100.0, -50.0, -1.0, -50.0};
    EXPECT_EQ(discretize(low, d), 0u);
    // cart position is ignored
    EXPECT_EQ(discretize({2.0, 0.0, 0.0, 0.0}, d), 62u);
}

TEST(Discretize, CoversEveryState) {
    const auto d = Discretizer::symmetric();
    std::set<std::size_t> seen;
    const double probes[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (double v : probes)
        for (double a : probes)
            for (double w : probes) seen.insert(discretize({0.0, 3.0 * v, 0.3 * a, 3.0 * w}, d));
    EXPECT_EQ(seen.size(), kStateCount);
}

TEST(Step, RestStateStaysPut) {
    const auto r = step({}, 0.0, CartPoleParams{});
    EXPECT_EQ(r.next_state, ContinuousState{});
    EXPECT_EQ(r.reward, 1.0);
    EXPECT_FALSE(r.terminated);
}

TEST(Step, PushFromRest) {
    // Frozen from the equations of motion with F = 10 at the rest state.
    const auto r = step({}, 10.0, CartPoleParams{});
    EXPECT_EQ(r.next_state.cart_position, 0.0);
    EXPECT_EQ(r.next_state.pole_angle, 0.0);
    EXPECT_NEAR(r.next_state.cart_velocity, 0.195121951, 1e-9);
    EXPECT_NEAR(r.next_state.pole_angular_velocity, -0.292682927, 1e-9);
}

TEST(Step, TerminationAndErrors) {
    const CartPoleParams p;
    const ContinuousState tipping{0.0, 0.0, 0.2, 2.0};
    const auto r = step(tipping, 0.0, p);
    EXPECT_TRUE(r.terminated);
    EXPECT_EQ(r.reward, 1.0);
    const ContinuousState outside{0.0, 0.0, 0.3, 0.0};
    const auto dead = step(outside, 50.0, p);
    EXPECT_EQ(dead.next_state, outside);
    EXPECT_EQ(dead.reward, 0.0);
    EXPECT_TRUE(dead.terminated);
    EXPECT_THROW(step({}, 100.5, p), std::invalid_argument);
    EXPECT_THROW(step({NAN, 0.0, 0.0, 0.0}, 0.0, p), std::invalid_argument);
}

TEST(Integrate, EnergyOfHangingPendulum) {
    const CartPoleParams p;
    const double dt = p.time_step;
    const double omega2 = p.gravity / (p.pole_length * (4.0 / 3.0 - p.pole_mass / (p.cart_mass + p.pole_mass)));
    const std::size_t steps = 500;
    ContinuousState s{0.0, 0.0, std::numbers::pi + 0.05, 0.0};
    const double e0 = oscillation_energy(s, p);

    // Explicit Euler inflates a linear oscillator's energy by (1 + omega^2 dt^2) per step.
    ContinuousState explicit_state = s, symplectic = s;
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        explicit_state = integrate(explicit_state, 0.0, p, Integrator::explicit_euler);
        symplectic = integrate(symplectic, 0.0, p, Integrator::semi_implicit_euler);
        const double e = oscillation_energy(symplectic, p) / e0;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    const double growth = oscillation_energy(explicit_state, p) / e0;
    const double analytic = std::pow(1.0 + omega2 * dt * dt, static_cast<double>(steps));
    EXPECT_GT(growth, 0.9 * analytic);
    EXPECT_LT(growth, 1.02 * analytic);
    EXPECT_GT(lo, 0.95);
    EXPECT_LT(hi, 1.05);
}

TEST(Env, TruncatesAtStepBudget) {
    CartPoleParams p;
    p.max_episode_steps = 10;
    CartPoleEnv env(p);
    env.reset({});
    for (int i = 0; i < 9; ++i) EXPECT_FALSE(env.step(0.0).truncated);
    const auto last = env.step(0.0);
    EXPECT_TRUE(last.truncated);
    EXPECT_FALSE(last.terminated);
    EXPECT_THROW(CartPoleEnv(CartPoleParams{.gravity = -1.0}), std::invalid_argument);
}

TEST(Family, ParametersWithinRanges) {
    for (auto d : {Difficulty::easy, Difficulty::medium}) {
        const auto spec = difficulty_spec(d);
        const auto family = make_family(d);
        EXPECT_EQ(family.dimension(), 3u);
        EXPECT_FALSE(family.has_resolver());
        const double nominal[3] = {spec.gravity, spec.pole_mass, spec.pole_length};
        for (std::uint64_t i = 0; i < 200; ++i) {
            const auto theta = sample_environment(family, RngSeed(i));
            ASSERT_EQ(theta.theta.size(), 3u);
            for (std::size_t j = 0; j < 3; ++j) {
                EXPECT_GE(theta.theta[j], nominal[j] * (1.0 - spec.variation));
                EXPECT_LE(theta.theta[j], nominal[j] * (1.0 + spec.variation));
            }
            const auto params = params_from(theta);
            EXPECT_EQ(params.gravity, theta.theta[0]);
            EXPECT_EQ(params.pole_mass, theta.theta[1]);
            EXPECT_EQ(params.pole_length, theta.theta[2]);
        }
    }
    EXPECT_EQ(sample_environment(make_family(Difficulty::easy), RngSeed(4)),
              sample_environment(make_family(Difficulty::easy), RngSeed(4)));
    EXPECT_DOUBLE_EQ(difficulty_spec(Difficulty::easy).variation, 0.05);
    EXPECT_DOUBLE_EQ(difficulty_spec(Difficulty::medium).variation, 0.10);
    EXPECT_EQ(parse_difficulty("medium"), Difficulty::medium);
    EXPECT_EQ(to_string(Difficulty::easy), "easy");
    EXPECT_THROW(parse_difficulty("hard"), std::invalid_argument);
}

TEST(QLearning, SingleZeroForceActionConverges) {
    // The cart never moves, so Q(62) climbs toward 1 / (1 - 0.99) until the
    // TD errors fall below the threshold.
    LearningSettings s;
    s.episodes = 200;
    s.start_noise = 0.0;
    const auto result = q_learning(CartPoleParams{}, single_action(250), s, RngSeed(1));
    EXPECT_TRUE(result.stopped_by_td);
    EXPECT_LT(result.episodes_run, 200u);
    ASSERT_EQ(result.q[62].size(), 1u);
    EXPECT_GT(result.q[62][0], 99.8);
    EXPECT_LE(result.q[62][0], 100.0);
    EXPECT_EQ(result.greedy_policy()[62], 250u);
}

TEST(QLearning, ValuesStayBoundedAndRunsRepeat) {
    LearningSettings s;
    s.episodes = 60;
    ActionSubset few(kStateCount);
    for (std::size_t x = 0; x < kStateCount; ++x)
        for (std::size_t a : {0u, 125u, 250u, 375u, 500u}) few.insert(x, a);
    const auto a = q_learning(CartPoleParams{}, few, s, RngSeed(7));
    const auto b = q_learning(CartPoleParams{}, few, s, RngSeed(7));
    EXPECT_EQ(a.q, b.q);
    EXPECT_EQ(a.steps, b.steps);
    for (const auto& row : a.q)
        for (double v : row) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 100.0 + 1e-9);
        }
    for (std::size_t x = 0; x < kStateCount; ++x) EXPECT_TRUE(few.contains(x, a.greedy_policy()[x]));
}

TEST(QLearning, RejectsBadSettings) {
    LearningSettings s;
    s.discount = 1.0;
    EXPECT_THROW(q_learning(CartPoleParams{}, full_action_set(), s, RngSeed(1)), std::invalid_argument);
    EXPECT_THROW(q_learning(CartPoleParams{}, ActionSubset(kStateCount), LearningSettings{}, RngSeed(1)),
                 std::invalid_argument);
    EXPECT_DOUBLE_EQ(LearningSettings{}.epsilon(0), 1.0);
    EXPECT_DOUBLE_EQ(LearningSettings{}.epsilon(9000), 0.05);
}

TEST(EvaluatePolicy, EquilibriumLastsFullEpisode) {
    const Policy zero(kStateCount, 250);
    EXPECT_EQ(evaluate_policy(CartPoleParams{}, zero, {}), 500.0);
}

TEST(EvaluatePolicy, MaxForceMatchesManualRollout) {
    const CartPoleParams p;
    const Policy push(kStateCount, kActionCount - 1);
    double expected = 0.0;
    ContinuousState s;
    for (std::size_t t = 0; t < p.max_episode_steps; ++t) {
        const auto r = step(s, 100.0, p);
        expected += r.reward;
        s = r.next_state;
        if (r.terminated) break;
    }
    EXPECT_GT(expected, 0.0);
    EXPECT_LT(expected, 50.0);
    EXPECT_EQ(evaluate_policy(p, push, {}), expected);
}

TEST(Experiment, TinyRunSchema) {
    ExperimentSettings s;
    s.ks = {2, 4};
    s.repetitions = 2;
    s.learning.episodes = 30;
    const auto rows = run_cartpole_experiment(s, RngSeed(3));
    ASSERT_EQ(rows.size(), 6u);
    std::set<std::uint64_t> seeds;
    for (const auto& r : rows) {
        seeds.insert(r.seed);
        EXPECT_GE(r.train_seconds, 0.0);
        EXPECT_GE(r.total_reward, 0.0);
        EXPECT_LE(r.total_reward, 500.0);
        if (r.mode == "full") {
            EXPECT_EQ(r.k, 0u);
            EXPECT_EQ(r.subset_size, kActionCount);
        } else {
            EXPECT_EQ(r.mode, "subset");
            EXPECT_GE(r.subset_size, 1u);
            EXPECT_LE(r.subset_size, r.k);
        }
    }
    EXPECT_EQ(rows[0].mode, "full");
    EXPECT_EQ(rows[1].k, 2u);
    EXPECT_EQ(rows[2].k, 4u);
    EXPECT_EQ(rows[3].repetition, 1u);
    EXPECT_EQ(seeds.size(), rows.size());

    const auto again = run_cartpole_experiment(s, RngSeed(3));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].total_reward, again[i].total_reward);
        EXPECT_EQ(rows[i].subset_size, again[i].subset_size);
    }
}
