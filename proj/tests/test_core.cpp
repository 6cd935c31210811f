#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "actnet/families.hpp"
#include "actnet/family.hpp"
#include "actnet/mdp.hpp"
#include "actnet/parallel.hpp"
#include "actnet/rng.hpp"
#include "actnet/stats.hpp"

using namespace actnet;

namespace {

bool mentions(const ValidationReport& r, const std::string& needle) {
    for (const auto& v : r.violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(ValidateMdp, FirstTwoStateMdpIsValid) {
    EXPECT_TRUE(validate_mdp(first_two_state_mdp()).ok());
    EXPECT_TRUE(validate_mdp(second_two_state_mdp()).ok());
}

TEST(ValidateMdp, ShortRowIsReported) {
    TabularMDP mdp = first_two_state_mdp();
    mdp.transitions[1][0] = {0.5, 0.4};
    const auto report = validate_mdp(mdp);
    ASSERT_FALSE(report.ok());
    EXPECT_TRUE(mentions(report, "(1,0)"));
    EXPECT_TRUE(mentions(report, "sum"));
}

TEST(ValidateMdp, UnitDiscountIsReported) {
    TabularMDP mdp = first_two_state_mdp();
    mdp.discount = 1.0;
    const auto report = validate_mdp(mdp);
    ASSERT_FALSE(report.ok());
    EXPECT_TRUE(mentions(report, "discount"));
    EXPECT_THROW(require_valid(mdp), std::invalid_argument);
}

TEST(ValidateMdp, IndexAndShapeViolations) {
    TabularMDP mdp = first_two_state_mdp();
    mdp.initial_state = 7;
    mdp.transitions[0][1] = {1.0};
    mdp.transitions[1][1] = {1.5, -0.5};
    const auto report = validate_mdp(mdp);
    EXPECT_GE(report.violations.size(), 3u);
    EXPECT_TRUE(mentions(report, "initial"));
    EXPECT_TRUE(mentions(report, "negative"));
}

TEST(MdpJson, RoundTrip) {
    Engine engine = RngSeed(3).engine();
    const std::vector<std::size_t> actions{2, 3, 1};
    const TabularMDP mdp = random_tabular_mdp(3, actions, 0.7, engine);
    EXPECT_TRUE(validate_mdp(mdp).ok());
    EXPECT_EQ(mdp_from_json(to_json(mdp)), mdp);
    EXPECT_THROW(mdp_from_json("{\"states\": 2}"), std::invalid_argument);
}

TEST(RandomMdp, RowsSumToOne) {
    Engine engine = RngSeed(11).engine();
    for (int i = 0; i < 50; ++i) {
        const std::vector<std::size_t> actions{5, 5, 5, 5, 5};
        const TabularMDP mdp = random_tabular_mdp(5, actions, 0.9, engine);
        EXPECT_TRUE(validate_mdp(mdp).ok());
    }
}

TEST(ActionSubsetTest, SortedDeduplicatedAdmissible) {
    ActionSubset s(2);
    s.insert(0, 3);
    s.insert(0, 1);
    s.insert(0, 3);
    s.insert(1, 0);
    EXPECT_EQ(s.actions(0), (std::vector<std::size_t>{1, 3}));
    EXPECT_TRUE(s.contains(0, 3));
    EXPECT_FALSE(s.contains(1, 3));
    EXPECT_EQ(s.max_size(), 2u);
    EXPECT_EQ(s.total_size(), 3u);
    const std::vector<std::size_t> wide{4, 1}, narrow{3, 1};
    EXPECT_TRUE(s.admissible_for(wide));
    EXPECT_FALSE(s.admissible_for(narrow));
    EXPECT_FALSE(s.empty_somewhere());
    EXPECT_TRUE(ActionSubset(3).empty_somewhere());
    EXPECT_EQ(ActionSubset::from_lists({{2, 2, 0}}).actions(0), (std::vector<std::size_t>{0, 2}));
}

TEST(Rng, SameSeedSameSequence) {
    Engine a = RngSeed(42, 7).engine(), b = RngSeed(42, 7).engine();
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, ChildrenAreDistinct) {
    const RngSeed root(5);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t i = 0; i < 200; ++i) firsts.insert(root.child(i).engine()());
    firsts.insert(root.labelled("a").engine()());
    firsts.insert(root.labelled("b").engine()());
    EXPECT_EQ(firsts.size(), 202u);
    EXPECT_EQ(root.child(3), root.child(3));
    EXPECT_NE(root.child(3).fingerprint(), root.child(4).fingerprint());
}

TEST(SampleEnvironment, DegenerateFamilyAlwaysFirst) {
    const auto family = two_mdp_family(1.0);
    for (std::uint64_t i = 0; i < 100; ++i)
        EXPECT_EQ(sample_environment(family, RngSeed(9).child(i)), EnvironmentParameter::finite(0));
}

TEST(SampleEnvironment, FairFamilyReproducibleAndBalanced) {
    const auto family = two_mdp_family(0.5);
    std::vector<EnvironmentParameter> first, second;
    for (std::uint64_t i = 0; i < 100; ++i) {
        first.push_back(sample_environment(family, RngSeed(21).child(i)));
        second.push_back(sample_environment(family, RngSeed(21).child(i)));
    }
    EXPECT_EQ(first, second);
    double hits = 0;
    for (const auto& p : first) hits += (*p.id == 0);
    // binomial(100, 0.5): standard error 0.05
    EXPECT_NEAR(hits / 100.0, 0.5, 3 * 0.05);
}

TEST(SampleEnvironment, VectorFamilyDimension) {
    const auto family = iid_bandit_family(3);
    const auto theta = sample_environment(family, RngSeed(1));
    EXPECT_FALSE(theta.id.has_value());
    EXPECT_EQ(theta.theta.size(), 3u);
}

TEST(SampleEnvironment, WithoutReplacementExhausts) {
    const auto family = two_mdp_family(0.5);
    const auto both = sample_without_replacement(family, 2, RngSeed(4));
    ASSERT_EQ(both.size(), 2u);
    EXPECT_NE(both[0], both[1]);
    EXPECT_THROW(sample_without_replacement(family, 3, RngSeed(4)), std::out_of_range);
}

TEST(Partition, MassesMustFormDistribution) {
    EXPECT_NO_THROW(validate_partition(two_mdp_partition(0.3)));
    auto bad = two_mdp_partition(0.3);
    bad.masses = {0.3, 0.6};
    EXPECT_THROW(validate_partition(bad), std::invalid_argument);
    bad.masses = {1.2, -0.2};
    EXPECT_THROW(validate_partition(bad), std::invalid_argument);
}

TEST(Partition, IidClustersAndFeatures) {
    auto p = iid_bandit_partition(10, 5);
    EXPECT_NO_THROW(validate_partition(p));
    EXPECT_EQ(p.action_clusters[0][2], (std::vector<std::size_t>{4, 5}));
    attach_features(p, iid_bandit_family(10));
    ASSERT_EQ(p.cluster_points[0][2].size(), 2u);
    EXPECT_EQ(p.cluster_points[0][2][1][5], 1.0);
    EXPECT_THROW(iid_bandit_partition(10, 3), std::invalid_argument);
}

TEST(Stats, MergeMatchesSequential) {
    Engine engine = RngSeed(8).engine();
    std::normal_distribution<double> normal(3.0, 2.0);
    RunningStats all, left, right;
    for (int i = 0; i < 1000; ++i) {
        const double v = normal(engine);
        all.add(v);
        (i < 400 ? left : right).add(v);
    }
    left.merge(right);
    EXPECT_EQ(left.count(), all.count());
    EXPECT_NEAR(left.mean(), all.mean(), 1e-12 * std::abs(all.mean()));
    EXPECT_NEAR(left.variance(), all.variance(), 1e-12 * all.variance());
}

TEST(Parallel, MonteCarloIndependentOfWorkerCount) {
    auto draw = [](Engine& e) { return std::normal_distribution<double>()(e); };
    set_worker_count(1);
    const auto one = monte_carlo(50'000, RngSeed(77), draw);
    set_worker_count(4);
    const auto four = monte_carlo(50'000, RngSeed(77), draw);
    set_worker_count(0);
    EXPECT_EQ(one.mean(), four.mean());
    EXPECT_EQ(one.variance(), four.variance());
}

TEST(Parallel, ExceptionsPropagate) {
    EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                     if (i == 6) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}
