#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "actnet/width.hpp"

using namespace actnet;

namespace {

// E max of N iid N(0, 1) by quadrature of x N phi(x) Phi(x)^(N-1).
double expected_max_quadrature(std::size_t count) {
    const double h = 1e-3;
    double total = 0.0;
    for (double x = -12.0; x <= 12.0; x += h) {
        const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        const double cdf = 0.5 * std::erfc(-x / std::numbers::sqrt2);
        total += x * static_cast<double>(count) * phi * std::pow(cdf, static_cast<double>(count) - 1.0);
    }
    return total * h;
}

PointSet basis(std::size_t n) {
    PointSet pts(n, Point(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) pts[i][i] = 1.0;
    return pts;
}

}  // namespace

TEST(Quadrature, KnownValues) {
    // Frozen against the closed forms E max_2 = 1/sqrt(pi), E max_3 = 3/(2 sqrt(pi)).
    EXPECT_NEAR(expected_max_quadrature(1), 0.0, 1e-9);
    EXPECT_NEAR(expected_max_quadrature(2), 1.0 / std::sqrt(std::numbers::pi), 1e-9);
    EXPECT_NEAR(expected_max_quadrature(3), 1.5 / std::sqrt(std::numbers::pi), 1e-9);
    EXPECT_NEAR(expected_max_quadrature(10), 1.5387527308, 1e-8);
}

TEST(GaussianWidth, SingletonIsExactlyZero) {
    const auto w = gaussian_width({{0.3, -1.2, 4.0}}, 1000, RngSeed(1));
    EXPECT_EQ(w.mean, 0.0);
    EXPECT_EQ(w.std_error, 0.0);
    const auto dup = gaussian_width({{1.0, 2.0}, {1.0, 2.0}}, 1000, RngSeed(1));
    EXPECT_EQ(dup.mean, 0.0);
}

TEST(GaussianWidth, SymmetricPair) {
    // E max(g, -g) = E|g| = sqrt(2/pi)
    const auto w = gaussian_width({{0.6, 0.8}, {-0.6, -0.8}}, 200000, RngSeed(2));
    EXPECT_NEAR(w.mean, std::sqrt(2.0 / std::numbers::pi), 4.0 * w.std_error);
    EXPECT_LT(w.std_error, 0.005);
}

TEST(GaussianWidth, BasisMatchesExpectedMaxAndBound) {
    for (std::size_t n : {2u, 5u, 10u}) {
        const auto w = gaussian_width(basis(n), 100000, RngSeed(n));
        EXPECT_NEAR(w.mean, expected_max_quadrature(n), 4.0 * w.std_error) << n;
        EXPECT_LE(w.mean, std::sqrt(2.0 * std::log(static_cast<double>(n))));
    }
}

TEST(GaussianWidth, TranslationInvariant) {
    PointSet pts{{0.0, 1.0}, {2.0, -1.0}, {0.5, 0.5}};
    PointSet shifted = pts;
    for (auto& p : shifted) p[0] += 10.0, p[1] -= 3.0;
    const auto a = gaussian_width(pts, 50000, RngSeed(3));
    const auto b = gaussian_width(shifted, 50000, RngSeed(4));
    EXPECT_NEAR(a.mean, b.mean, 4.0 * combined_std_error(a.std_error, b.std_error));
}

TEST(GaussianWidth, RejectsBadInput) {
    EXPECT_THROW(gaussian_width({}, 10, RngSeed(1)), std::invalid_argument);
    EXPECT_THROW(gaussian_width({{1.0}, {1.0, 2.0}}, 10, RngSeed(1)), std::invalid_argument);
    EXPECT_THROW(gaussian_width({{1.0}}, 0, RngSeed(1)), std::invalid_argument);
}

TEST(GaussianWidth, Deterministic) {
    const PointSet pts{{1.0, 0.0}, {0.0, 1.0}, {-1.0, -1.0}};
    const auto a = gaussian_width(pts, 20000, RngSeed(9));
    const auto b = gaussian_width(pts, 20000, RngSeed(9));
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(ExpectedMaxGaussian, SmallCounts) {
    EXPECT_NEAR(expected_max_gaussian(1, 100000, RngSeed(1)).mean, 0.0, 0.02);
    const auto two = expected_max_gaussian(2, 200000, RngSeed(2));
    EXPECT_NEAR(two.mean, 1.0 / std::sqrt(std::numbers::pi), 4.0 * two.std_error);
    const auto ten = expected_max_gaussian(10, 200000, RngSeed(3));
    EXPECT_NEAR(ten.mean, expected_max_quadrature(10), 4.0 * ten.std_error);
}

TEST(GaussianMaxTable, PrefixMaximaAgreeWithQuadrature) {
    const GaussianMaxTable table(10, 100000, RngSeed(5));
    EXPECT_EQ(table.size(), 10u);
    EXPECT_EQ(table.samples(), 100000u);
    for (std::size_t l = 1; l <= 10; ++l) {
        const auto e = table.expected_max(l);
        EXPECT_NEAR(e.mean, expected_max_quadrature(l), 4.0 * e.std_error + 1e-12) << l;
    }
}

TEST(GaussianMaxTable, GapAndLinearAreConsistent) {
    const GaussianMaxTable table(6, 40000, RngSeed(6));
    const auto g = table.gap(6);
    EXPECT_EQ(g.mean, 0.0);
    EXPECT_EQ(g.std_error, 0.0);
    const auto g2 = table.gap(2);
    EXPECT_NEAR(g2.mean, table.expected_max(6).mean - table.expected_max(2).mean, 1e-12);
    // Paired differences are tighter than independent ones.
    EXPECT_LT(g2.std_error, combined_std_error(table.expected_max(6).std_error, table.expected_max(2).std_error));
    std::vector<double> w(6, 0.0);
    w[3] = 1.0;
    EXPECT_NEAR(table.linear(w).mean, table.expected_max(4).mean, 1e-12);
    EXPECT_NEAR(table.linear(w).std_error, table.expected_max(4).std_error, 1e-12);
}

TEST(GaussianMaxTable, SharedCacheReturnsSameObject) {
    const auto a = GaussianMaxTable::shared(4, 1000, RngSeed(1));
    const auto b = GaussianMaxTable::shared(4, 1000, RngSeed(1));
    EXPECT_EQ(a.get(), b.get());
    EXPECT_NE(a.get(), GaussianMaxTable::shared(4, 1000, RngSeed(2)).get());
}

TEST(Geometry, DiameterAndSums) {
    const PointSet s{{0.0, 0.0}, {3.0, 4.0}, {1.0, 1.0}};
    EXPECT_DOUBLE_EQ(diameter(s), 5.0);
    EXPECT_EQ(diameter({{1.0, 2.0}}), 0.0);
    EXPECT_DOUBLE_EQ(euclidean_distance({1.0, 1.0}, {4.0, 5.0}), 5.0);
    const auto sum = minkowski_sum(s, {{1.0, 0.0}, {0.0, 1.0}});
    EXPECT_EQ(sum.size(), 6u);
    EXPECT_EQ(sum[0], (Point{1.0, 0.0}));
    EXPECT_EQ(negate(s)[1], (Point{-3.0, -4.0}));
    const auto diff = difference_set(s);
    EXPECT_EQ(diff.size(), 9u);
    EXPECT_DOUBLE_EQ(diameter(diff), 10.0);
}

TEST(Geometry, TransformAndOperatorNorm) {
    const Matrix a{{3.0, 0.0}, {0.0, 1.0}};
    EXPECT_NEAR(operator_norm(a), 3.0, 1e-7);
    EXPECT_NEAR(operator_norm({{1.0, 1.0}, {0.0, 0.0}}), std::sqrt(2.0), 1e-7);
    EXPECT_NEAR(operator_norm({{1.0, 2.0, 2.0}}), 3.0, 1e-7);
    EXPECT_EQ(operator_norm({{0.0, 0.0}}), 0.0);
    const auto t = transform({{1.0, 2.0}, {0.0, 1.0}, {1.0, 0.0}}, {{1.0, 1.0}});
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0], (Point{3.0, 1.0, 1.0}));
}
