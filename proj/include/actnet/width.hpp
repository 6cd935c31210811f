#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "actnet/rng.hpp"
#include "actnet/stats.hpp"

namespace actnet {

using Point = std::vector<double>;
using PointSet = std::vector<Point>;
using Matrix = std::vector<std::vector<double>>;  // row-major rows

double euclidean_distance(const Point& a, const Point& b);
double diameter(const PointSet& points);
PointSet negate(const PointSet& points);
/// {a + b : a in lhs, b in rhs}, enumerated explicitly.
PointSet minkowski_sum(const PointSet& lhs, const PointSet& rhs);
/// S (-) S = {a - b : a, b in S}.
PointSet difference_set(const PointSet& points);
PointSet transform(const Matrix& a, const PointSet& points);
/// Largest singular value by power iteration on A^T A.
double operator_norm(const Matrix& a, double tolerance = 1e-8, std::size_t max_iterations = 100000);

/// G(S) = E max_{s in S} <u, s>, u ~ N(0, I), by Monte Carlo.
WidthEstimate gaussian_width(const PointSet& points, std::size_t samples, const RngSeed& seed);

/// Monte-Carlo statistics of f(max_{s in S} <u, s>) for a canonical process.
RunningStats canonical_sup_statistics(const PointSet& points, std::size_t samples, const RngSeed& seed,
                                      const std::function<double(double)>& f);

/// E max of N independent standard normals.
WidthEstimate expected_max_gaussian(std::size_t count, std::size_t samples, const RngSeed& seed);

/// Prefix maxima M_L = max(theta_1..theta_L), L = 1..n, of shared draws, with
/// their covariance so paired differences and linear combinations carry
/// exact Monte-Carlo standard errors.
class GaussianMaxTable {
public:
    GaussianMaxTable(std::size_t n, std::size_t samples, const RngSeed& seed);

    /// Cached table for (n, samples, seed); computed once per process.
    static std::shared_ptr<const GaussianMaxTable> shared(std::size_t n, std::size_t samples, const RngSeed& seed);

    std::size_t size() const { return n_; }
    std::size_t samples() const { return samples_; }

    /// E max of L normals (L in 1..n).
    Estimate expected_max(std::size_t count) const;
    /// E max_n - E max_L, paired.
    Estimate gap(std::size_t count) const;
    /// sum_L weights[L-1] * E max_L.
    Estimate linear(const std::vector<double>& weights) const;

private:
    std::size_t n_;
    std::size_t samples_;
    std::vector<double> mean_;
    std::vector<double> comoment_;  // n x n, sum of centered products
};

}  // namespace actnet
