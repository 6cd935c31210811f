#pragma once

#include <cstddef>
#include <span>

namespace actnet {

/// Mean with its Monte-Carlo standard error.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Gaussian-width estimates share the Estimate layout.
using WidthEstimate = Estimate;

/// Welford accumulator with Chan et al. pairwise merge.
class RunningStats {
public:
    void add(double x);
    void merge(const RunningStats& other);

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased sample variance; 0 for fewer than two samples.
    double variance() const;
    double std_error() const;
    Estimate estimate() const { return {mean(), std_error(), count()}; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

RunningStats summarize(std::span<const double> values);

/// Standard error of a difference of independent estimates.
double combined_std_error(double a, double b);

}  // namespace actnet
