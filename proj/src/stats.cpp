#include "actnet/stats.hpp"

#include <cmath>

namespace actnet {

void RunningStats::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    n_ += other.n_;
}

double RunningStats::variance() const {
    if (n_ < 2) return 0.0;
    return m2_ / static_cast<double>(n_ - 1);
}

double RunningStats::std_error() const {
    if (n_ == 0) return 0.0;
    return std::sqrt(variance() / static_cast<double>(n_));
}

RunningStats summarize(std::span<const double> values) {
    RunningStats s;
    for (double v : values) s.add(v);
    return s;
}

double combined_std_error(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace actnet
