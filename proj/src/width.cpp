#include "actnet/width.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "actnet/parallel.hpp"

namespace actnet {

namespace {

struct FlatPoints {
    std::size_t dim = 0;
    std::size_t count = 0;
    std::vector<double> data;
};

FlatPoints flatten(const PointSet& points) {
    if (points.empty()) throw std::invalid_argument("point set is empty");
    FlatPoints f;
    f.dim = points.front().size();
    f.count = points.size();
    f.data.reserve(f.dim * f.count);
    for (const auto& p : points) {
        if (p.size() != f.dim) throw std::invalid_argument("points have different dimensions");
        f.data.insert(f.data.end(), p.begin(), p.end());
    }
    return f;
}

}  // namespace

double euclidean_distance(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw std::invalid_argument("points have different dimensions");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double diameter(const PointSet& points) {
    double d = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, euclidean_distance(points[i], points[j]));
    return d;
}

PointSet negate(const PointSet& points) {
    PointSet out = points;
    for (auto& p : out)
        for (auto& v : p) v = -v;
    return out;
}

PointSet minkowski_sum(const PointSet& lhs, const PointSet& rhs) {
    PointSet out;
    out.reserve(lhs.size() * rhs.size());
    for (const auto& a : lhs)
        for (const auto& b : rhs) {
            if (a.size() != b.size()) throw std::invalid_argument("points have different dimensions");
            Point s(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
            out.push_back(std::move(s));
        }
    return out;
}

PointSet difference_set(const PointSet& points) { return minkowski_sum(points, negate(points)); }

PointSet transform(const Matrix& a, const PointSet& points) {
    PointSet out;
    for (const auto& p : points) {
        Point q(a.size(), 0.0);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (a[r].size() != p.size()) throw std::invalid_argument("matrix/point dimension mismatch");
            for (std::size_t c = 0; c < p.size(); ++c) q[r] += a[r][c] * p[c];
        }
        out.push_back(std::move(q));
    }
    return out;
}

double operator_norm(const Matrix& a, double tolerance, std::size_t max_iterations) {
    if (a.empty() || a.front().empty()) throw std::invalid_argument("operator_norm of an empty matrix");
    const std::size_t cols = a.front().size();
    std::vector<double> v(cols, 1.0 / std::sqrt(static_cast<double>(cols))), av(a.size()), next(cols);
    double sigma = 0.0;
    for (std::size_t it = 0; it < max_iterations; ++it) {
        for (std::size_t r = 0; r < a.size(); ++r) {
            av[r] = 0.0;
            for (std::size_t c = 0; c < cols; ++c) av[r] += a[r][c] * v[c];
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t r = 0; r < a.size(); ++r)
            for (std::size_t c = 0; c < cols; ++c) next[c] += a[r][c] * av[r];
        double norm = 0.0;
        for (double x : next) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        const double estimate = std::sqrt(norm);  // ||A^T A v|| -> sigma^2
        for (std::size_t c = 0; c < cols; ++c) v[c] = next[c] / norm;
        if (std::abs(estimate - sigma) <= tolerance * std::max(1.0, estimate)) return estimate;
        sigma = estimate;
    }
    return sigma;
}

RunningStats canonical_sup_statistics(const PointSet& points, std::size_t samples, const RngSeed& seed,
                                      const std::function<double(double)>& f) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const FlatPoints flat = flatten(points);
    return monte_carlo(samples, seed, [&](Engine& engine) {
        thread_local std::vector<double> u;
        u.resize(flat.dim);
        std::normal_distribution<double> normal;
        for (auto& x : u) x = normal(engine);
        double best = -std::numeric_limits<double>::infinity();
        const double* p = flat.data.data();
        for (std::size_t k = 0; k < flat.count; ++k, p += flat.dim) {
            double dot = 0.0;
            for (std::size_t i = 0; i < flat.dim; ++i) dot += p[i] * u[i];
            best = std::max(best, dot);
        }
        return f(best);
    });
}

WidthEstimate gaussian_width(const PointSet& points, std::size_t samples, const RngSeed& seed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    flatten(points);  // validates shape
    // A single point gives a zero-mean linear functional: the width is exactly 0.
    if (std::all_of(points.begin(), points.end(), [&](const Point& p) { return p == points.front(); }))
        return {0.0, 0.0, samples};
    return canonical_sup_statistics(points, samples, seed, [](double s) { return s; }).estimate();
}

WidthEstimate expected_max_gaussian(std::size_t count, std::size_t samples, const RngSeed& seed) {
    if (count < 1) throw std::invalid_argument("expected_max_gaussian: N must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    return monte_carlo(samples, seed, [count](Engine& engine) {
               std::normal_distribution<double> normal;
               double best = -std::numeric_limits<double>::infinity();
               for (std::size_t i = 0; i < count; ++i) best = std::max(best, normal(engine));
               return best;
           }).estimate();
}

GaussianMaxTable::GaussianMaxTable(std::size_t n, std::size_t samples, const RngSeed& seed)
    : n_(n), samples_(samples), mean_(n, 0.0), comoment_(n * n, 0.0) {
    if (n < 1) throw std::invalid_argument("GaussianMaxTable: n must be >= 1");
    if (samples < 2) throw std::invalid_argument("GaussianMaxTable: need at least two samples");

    struct Block {
        double count = 0.0;
        std::vector<double> mean, comoment;
    };
    std::vector<Block> blocks(block_count(samples));
    for_each_block(samples, seed, [&](std::size_t b, std::size_t, std::size_t count, Engine& engine) {
        std::normal_distribution<double> normal;
        std::vector<double> rows(count * n);
        for (std::size_t s = 0; s < count; ++s) {
            double running = -std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < n; ++l) {
                running = std::max(running, normal(engine));
                rows[s * n + l] = running;
            }
        }
        Block& blk = blocks[b];
        blk.count = static_cast<double>(count);
        blk.mean.assign(n, 0.0);
        blk.comoment.assign(n * n, 0.0);
        for (std::size_t s = 0; s < count; ++s)
            for (std::size_t l = 0; l < n; ++l) blk.mean[l] += rows[s * n + l];
        for (auto& m : blk.mean) m /= blk.count;
        for (std::size_t s = 0; s < count; ++s)
            for (std::size_t i = 0; i < n; ++i) {
                const double di = rows[s * n + i] - blk.mean[i];
                for (std::size_t j = 0; j < n; ++j) blk.comoment[i * n + j] += di * (rows[s * n + j] - blk.mean[j]);
            }
    });

    double total = 0.0;
    for (const auto& blk : blocks) {
        if (total == 0.0) {
            mean_ = blk.mean;
            comoment_ = blk.comoment;
            total = blk.count;
            continue;
        }
        const double merged = total + blk.count;
        std::vector<double> delta(n);
        for (std::size_t i = 0; i < n; ++i) delta[i] = blk.mean[i] - mean_[i];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                comoment_[i * n + j] += blk.comoment[i * n + j] + delta[i] * delta[j] * total * blk.count / merged;
        for (std::size_t i = 0; i < n; ++i) mean_[i] += delta[i] * blk.count / merged;
        total = merged;
    }
}

std::shared_ptr<const GaussianMaxTable> GaussianMaxTable::shared(std::size_t n, std::size_t samples,
                                                                 const RngSeed& seed) {
    using Key = std::tuple<std::size_t, std::size_t, std::uint64_t, std::uint64_t>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const GaussianMaxTable>> cache;
    const Key key{n, samples, seed.seed, seed.stream};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto table = std::make_shared<const GaussianMaxTable>(n, samples, seed);
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(table)).first->second;
}

Estimate GaussianMaxTable::linear(const std::vector<double>& weights) const {
    if (weights.size() != n_) throw std::invalid_argument("GaussianMaxTable::linear: weight size mismatch");
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        mean += weights[i] * mean_[i];
        for (std::size_t j = 0; j < n_; ++j) var += weights[i] * weights[j] * comoment_[i * n_ + j];
    }
    var = std::max(0.0, var / static_cast<double>(samples_ - 1));
    return {mean, std::sqrt(var / static_cast<double>(samples_)), samples_};
}

Estimate GaussianMaxTable::expected_max(std::size_t count) const {
    if (count < 1 || count > n_) throw std::out_of_range("GaussianMaxTable: L outside 1..n");
    std::vector<double> w(n_, 0.0);
    w[count - 1] = 1.0;
    return linear(w);
}

Estimate GaussianMaxTable::gap(std::size_t count) const {
    if (count < 1 || count > n_) throw std::out_of_range("GaussianMaxTable: L outside 1..n");
    std::vector<double> w(n_, 0.0);
    w[n_ - 1] += 1.0;
    w[count - 1] -= 1.0;
    return linear(w);
}

}  // namespace actnet
