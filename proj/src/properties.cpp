#include "actnet/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "actnet/bounds.hpp"
#include "actnet/parallel.hpp"

namespace actnet {

bool PropertyReport::passed() const { return failures() == 0; }

std::size_t PropertyReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const PropertyCheck& c) { return !c.passed; }));
}

std::string PropertyReport::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["passed"] = passed();
    j["failures"] = failures();
    auto& list = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        list.push_back({{"name", c.name},
                        {"fixture", c.fixture},
                        {"passed", c.passed},
                        {"margin", c.margin},
                        {"samples", c.samples},
                        {"std_error", c.std_error},
                        {"detail", c.detail}});
    return j.dump(2);
}

namespace {

PointSet random_cloud(std::size_t count, std::size_t dim, Engine& engine) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    Point center(dim);
    for (auto& c : center) c = shift(engine);
    PointSet cloud(count, Point(dim));
    for (auto& p : cloud)
        for (std::size_t i = 0; i < dim; ++i) p[i] = center[i] + normal(engine);
    return cloud;
}

PointSet scaled(PointSet points, double factor) {
    for (auto& p : points)
        for (auto& v : p) v *= factor;
    return points;
}

double max_norm(const PointSet& points) {
    double best = 0.0;
    for (const auto& p : points) {
        double s = 0.0;
        for (double v : p) s += v * v;
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

class Suite {
public:
    Suite(const PropertySuiteSettings& settings, PropertyReport& report) : s_(settings), report_(report) {}

    // a == b within sigmas combined standard errors
    void equal(const std::string& name, std::size_t fixture, const Estimate& a, const Estimate& b,
               const std::string& what) {
        const double se = combined_std_error(a.std_error, b.std_error);
        const double margin = s_.sigmas * se - std::abs(a.mean - b.mean);
        add(name, fixture, margin >= 0.0, margin, se,
            what + ": " + fmt(a.mean) + " vs " + fmt(b.mean));
    }

    // lhs <= rhs + sigmas * se
    void at_most(const std::string& name, std::size_t fixture, double lhs, double rhs, double se,
                 const std::string& what) {
        const double margin = rhs + s_.sigmas * se - lhs;
        add(name, fixture, margin >= 0.0, margin, se, what + ": " + fmt(lhs) + " <= " + fmt(rhs));
    }

    void add(const std::string& name, std::size_t fixture, bool passed, double margin, double se,
             std::string detail) {
        report_.checks.push_back({name, fixture, passed, margin, s_.samples, se, std::move(detail)});
    }

private:
    const PropertySuiteSettings& s_;
    PropertyReport& report_;
};

}  // namespace

PropertyReport run_property_suite(const RngSeed& seed, const PropertySuiteSettings& settings) {
    PropertyReport report;
    report.seed = seed.seed;
    Suite suite(settings, report);
    const std::size_t n = settings.samples;
    const auto& width = settings.width;

    for (std::size_t f = 0; f < settings.fixtures; ++f) {
        const RngSeed fs = seed.child(f);
        Engine engine = fs.labelled("fixture").engine();
        std::uniform_int_distribution<std::size_t> dim_dist(2, 6), size_dist(2, std::max<std::size_t>(2, settings.max_cloud));
        const std::size_t dim = dim_dist(engine);
        const PointSet s1 = random_cloud(size_dist(engine), dim, engine);
        const PointSet s2 = random_cloud(size_dist(engine), dim, engine);

        // Property 1: G(S) = G(-S)
        const Estimate g1 = width(s1, n, fs.child(1));
        suite.equal("width_symmetry", f, g1, width(negate(s1), n, fs.child(2)), "G(S) vs G(-S)");

        // Property 2: G(S1 + S2) = G(S1) + G(S2)
        const Estimate g2 = width(s2, n, fs.child(3));
        const Estimate gsum = width(minkowski_sum(s1, s2), n, fs.child(4));
        const Estimate parts{g1.mean + g2.mean, combined_std_error(g1.std_error, g2.std_error), n};
        suite.equal("width_minkowski_additivity", f, gsum, parts, "G(S1+S2) vs G(S1)+G(S2)");

        // Properties 3 and 4: diam/sqrt(2 pi) <= G(S) <= sqrt(n)/2 diam
        const double diam = diameter(s1);
        suite.at_most("width_diameter_upper", f, g1.mean, std::sqrt(static_cast<double>(dim)) / 2.0 * diam,
                      g1.std_error, "G(S) <= sqrt(n)/2 diam");
        suite.at_most("width_diameter_lower", f, diam / std::sqrt(2.0 * std::numbers::pi), g1.mean, g1.std_error,
                      "diam/sqrt(2 pi) <= G(S)");

        // Property 5: G(A S) <= ||A|| G(S)
        std::uniform_int_distribution<std::size_t> rows_dist(2, 6);
        std::normal_distribution<double> normal;
        Matrix a(rows_dist(engine), std::vector<double>(dim));
        for (auto& row : a)
            for (auto& v : row) v = normal(engine);
        const double norm = operator_norm(a);
        const Estimate gas = width(transform(a, s1), n, fs.child(5));
        suite.at_most("width_linear_map", f, gas.mean, norm * g1.mean,
                      combined_std_error(gas.std_error, norm * g1.std_error), "G(AS) <= ||A|| G(S)");

        // Squared-width bound; the cloud is rescaled to diameter in [1, 4].
        std::uniform_real_distribution<double> diam_target(1.0, 4.0);
        const PointSet sq_points = scaled(s1, diam_target(engine) / std::max(diam, 1e-12));
        const SquaredWidthCheck sq = squared_width_bound(sq_points, n, fs.child(6));
        suite.at_most("squared_width_bound", f, sq.lhs.mean, sq.rhs, sq.std_error,
                      "E[(max over S-S)^2] <= G(S-S)^2 + 4 diam");

        // E max of N correlated Gaussians with marginal std <= tau
        const double tau = max_norm(s2);
        const Estimate gmax = gaussian_width(s2, n, fs.child(7));
        if (s2.size() >= 2) {
            suite.at_most("expected_max_bound", f, gmax.mean,
                          tau * std::sqrt(2.0 * std::log(static_cast<double>(s2.size()))), gmax.std_error,
                          "E max <= tau sqrt(2 log N)");
        }

        // Borell-TIS: Pr[|sup - E sup| >= u] <= 2 exp(-u^2 / (2 eps^2)), eps = max ||s||
        std::vector<double> sups(n);
        const std::size_t d2 = s2.front().size();
        for_each_block(n, fs.child(8), [&](std::size_t, std::size_t first, std::size_t count, Engine& eng) {
            std::normal_distribution<double> z;
            std::vector<double> u(d2);
            for (std::size_t i = first; i < first + count; ++i) {
                for (auto& v : u) v = z(eng);
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& p : s2) {
                    double dot = 0.0;
                    for (std::size_t k = 0; k < d2; ++k) dot += p[k] * u[k];
                    best = std::max(best, dot);
                }
                sups[i] = best;
            }
        });
        const double mean_sup = summarize(sups).mean();
        for (int mult = 1; mult <= 3; ++mult) {
            const double u = mult * tau;
            const auto hits = std::count_if(sups.begin(), sups.end(),
                                            [&](double v) { return std::abs(v - mean_sup) >= u; });
            const double freq = static_cast<double>(hits) / static_cast<double>(n);
            const double bound = 2.0 * std::exp(-u * u / (2.0 * tau * tau));
            const double p = std::min(bound, 1.0);
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
            suite.at_most("borell_tis_tail_u" + std::to_string(mult), f, freq, bound, se,
                          "tail frequency at u = " + std::to_string(mult) + " eps");
        }
    }
    return report;
}

}  // namespace actnet
