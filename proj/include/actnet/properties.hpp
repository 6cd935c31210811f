#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "actnet/rng.hpp"
#include "actnet/stats.hpp"
#include "actnet/width.hpp"

namespace actnet {

struct PropertyCheck {
    std::string name;
    std::size_t fixture = 0;
    bool passed = false;
    /// Slack left before the check fails; negative on failure.
    double margin = 0.0;
    std::size_t samples = 0;
    double std_error = 0.0;
    std::string detail;
};

struct PropertyReport {
    std::uint64_t seed = 0;
    std::vector<PropertyCheck> checks;

    bool passed() const;
    std::size_t failures() const;
    std::string to_json() const;
};

using WidthEstimator = std::function<WidthEstimate(const PointSet&, std::size_t, const RngSeed&)>;

struct PropertySuiteSettings {
    std::size_t fixtures = 20;
    std::size_t samples = 100'000;
    std::size_t max_cloud = 20;  // points per random cloud (Minkowski sums stay <= max_cloud^2)
    double sigmas = 3.0;
    /// Estimator under test for the Gaussian-width properties.
    WidthEstimator width = gaussian_width;
};

/// Width properties 1-5, the squared-width bound, the E max <= tau sqrt(2 log N)
/// bound and the Borell-TIS tail on randomized fixtures.
PropertyReport run_property_suite(const RngSeed& seed, const PropertySuiteSettings& settings = {});

}  // namespace actnet
