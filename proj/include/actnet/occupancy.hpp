#pragma once

#include <cstddef>
#include <vector>

namespace actnet {

enum class OccupancyMethod { exact, recurrence };

struct OccupancyDistribution {
    /// probability[N - 1] = Pr[N distinct items after K draws], N = 1..min(n, K)
    std::vector<double> probability;
    OccupancyMethod method = OccupancyMethod::exact;
};

/// Largest n and K handled with exact big-integer inclusion-exclusion.
inline constexpr std::size_t kExactOccupancyLimit = 64;

/// Distribution of the number of distinct items among K uniform draws with
/// replacement from n items:
///   Pr[N] = C(n, N) * sum_i (-1)^i C(N, i) (N - i)^K / n^K.
/// Exact rational arithmetic up to kExactOccupancyLimit, beyond that the
/// forward recurrence over draws (no alternating signs).
OccupancyDistribution occupancy_distribution(std::size_t n, std::size_t draws);

/// Exact inclusion-exclusion regardless of size (slow for large n, K).
std::vector<double> occupancy_distribution_exact(std::size_t n, std::size_t draws);

/// Forward recurrence Pr_k(N) = Pr_{k-1}(N) N/n + Pr_{k-1}(N-1) (n-N+1)/n.
std::vector<double> occupancy_distribution_recurrence(std::size_t n, std::size_t draws);

}  // namespace actnet
