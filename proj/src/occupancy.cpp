#include "actnet/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace actnet {

namespace mp = boost::multiprecision;

namespace {

void check_args(std::size_t n, std::size_t draws) {
    if (n < 1 || draws < 1) throw std::invalid_argument("occupancy_distribution: n and K must be >= 1");
}

}  // namespace

std::vector<double> occupancy_distribution_exact(std::size_t n, std::size_t draws) {
    check_args(n, draws);
    const std::size_t top = std::min(n, draws);

    std::vector<mp::cpp_int> power(top + 1);  // j^K
    for (std::size_t j = 0; j <= top; ++j) power[j] = mp::pow(mp::cpp_int(j), static_cast<unsigned>(draws));
    const mp::cpp_int total = mp::pow(mp::cpp_int(n), static_cast<unsigned>(draws));

    std::vector<double> prob(top);
    mp::cpp_int choose_n = 1;                       // C(n, N)
    std::vector<mp::cpp_int> pascal{mp::cpp_int(1)};  // C(N, i), i = 0..N
    for (std::size_t count = 1; count <= top; ++count) {
        choose_n = choose_n * (n - count + 1) / count;
        std::vector<mp::cpp_int> row(count + 1);
        row[0] = row[count] = 1;
        for (std::size_t i = 1; i < count; ++i) row[i] = pascal[i - 1] + pascal[i];
        pascal = std::move(row);

        mp::cpp_int surjections = 0;
        for (std::size_t i = 0; i <= count; ++i) {
            const mp::cpp_int term = pascal[i] * power[count - i];
            if (i % 2 == 0)
                surjections += term;
            else
                surjections -= term;
        }
        const mp::cpp_rational p(choose_n * surjections, total);
        prob[count - 1] = p.convert_to<double>();
    }
    return prob;
}

std::vector<double> occupancy_distribution_recurrence(std::size_t n, std::size_t draws) {
    check_args(n, draws);
    const std::size_t top = std::min(n, draws);
    // dist[N] after k draws; N = 0..top
    std::vector<long double> dist(top + 1, 0.0L), next(top + 1);
    dist[1] = 1.0L;
    const long double items = static_cast<long double>(n);
    for (std::size_t k = 2; k <= draws; ++k) {
        const std::size_t reach = std::min(k, top);
        std::fill(next.begin(), next.end(), 0.0L);
        for (std::size_t count = 1; count <= reach; ++count) {
            next[count] = dist[count] * (static_cast<long double>(count) / items);
            if (count >= 2)
                next[count] += dist[count - 1] * (static_cast<long double>(n - count + 1) / items);
        }
        std::swap(dist, next);
    }
    return std::vector<double>(dist.begin() + 1, dist.end());
}

OccupancyDistribution occupancy_distribution(std::size_t n, std::size_t draws) {
    check_args(n, draws);
    OccupancyDistribution out;
    if (n <= kExactOccupancyLimit && draws <= kExactOccupancyLimit) {
        out.probability = occupancy_distribution_exact(n, draws);
        out.method = OccupancyMethod::exact;
    } else {
        out.probability = occupancy_distribution_recurrence(n, draws);
        out.method = OccupancyMethod::recurrence;
    }
    return out;
}

}  // namespace actnet
