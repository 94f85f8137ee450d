// SPDX-License-Identifier: MIT
#include "statgeom/cli/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace statgeom::cli {

std::vector<std::vector<double>> sample_points(const SampleSpec& sample) {
    const int m = static_cast<int>(sample.box.size());
    std::vector<std::vector<double>> points;
    if (sample.strategy == "grid") {
        const int n = std::max(2, static_cast<int>(std::lround(std::pow(sample.count, 1.0 / m))));
        std::size_t total = 1;
        for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(n);
        for (std::size_t f = 0; f < total; ++f) {
            std::vector<double> p(static_cast<std::size_t>(m));
            std::size_t rest = f;
            for (int i = m; i-- > 0;) {
                const auto cell = static_cast<double>(rest % static_cast<std::size_t>(n));
                rest /= static_cast<std::size_t>(n);
                const auto [lo, hi] = sample.box[static_cast<std::size_t>(i)];
                p[static_cast<std::size_t>(i)] = lo + (cell + 0.5) * (hi - lo) / n;
            }
            points.push_back(std::move(p));
        }
    } else {
        std::mt19937_64 rng(sample.seed);
        for (int s = 0; s < sample.count; ++s) {
            std::vector<double> p;
            for (const auto& [lo, hi] : sample.box) p.push_back(lo + unit_uniform(rng) * (hi - lo));
            points.push_back(std::move(p));
        }
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<double> p;
        for (int i = 0; i < m; ++i) {
            const auto [lo, hi] = sample.box[static_cast<std::size_t>(i)];
            const double centre = 0.5 * (lo + hi);
            const double corner = (mask >> i) & 1U ? hi : lo;
            p.push_back(centre + 0.9 * (corner - centre));
        }
        points.push_back(std::move(p));
    }
    return points;
}

}  // namespace statgeom::cli
