// SPDX-License-Identifier: MIT
#pragma once

#include <random>
#include <vector>

#include "statgeom/cli/manifold_spec.hpp"

namespace statgeom::cli {

/// Uniform double in [0, 1) from the top 53 bits, so sequences are identical
/// across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Sample points for a spec: `count` seeded uniform points (or a cell-centred
/// grid with round(count^(1/m)) cells per axis, at least 2) followed by the
/// 2^m box corners pulled 10% towards the centre.
std::vector<std::vector<double>> sample_points(const SampleSpec& sample);

}  // namespace statgeom::cli
