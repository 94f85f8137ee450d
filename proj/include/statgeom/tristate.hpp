// SPDX-License-Identifier: MIT
#pragma once

#include <string_view>

namespace statgeom {

/// Outcome of a tolerance gate. Residuals between eps and 10 eps fall in a
/// dead zone and are reported as inconclusive rather than flipping a flag.
enum class TriState { True, False, Inconclusive };

inline constexpr double kHysteresis = 10.0;

inline TriState classify(double residual, double eps) {
    if (residual <= eps) return TriState::True;
    if (residual > kHysteresis * eps) return TriState::False;
    return TriState::Inconclusive;
}

inline TriState negate(TriState s) {
    if (s == TriState::True) return TriState::False;
    if (s == TriState::False) return TriState::True;
    return s;
}

inline TriState both(TriState a, TriState b) {
    if (a == TriState::False || b == TriState::False) return TriState::False;
    if (a == TriState::True && b == TriState::True) return TriState::True;
    return TriState::Inconclusive;
}

/// Agreement of two flags; inconclusive when either side is.
inline TriState agree(TriState a, TriState b) {
    if (a == TriState::Inconclusive || b == TriState::Inconclusive) return TriState::Inconclusive;
    return a == b ? TriState::True : TriState::False;
}

inline std::string_view to_string(TriState s) {
    switch (s) {
        case TriState::True: return "true";
        case TriState::False: return "false";
        case TriState::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

}  // namespace statgeom
