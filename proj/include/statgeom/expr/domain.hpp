// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>

#include "statgeom/error.hpp"
#include "statgeom/expr/ast.hpp"

namespace statgeom::expr::detail {

inline void check_divisor(const Node& n, double den) {
    if (den == 0.0 || !std::isfinite(den)) throw DomainError("division by zero", to_string(n));
}

inline double check_finite(const Node& n, double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite result", to_string(n));
    return v;
}

/// Domain of the call argument `a`; `order` is the number of derivatives that
/// will be taken (0 for plain evaluation).
inline void check_argument(const Node& n, double a, int order) {
    if (n.kind != NodeKind::Call) return;
    switch (n.function) {
        case Function::Log:
            if (!(a > 0.0)) throw DomainError("log of non-positive value", to_string(n));
            break;
        case Function::Sqrt:
            if (a < 0.0 || (order > 0 && a == 0.0)) throw DomainError("sqrt outside its domain", to_string(n));
            break;
        case Function::Pow: {
            const double p = n.value;
            const bool integral = std::floor(p) == p;
            if (!integral && a < 0.0) throw DomainError("pow of negative base with fractional exponent", to_string(n));
            if (a == 0.0) {
                const bool smooth = integral && p >= 0.0;
                if (p < 0.0 || (!smooth && order > 0 && p - order < 0.0))
                    throw DomainError("pow singular at zero base", to_string(n));
            }
            break;
        }
        case Function::Exp:
        case Function::Sin:
        case Function::Cos: break;
    }
}

}  // namespace statgeom::expr::detail
