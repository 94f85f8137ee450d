// SPDX-License-Identifier: MIT
#pragma once

#include <span>

#include "statgeom/expr/ast.hpp"
#include "statgeom/expr/jet.hpp"

namespace statgeom::expr {

/// Forward-mode evaluation: the Taylor jet of `e` at `point` to the given order
/// (0..3). Domain violations raise DomainError naming the offending
/// subexpression.
Jet eval_jet(const Expression& e, std::span<const double> point, int order);

/// Central-difference estimate of the same jet (order 1 or 2). Only meant as an
/// independent oracle for the forward-mode path.
Jet fd_jet(const Expression& e, std::span<const double> point, int order, double h);

}  // namespace statgeom::expr
