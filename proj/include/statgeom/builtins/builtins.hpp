// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "statgeom/cli/manifold_spec.hpp"
#include "statgeom/tensor/tensor.hpp"

namespace statgeom::builtins {

using cli::ManifoldSpec;
using tensor::PointTensor;

/// Closed-form data a builtin knows about itself, evaluated at a chart point.
using PointOracle = std::function<PointTensor(std::span<const double>)>;

struct BuiltinInstance {
    std::string name;
    std::string description;
    ManifoldSpec spec;
    PointOracle metric;             // g_ij
    PointOracle christoffel;        // Gamma^k_ij
    PointOracle connection;         // nabla coefficients, when known
    PointOracle tchebychev_form;    // eta_k
    std::optional<double> lambda;   // constant curvature, when known in closed form
};

/// Surface x3 = x1^-a1 x2^-a2 with its centroaffine structure on [0.5, 3]^2.
/// Throws ValidationError unless a1, a2 > 0.
BuiltinInstance centroaffine_power_surface(double a1, double a2);

/// Euclidean R^m with constant cubic form given by its sorted-key entries.
/// Throws ValidationError for m outside 1..8 or bad keys.
BuiltinInstance flat_constant_cubic(int m, const std::vector<std::pair<std::string, double>>& entries,
                                    std::string name = {});
/// Random constants in [-1, 1] for every sorted index triple.
BuiltinInstance flat_random_constant_cubic(int m, std::uint64_t seed);
/// Random polynomial cubic form of degree <= 2 on Euclidean R^m.
BuiltinInstance flat_polynomial_cubic(int m, std::uint64_t seed);

/// Conformal metric 4/(1 + c|x|^2)^2 on a box avoiding the singular sphere;
/// C = 0. c > 0 gives the sphere, c < 0 the hyperbolic ball.
BuiltinInstance sphere_stereographic(int m, double c);
BuiltinInstance hyperbolic_ball(int m, double c);

/// Resolve "family:arg,arg" names (see list_builtins()).
BuiltinInstance make_builtin(const std::string& name);
/// Canonical instance names used by list and the regression suite.
std::vector<std::string> list_builtins();
/// Human-readable family syntax, one line per family.
std::vector<std::string> builtin_families();

/// Shortest round-trip decimal for embedding constants in expressions.
std::string format_number(double v);

}  // namespace statgeom::builtins
