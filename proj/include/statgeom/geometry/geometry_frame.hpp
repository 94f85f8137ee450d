// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "statgeom/geometry/differential.hpp"

namespace statgeom::geometry {

/// Riemannian quantities of (M, g) at one chart point. Jet-valued members keep
/// their Taylor data so downstream code can keep differentiating; the metric
/// jet order bounds everything (Gamma is one order lower, R^g two).
struct GeometryFrame {
    std::vector<double> point;
    JetTensor metric;       // g_ij
    JetTensor inverse;      // g^ij
    JetTensor christoffel;  // Gamma^k_ij
    JetTensor riemann;      // R^g(k, i, j, l)
    PointTensor ricci;      // Ric^g_ij (frame trace)
    double scalar_curvature = 0.0;
    OrthonormalFrame frame;

    int dim() const { return metric.dim(); }
    PointTensor g() const { return tensor::values(metric); }
    PointTensor g_inv() const { return tensor::values(inverse); }
    PointTensor gamma() const { return tensor::values(christoffel); }
    /// d_l Gamma^k_ij stored as (k, i, j, l).
    PointTensor christoffel_derivative() const { return tensor::values(partial_derivative(christoffel)); }
    PointTensor curvature() const { return tensor::values(riemann); }
    tensor::Metric<double> point_metric() const { return {g(), g_inv()}; }
    tensor::Metric<expr::Jet> jet_metric() const { return {metric, inverse}; }
};

/// Build the frame from metric jets of order >= 2 (order 3 when curvature must
/// be differentiated further). Throws MetricError for non-positive-definite g.
GeometryFrame build_geometry_frame(std::vector<double> point, JetTensor metric);

/// max |(nabla_l g)_ij| for the given connection; zero for Levi-Civita.
double metricity_residual(const GeometryFrame& geo, const JetTensor& connection);

}  // namespace statgeom::geometry
