// SPDX-License-Identifier: MIT
#include "statgeom/geometry/geometry_frame.hpp"

#include "statgeom/error.hpp"

namespace statgeom::geometry {

GeometryFrame build_geometry_frame(std::vector<double> point, JetTensor metric) {
    if (metric.rank() != 2) throw TensorError("metric must be rank 2");
    if (static_cast<int>(point.size()) != metric.dim()) throw TensorError("point dimension does not match metric");
    for (const auto& c : metric.data())
        if (!c.is_constant() && c.order() < 2) throw Error("metric jets of order >= 2 are required");

    GeometryFrame geo;
    geo.point = std::move(point);
    geo.metric = std::move(metric);
    const PointTensor g0 = tensor::values(geo.metric);
    geo.frame = tensor::orthonormal_frame(g0);
    geo.inverse = tensor::inverse_metric(geo.metric);
    geo.christoffel = christoffel(geo.metric, geo.inverse);
    geo.riemann = riemann(geo.christoffel);
    const PointTensor R = tensor::values(geo.riemann);
    geo.ricci = ricci(R, g0, geo.frame);
    geo.scalar_curvature = scalar_curvature(geo.ricci, tensor::values(geo.inverse));
    return geo;
}

double metricity_residual(const GeometryFrame& geo, const JetTensor& connection) {
    return tensor::max_abs(tensor::values(covariant_derivative(geo.metric, connection)));
}

}  // namespace statgeom::geometry
