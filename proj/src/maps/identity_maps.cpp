// SPDX-License-Identifier: MIT
#include "statgeom/maps/identity_maps.hpp"

#include <algorithm>

namespace statgeom::maps {

using expr::Jet;
using tensor::U;

JetTensor tension(const JetTensor& g_inv, const JetTensor& source, const JetTensor& target) {
    return tensor::trace_g(target - source, 1, 2, g_inv);
}

namespace {

// sum_i L(e_i, v) e_i for L in the (k, Z, W, X) layout.
PointTensor frame_interchange_sum(const GeometryFrame& geo, const PointTensor& L, const PointTensor& v) {
    const PointTensor traced = tensor::frame_trace(L, 1, 3, geo.frame);  // (k, W)
    return tensor::contract(tensor::tensor_product(traced, v), 1, 2);
}

PointTensor curvature_frame_sum(const GeometryFrame& geo, const PointTensor& v) {
    // sum_i R^g(e_i, v) e_i in the (k, X, Y, Z) layout.
    const int m = geo.dim();
    const PointTensor R = geo.curvature();
    PointTensor out(m, {U});
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            double acc = 0.0;
            for (int x = 0; x < m; ++x)
                for (int z = 0; z < m; ++z)
                    for (int y = 0; y < m; ++y) acc += geo.frame(i, x) * geo.frame(i, z) * R(k, x, y, z) * v(y);
            out(k) += acc;
        }
    return out;
}

}  // namespace

PointTensor bitension(const GeometryFrame& geo, const JetTensor& source, const JetTensor& target) {
    const int m = geo.dim();
    const JetTensor two_gamma = geo.christoffel * Jet(2.0);
    const JetTensor tau = tension(geo.inverse, source, target);
    const JetTensor bundle = two_gamma - target;
    const JetTensor base = two_gamma - source;
    PointTensor out = tensor::values(geometry::connection_laplacian(tau, bundle, base, geo.inverse));

    const PointTensor t = tensor::values(tau);
    const JetTensor source_trace = tensor::trace_g(source - geo.christoffel, 1, 2, geo.inverse);
    const double div = tensor::values(geometry::divergence(source_trace, geo.christoffel)).data()[0];

    const PointTensor RB = tensor::values(geometry::riemann(target));
    const PointTensor LB = statistical::interchange(RB, geo.g(), geo.g_inv());
    const PointTensor curv = frame_interchange_sum(geo, LB, t);
    const PointTensor KB = tensor::values(target - geo.christoffel);
    for (int k = 0; k < m; ++k) {
        double kb = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) kb += KB(k, i, j) * t(i) * t(j);
        out(k) += div * t(k) - curv(k) - kb;
    }
    return out;
}

IdentityMapReport identity_map_report(const GeometryFrame& geo, const StatisticalFrame& st) {
    const int m = geo.dim();
    IdentityMapReport r;
    const PointTensor T = st.T();
    r.tension = tensor::values(tension(geo.inverse, st.connection, geo.christoffel));
    r.conjugate_tension = tensor::values(tension(geo.inverse, st.conjugate, geo.christoffel));
    r.levi_civita_tension = tensor::values(tension(geo.inverse, geo.christoffel, geo.christoffel));
    r.tension_identity = std::max(tensor::max_abs(r.tension + T), tensor::max_abs(r.conjugate_tension - T));
    PointTensor mean = r.tension + r.conjugate_tension;
    mean *= 0.5;
    r.difftension = tensor::max_abs_difference(r.levi_civita_tension, mean);

    r.bitension = bitension(geo, st.connection, geo.christoffel);
    r.conjugate_bitension = bitension(geo, st.conjugate, geo.christoffel);

    // Proof form, written directly in T.
    const PointTensor lap = tensor::values(geometry::rough_laplacian(st.tchebychev, geo.christoffel, geo.inverse));
    const PointTensor nT = tensor::values(st.tchebychev_operator);
    PointTensor nablaTT(m, {U});
    double div = 0.0;
    for (int k = 0; k < m; ++k) {
        div += nT(k, k);
        for (int l = 0; l < m; ++l) nablaTT(k) += nT(k, l) * T(l);
    }
    const PointTensor curv = curvature_frame_sum(geo, T);
    r.bitension_proof = PointTensor(m, {U});
    r.conjugate_bitension_proof = PointTensor(m, {U});
    for (int k = 0; k < m; ++k) {
        r.bitension_proof(k) = -lap(k) - nablaTT(k) - div * T(k) + curv(k);
        r.conjugate_bitension_proof(k) = lap(k) - nablaTT(k) - div * T(k) - curv(k);
    }
    r.path_agreement = std::max(tensor::max_abs_difference(r.bitension, r.bitension_proof),
                                tensor::max_abs_difference(r.conjugate_bitension, r.conjugate_bitension_proof));

    r.t1 = statistical::t1_residual(geo, st);
    r.t2 = statistical::t2_residual(geo, st);
    PointTensor diff = r.bitension - r.conjugate_bitension;
    PointTensor sum = r.bitension + r.conjugate_bitension;
    PointTensor two_t1 = r.t1;
    two_t1 *= 2.0;
    PointTensor two_t2 = r.t2;
    two_t2 *= 2.0;
    r.main1_difference = tensor::max_abs(diff + two_t1);
    r.main1_sum = tensor::max_abs(sum + two_t2);
    return r;
}

SemiEquiaffine semi_equiaffine_flag(std::span<const IdentityMapReport> reports, double eps) {
    SemiEquiaffine s;
    for (const auto& r : reports) {
        s.t1_max = std::max(s.t1_max, tensor::max_abs(r.t1));
        s.t2_max = std::max(s.t2_max, tensor::max_abs(r.t2));
        s.bitension_max = std::max({s.bitension_max, tensor::max_abs(r.bitension), tensor::max_abs(r.conjugate_bitension)});
    }
    s.semi_equiaffine = classify(std::max(s.t1_max, s.t2_max), eps);
    s.bitension_vanishing = classify(s.bitension_max, eps);
    s.equivalence = agree(s.semi_equiaffine, s.bitension_vanishing);
    return s;
}

}  // namespace statgeom::maps
