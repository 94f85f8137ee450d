// SPDX-License-Identifier: MIT
#include "statgeom/statistical/statistical_frame.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "statgeom/error.hpp"

namespace statgeom::statistical {

using expr::Jet;
using tensor::D;
using tensor::U;

namespace {

void require_cubic(const JetTensor& c) {
    if (c.rank() != 3 || c.signature() != tensor::Signature{D, D, D}) throw TensorError("cubic form must be a (0,3) tensor");
}

double norm(const tensor::Metric<double>& metric, const PointTensor& t) {
    return std::sqrt(std::max(0.0, tensor::inner(metric, t, t)));
}

}  // namespace

double max_total_asymmetry(const PointTensor& cubic) {
    return std::max({tensor::max_asymmetry(cubic, 0, 1), tensor::max_asymmetry(cubic, 1, 2),
                     tensor::max_asymmetry(cubic, 0, 2)});
}

JetTensor difference_tensor_unchecked(const JetTensor& g_inv, const JetTensor& cubic) {
    require_cubic(cubic);
    const int m = cubic.dim();
    JetTensor K(m, {U, D, D});
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                Jet acc;
                for (int l = 0; l < m; ++l) acc += g_inv(k, l) * cubic(i, j, l);
                K(k, i, j) = -0.5 * acc;
            }
    return K;
}

JetTensor difference_tensor(const JetTensor& g_inv, const JetTensor& cubic, double symmetry_tol) {
    require_cubic(cubic);
    const double asym = max_total_asymmetry(tensor::values(cubic));
    if (asym > symmetry_tol) {
        std::ostringstream os;
        os << "cubic form is not totally symmetric (max asymmetry " << asym << ")";
        throw ValidationError(os.str());
    }
    return difference_tensor_unchecked(g_inv, cubic);
}

JetTensor cubic_from_difference(const JetTensor& g, const JetTensor& K) {
    const int m = K.dim();
    JetTensor C(m, {D, D, D});
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            for (int z = 0; z < m; ++z) {
                Jet acc;
                for (int p = 0; p < m; ++p) acc += K(p, x, y) * g(p, z);
                C(x, y, z) = -2.0 * acc;
            }
    return C;
}

Tchebychev tchebychev(const JetTensor& g, const JetTensor& g_inv, const JetTensor& K) {
    Tchebychev t;
    t.field = tensor::trace_g(K, 1, 2, g_inv);
    t.form = tensor::lower_index(t.field, 0, g);
    return t;
}

double codazzi_residual(const JetTensor& g, const JetTensor& connection) {
    // cov(Y, Z, X) = (nabla_X g)(Y, Z); Codazzi swaps X and Y.
    return tensor::max_asymmetry(tensor::values(geometry::covariant_derivative(g, connection)), 0, 2);
}

JetTensor conjugate_from_duality(const JetTensor& g, const JetTensor& g_inv, const JetTensor& connection) {
    const int m = g.dim();
    const JetTensor dg = geometry::partial_derivative(g);  // dg(y, z, x) = d_x g_yz
    JetTensor lowered(m, {D, D, D});                      // g(d_y, conj_x d_z) as (y, x, z)
    for (int y = 0; y < m; ++y)
        for (int x = 0; x < m; ++x)
            for (int z = 0; z < m; ++z) {
                Jet acc = dg(y, z, x);
                for (int q = 0; q < m; ++q) acc -= connection(q, x, y) * g(q, z);
                lowered(y, x, z) = acc;
            }
    return tensor::raise_index(lowered, 0, g_inv);
}

PointTensor interchange(const PointTensor& R, const PointTensor& g, const PointTensor& g_inv) {
    const int m = R.dim();
    const PointTensor low = tensor::lower_index(R, 0, g);  // low(w, x, y, z) = g(R(x,y)z, w)
    PointTensor L_low(m, {D, D, D, D});                     // L_low(y, z, w, x) = g(L(z,w)x, y)
    for (int y = 0; y < m; ++y)
        for (int z = 0; z < m; ++z)
            for (int w = 0; w < m; ++w)
                for (int x = 0; x < m; ++x) L_low(y, z, w, x) = low(w, x, y, z);
    return tensor::raise_index(L_low, 0, g_inv);
}

StatisticalFrame build_statistical_frame(const GeometryFrame& geo, JetTensor cubic) {
    StatisticalFrame st;
    st.cubic = std::move(cubic);
    st.difference = difference_tensor(geo.inverse, st.cubic);
    st.nabla_difference = geometry::covariant_derivative(st.difference, geo.christoffel);
    const Tchebychev t = tchebychev(geo.metric, geo.inverse, st.difference);
    st.tchebychev = t.field;
    st.tchebychev_form = t.form;
    st.tchebychev_operator = geometry::covariant_derivative(st.tchebychev, geo.christoffel);
    st.connection = geo.christoffel + st.difference;
    st.conjugate = geo.christoffel - st.difference;
    st.curvature = geometry::riemann(st.connection);
    st.conjugate_curvature = geometry::riemann(st.conjugate);
    const PointTensor g = geo.g();
    const PointTensor g_inv = geo.g_inv();
    const PointTensor R = tensor::values(st.curvature);
    st.ricci = geometry::ricci(R, g, geo.frame);
    st.interchange = interchange(R, g, g_inv);
    st.conjugate_interchange = interchange(tensor::values(st.conjugate_curvature), g, g_inv);
    return st;
}

double ConjugateSymmetryResiduals::max() const {
    return std::max({r_minus_l, r_minus_conjugate, nabla_k_asymmetry});
}

ConjugateSymmetryResiduals conjugate_symmetry_residuals(const StatisticalFrame& st) {
    ConjugateSymmetryResiduals r;
    const PointTensor R = tensor::values(st.curvature);
    r.r_minus_l = tensor::max_abs_difference(R, st.interchange);
    r.r_minus_conjugate = tensor::max_abs_difference(R, tensor::values(st.conjugate_curvature));
    // (nabla_X K)_Y = (nabla_Y K)_X: swap slots 1 and 3 of (k, Y, Z, X).
    r.nabla_k_asymmetry = tensor::max_asymmetry(tensor::values(st.nabla_difference), 1, 3);
    return r;
}

PointTensor constant_curvature_model(const PointTensor& g) {
    const int m = g.dim();
    PointTensor B(m, {U, D, D, D});
    for (int q = 0; q < m; ++q)
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                for (int z = 0; z < m; ++z)
                    B(q, x, y, z) = (q == x ? g(y, z) : 0.0) - (q == y ? g(x, z) : 0.0);
    return B;
}

bool CurvatureFit::constant(double tol) const { return residual <= tol * (1.0 + std::abs(lambda)); }

CurvatureFit constant_curvature_fit(std::span<const PointTensor> curvatures, std::span<const PointTensor> metrics) {
    if (curvatures.empty() || curvatures.size() != metrics.size())
        throw ValidationError("constant-curvature fit needs matching, non-empty curvature and metric samples");
    if (curvatures.front().dim() < 2) throw ValidationError("constant-curvature fit requires dimension >= 2");
    std::vector<PointTensor> models;
    models.reserve(metrics.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t s = 0; s < curvatures.size(); ++s) {
        models.push_back(constant_curvature_model(metrics[s]));
        const auto& R = curvatures[s].data();
        const auto& B = models.back().data();
        for (std::size_t i = 0; i < R.size(); ++i) {
            num += R[i] * B[i];
            den += B[i] * B[i];
        }
    }
    CurvatureFit fit;
    fit.lambda = num / den;
    for (std::size_t s = 0; s < curvatures.size(); ++s) {
        const auto& R = curvatures[s].data();
        const auto& B = models[s].data();
        for (std::size_t i = 0; i < R.size(); ++i)
            fit.residual = std::max(fit.residual, std::abs(R[i] - fit.lambda * B[i]));
    }
    return fit;
}

PointTensor t1_residual(const GeometryFrame& geo, const StatisticalFrame& st) {
    const int m = geo.dim();
    PointTensor out = tensor::values(geometry::rough_laplacian(st.tchebychev, geo.christoffel, geo.inverse));
    const PointTensor T = st.T();
    // sum_i Ric^g(e_i, T) e_i
    for (int i = 0; i < m; ++i) {
        double coeff = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) coeff += geo.frame(i, a) * geo.ricci(a, b) * T(b);
        for (int k = 0; k < m; ++k) out(k) += coeff * geo.frame(i, k);
    }
    return out;
}

PointTensor t2_residual(const GeometryFrame& geo, const StatisticalFrame& st) {
    const int m = geo.dim();
    const PointTensor nT = tensor::values(st.tchebychev_operator);  // (k, X)
    const PointTensor T = st.T();
    double div = 0.0;
    for (int k = 0; k < m; ++k) div += nT(k, k);
    PointTensor out(m, {U});
    for (int k = 0; k < m; ++k) {
        double acc = div * T(k);
        for (int l = 0; l < m; ++l) acc += nT(k, l) * T(l);
        out(k) = acc;
    }
    return out;
}

double scalar_relation_residual(double lambda, const GeometryFrame& geo, const StatisticalFrame& st) {
    const int m = geo.dim();
    const auto metric = geo.point_metric();
    const PointTensor T = st.T();
    const PointTensor K = st.K();
    return std::abs(lambda * m * (m - 1) - geo.scalar_curvature - tensor::inner(metric, T, T) +
                    tensor::inner(metric, K, K));
}

double LapcTerms::residual() const { return std::abs(laplacian - curvature_term - gradient_term); }

PointTensor curvature_action_trace(const GeometryFrame& geo, const StatisticalFrame& st) {
    const int m = geo.dim();
    const PointTensor R = geo.curvature();
    const PointTensor K = st.K();
    // W(k, u, x, v, y) = ((R(d_u, d_x) K)(d_v, d_y))^k
    PointTensor W(m, {U, D, D, D, D});
    for (int k = 0; k < m; ++k)
        for (int u = 0; u < m; ++u)
            for (int x = 0; x < m; ++x)
                for (int v = 0; v < m; ++v)
                    for (int y = 0; y < m; ++y) {
                        double acc = 0.0;
                        for (int p = 0; p < m; ++p)
                            acc += R(k, u, x, p) * K(p, v, y) - K(k, p, y) * R(p, u, x, v) - K(k, v, p) * R(p, u, x, y);
                        W(k, u, x, v, y) = acc;
                    }
    return tensor::frame_trace(W, 1, 3, geo.frame);
}

LapcTerms lapc_terms(const GeometryFrame& geo, const StatisticalFrame& st) {
    const auto jm = geo.jet_metric();
    const auto pm = geo.point_metric();
    const JetTensor kk = JetTensor::scalar(geo.dim(), tensor::inner(jm, st.difference, st.difference));
    LapcTerms t;
    t.laplacian = tensor::values(geometry::laplacian_scalar(kk, geo.christoffel, geo.inverse)).data()[0];
    t.curvature_term = 2.0 * tensor::inner(pm, curvature_action_trace(geo, st), st.K());
    const PointTensor nK = tensor::values(st.nabla_difference);
    t.gradient_term = 2.0 * tensor::inner(pm, nK, nK);
    return t;
}

GeodesicPotential geodesic_potential_check(const GeometryFrame& geo, const StatisticalFrame& st) {
    const int m = geo.dim();
    const auto pm = geo.point_metric();
    const PointTensor nT = tensor::values(st.tchebychev_operator);
    const PointTensor T = st.T();
    PointTensor nablaTT(m, {U});
    double div = 0.0;
    for (int k = 0; k < m; ++k) {
        div += nT(k, k);
        for (int l = 0; l < m; ++l) nablaTT(k) += nT(k, l) * T(l);
    }
    GeodesicPotential r;
    r.residual = norm(pm, t2_residual(geo, st));
    r.potential = -div;
    r.tchebychev_norm = norm(pm, T);
    const double tt = tensor::inner(pm, T, T);
    r.fitted_potential = tt > 0.0 ? tensor::inner(pm, nablaTT, T) / tt : 0.0;
    return r;
}

RicciSymmetry ricci_symmetry(const GeometryFrame& geo, const StatisticalFrame& st) {
    const int m = geo.dim();
    // Lowered operator: h(x, y) = g(nabla_x T, y).
    const PointTensor nT = tensor::values(st.tchebychev_operator);
    const PointTensor g = geo.g();
    PointTensor h(m, {D, D});
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            for (int k = 0; k < m; ++k) h(x, y) += nT(k, x) * g(k, y);
    RicciSymmetry r;
    r.ricci_asymmetry = tensor::max_asymmetry(st.ricci, 0, 1);
    r.closedness_defect = tensor::max_asymmetry(h, 0, 1);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            const double a = st.ricci(x, y) - st.ricci(y, x);
            const double b = h(y, x) - h(x, y);
            r.identity_residual = std::max(r.identity_residual, std::abs(a - b));
        }
    return r;
}

TraceFactor cubic_trace_factor(const GeometryFrame& geo, const StatisticalFrame& st) {
    const PointTensor trace = tensor::trace_g(tensor::values(st.cubic), 0, 1, geo.g_inv());
    const PointTensor eta = tensor::values(st.tchebychev_form);
    TraceFactor r;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        num += eta.data()[i] * trace.data()[i];
        den += trace.data()[i] * trace.data()[i];
        r.residual = std::max(r.residual, std::abs(eta.data()[i] + 0.5 * trace.data()[i]));
    }
    r.fitted_factor = den > 0.0 ? num / den : 0.0;
    r.trace_norm = std::sqrt(den);
    return r;
}

double parallel_volume_residual(const GeometryFrame& geo, const StatisticalFrame& st, const JetTensor& potential) {
    if (potential.rank() != 0) throw TensorError("potential must be a scalar field");
    const int m = geo.dim();
    const PointTensor dphi = tensor::values(geometry::partial_derivative(potential));
    const PointTensor eta = tensor::values(st.tchebychev_form);
    const PointTensor dg = tensor::values(geometry::partial_derivative(geo.metric));  // (a, b, l)
    const PointTensor g_inv = geo.g_inv();
    const PointTensor A = tensor::values(st.connection);
    double worst = tensor::max_abs_difference(eta, dphi);
    // nabla(f vol) = 0 with f = e^phi sqrt(det g)  <=>  d_l ln f = A^k_lk.
    for (int l = 0; l < m; ++l) {
        double dlogf = dphi(l);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) dlogf += 0.5 * g_inv(a, b) * dg(a, b, l);
        double tr = 0.0;
        for (int k = 0; k < m; ++k) tr += A(k, l, k);
        worst = std::max(worst, std::abs(dlogf - tr));
    }
    return worst;
}

ParallelCriterion parallel_criterion(const GeometryFrame& geo, const StatisticalFrame& st) {
    const auto pm = geo.point_metric();
    const PointTensor T = st.T();
    const PointTensor nT = tensor::values(st.tchebychev_operator);
    const int m = geo.dim();
    ParallelCriterion r;
    double div = 0.0;
    for (int k = 0; k < m; ++k) div += nT(k, k);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) r.ricci_tt += geo.ricci(a, b) * T(a) * T(b);
    r.combination = -3.0 * r.ricci_tt + div * div + tensor::inner(pm, nT, nT);
    r.operator_norm = tensor::max_abs(nT);
    return r;
}

}  // namespace statgeom::statistical
