// SPDX-License-Identifier: MIT
#pragma once

#include <span>
#include <vector>

#include "statgeom/geometry/geometry_frame.hpp"

namespace statgeom::statistical {

using geometry::GeometryFrame;
using tensor::JetTensor;
using tensor::PointTensor;

/// Difference tensor K^k_ij = -1/2 g^kl C_ijl of the structure built from a
/// totally symmetric cubic form. Throws ValidationError when C is not totally
/// symmetric (message carries the max asymmetry).
JetTensor difference_tensor(const JetTensor& g_inv, const JetTensor& cubic, double symmetry_tol = 1e-12);
/// Same formula without the symmetry gate (negative controls only).
JetTensor difference_tensor_unchecked(const JetTensor& g_inv, const JetTensor& cubic);
/// C(X,Y,Z) = -2 g(K_X Y, Z).
JetTensor cubic_from_difference(const JetTensor& g, const JetTensor& K);
/// max over slot swaps of C; zero for a totally symmetric form.
double max_total_asymmetry(const PointTensor& cubic);

struct Tchebychev {
    JetTensor field;  // T^k = g^ij K^k_ij
    JetTensor form;   // eta_k = g_kl T^l
};
Tchebychev tchebychev(const JetTensor& g, const JetTensor& g_inv, const JetTensor& K);

/// max |(nabla_X g)(Y,Z) - (nabla_Y g)(X,Z)| on coordinate vectors.
double codazzi_residual(const JetTensor& g, const JetTensor& connection);

/// Conjugate coefficients solved from X g(Y,Z) = g(nabla_X Y, Z) + g(Y, conj_X Z).
JetTensor conjugate_from_duality(const JetTensor& g, const JetTensor& g_inv, const JetTensor& connection);

/// Curvature interchange: g(L(Z,W)X, Y) = g(R(X,Y)Z, W). Same (k,i,j,l) layout as R.
PointTensor interchange(const PointTensor& R, const PointTensor& g, const PointTensor& g_inv);

/// Statistical quantities of (g, nabla) at one point.
struct StatisticalFrame {
    JetTensor cubic;                 // C_ijk
    JetTensor difference;            // K^k_ij
    JetTensor nabla_difference;      // (nabla^g_X K)(Y,Z) stored (k, Y, Z, X)
    JetTensor tchebychev;            // T^k
    JetTensor tchebychev_form;       // eta_k
    JetTensor tchebychev_operator;   // nabla^g T stored (k, X)
    JetTensor connection;            // nabla = nabla^g + K
    JetTensor conjugate;             // conj = nabla^g - K
    JetTensor curvature;             // R
    JetTensor conjugate_curvature;   // R-bar
    PointTensor ricci;               // Ric of nabla (frame trace)
    PointTensor interchange;         // L
    PointTensor conjugate_interchange;  // L-bar

    PointTensor T() const { return tensor::values(tchebychev); }
    PointTensor K() const { return tensor::values(difference); }
};

StatisticalFrame build_statistical_frame(const GeometryFrame& geo, JetTensor cubic);

struct ConjugateSymmetryResiduals {
    double r_minus_l = 0.0;
    double r_minus_conjugate = 0.0;
    double nabla_k_asymmetry = 0.0;
    double max() const;
};
ConjugateSymmetryResiduals conjugate_symmetry_residuals(const StatisticalFrame& st);

/// g(Y,Z)X - g(X,Z)Y in the (k, X, Y, Z) curvature layout.
PointTensor constant_curvature_model(const PointTensor& g);

struct CurvatureFit {
    double lambda = 0.0;
    double residual = 0.0;
    /// Flag tolerance scales with the curvature magnitude.
    bool constant(double tol = 1e-6) const;
};
/// Least-squares fit of R against the model over every component at every
/// sampled point. Throws ValidationError for m < 2 or empty input.
CurvatureFit constant_curvature_fit(std::span<const PointTensor> curvatures, std::span<const PointTensor> metrics);

/// (T1): Delta_g T + sum_i Ric^g(e_i, T) e_i.
PointTensor t1_residual(const GeometryFrame& geo, const StatisticalFrame& st);
/// (T2): div^g(T) T + nabla^g_T T.
PointTensor t2_residual(const GeometryFrame& geo, const StatisticalFrame& st);

/// |lambda m(m-1) - rho - g(T,T) + g(K,K)|.
double scalar_relation_residual(double lambda, const GeometryFrame& geo, const StatisticalFrame& st);

struct LapcTerms {
    double laplacian = 0.0;      // Delta_g g(K,K)
    double curvature_term = 0.0; // 2 g(F, K)
    double gradient_term = 0.0;  // 2 g(nabla K, nabla K)
    double residual() const;
};
LapcTerms lapc_terms(const GeometryFrame& geo, const StatisticalFrame& st);
/// F(X,Y) = sum_l (R^g(e_l, X) K)(e_l, Y).
PointTensor curvature_action_trace(const GeometryFrame& geo, const StatisticalFrame& st);

struct GeodesicPotential {
    double residual = 0.0;      // |nabla_T T + div(T) T|
    double potential = 0.0;     // rho = -div(T)
    double fitted_potential = 0.0;  // g(nabla_T T, T) / g(T,T)
    double tchebychev_norm = 0.0;
};
GeodesicPotential geodesic_potential_check(const GeometryFrame& geo, const StatisticalFrame& st);

/// Antisymmetric part of Ric vs. the closedness defect of eta.
struct RicciSymmetry {
    double ricci_asymmetry = 0.0;      // max |Ric(X,Y) - Ric(Y,X)|
    double closedness_defect = 0.0;    // max |g(nabla_X T, Y) - g(nabla_Y T, X)|
    double identity_residual = 0.0;    // max |(Ric(X,Y) - Ric(Y,X)) - (g(nabla_Y T, X) - g(nabla_X T, Y))|
};
RicciSymmetry ricci_symmetry(const GeometryFrame& geo, const StatisticalFrame& st);

/// eta + k tr_g C(.,.,X) residual for the factor k = -1/2, and the
/// least-squares factor.
struct TraceFactor {
    double residual = 0.0;
    double fitted_factor = 0.0;
    double trace_norm = 0.0;
};
TraceFactor cubic_trace_factor(const GeometryFrame& geo, const StatisticalFrame& st);

/// For a potential phi with eta = d phi: max of |eta - d phi| and the defect
/// of nabla(e^phi vol_g) = 0.
double parallel_volume_residual(const GeometryFrame& geo, const StatisticalFrame& st, const JetTensor& potential);

/// Quantities used by the parallel-Tchebychev criterion: Ric^g(T,T) and the
/// scalar combination -3 Ric^g(T,T) + div(T)^2 + g(nabla T, nabla T).
struct ParallelCriterion {
    double ricci_tt = 0.0;
    double combination = 0.0;
    double operator_norm = 0.0;  // max |nabla^g T|
};
ParallelCriterion parallel_criterion(const GeometryFrame& geo, const StatisticalFrame& st);

}  // namespace statgeom::statistical
