// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "statgeom/tensor/frame.hpp"
#include "statgeom/tensor/tensor.hpp"

namespace statgeom::geometry {

using tensor::JetTensor;
using tensor::OrthonormalFrame;
using tensor::PointTensor;

// Connection coefficients are (1,2) tensors A(k, i, j) with
//   nabla_{d_i} d_j = A^k_ij d_k,
// i.e. slot 1 is the direction. Derivatives of fields append the direction as
// the LAST slot: (nabla t)(..., ; l).

/// Partial derivative of every component; the result is one jet order lower
/// and carries an extra lower slot for the direction.
JetTensor partial_derivative(const JetTensor& t);

/// Covariant derivative where slot s is differentiated with
/// `slot_connections[s]`. Lets bundle slots and form slots use different
/// connections, as in the statistical connection Laplacian.
JetTensor covariant_derivative(const JetTensor& t, const std::vector<const JetTensor*>& slot_connections);
JetTensor covariant_derivative(const JetTensor& t, const JetTensor& connection);

/// Levi-Civita coefficients Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij).
JetTensor christoffel(const JetTensor& g, const JetTensor& g_inv);

/// R(k, i, j, l) = component k of R(d_i, d_j) d_l for
///   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
/// Valid for any torsion-free or general connection given by coefficients.
JetTensor riemann(const JetTensor& connection);

/// Ric(X,Y) = sum_i g(R(e_i, X) Y, e_i) over an orthonormal frame.
PointTensor ricci(const PointTensor& R, const PointTensor& g, const OrthonormalFrame& frame);
/// Same quantity as the contraction R^a_{a j k}.
PointTensor ricci_contraction(const PointTensor& R);
double scalar_curvature(const PointTensor& ricci, const PointTensor& g_inv);

/// div V = tr(nabla V).
JetTensor divergence(const JetTensor& V, const JetTensor& connection);
/// grad f = g^-1 df.
JetTensor gradient(const JetTensor& f, const JetTensor& g_inv);
/// Delta f = tr_g nabla df.
JetTensor laplacian_scalar(const JetTensor& f, const JetTensor& connection, const JetTensor& g_inv);

/// tr_g { (X,Y) -> B_X B_Y xi - B_{A_X Y} xi } for a section xi of TM, with
/// bundle connection B and source connection A.
JetTensor connection_laplacian(const JetTensor& xi, const JetTensor& bundle_connection,
                               const JetTensor& source_connection, const JetTensor& g_inv);
/// Rough Laplacian: trace of the second covariant derivative.
JetTensor rough_laplacian(const JetTensor& V, const JetTensor& connection, const JetTensor& g_inv);

/// max |R(X,Y)Z + R(Y,Z)X + R(Z,X)Y| on coordinate vectors.
double first_bianchi_residual(const PointTensor& R);

}  // namespace statgeom::geometry
