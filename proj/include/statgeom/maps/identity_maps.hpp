// SPDX-License-Identifier: MIT
#pragma once

#include <span>

#include "statgeom/statistical/statistical_frame.hpp"
#include "statgeom/tristate.hpp"

namespace statgeom::maps {

using geometry::GeometryFrame;
using statistical::StatisticalFrame;
using tensor::JetTensor;
using tensor::PointTensor;

/// Tension field of id: (M, g, A) -> (M, g, B): tr_g (B - A), kept as jets so
/// the bi-tension can differentiate it.
JetTensor tension(const JetTensor& g_inv, const JetTensor& source, const JetTensor& target);

/// Statistical bi-tension of id: (M, g, A) -> (M, g, B) from the general
/// formula
///   tau2 = Delta tau + div^g(tr_g(A - Gamma)) tau - sum_i L^B(e_i, tau) e_i - K^B(tau, tau)
/// where Delta is the connection Laplacian with bundle connection 2 Gamma - B
/// and source connection 2 Gamma - A.
PointTensor bitension(const GeometryFrame& geo, const JetTensor& source, const JetTensor& target);

struct IdentityMapReport {
    PointTensor tension;             // tau(id), source nabla
    PointTensor conjugate_tension;   // tau-bar(id), source conj
    PointTensor levi_civita_tension; // tau-hat(id), source nabla^g
    PointTensor bitension;           // tau2 from the general formula
    PointTensor conjugate_bitension;
    PointTensor bitension_proof;     // -Delta_g T - nabla_T T - div(T) T + sum R^g(e_i, T) e_i
    PointTensor conjugate_bitension_proof;
    PointTensor t1;
    PointTensor t2;

    double tension_identity = 0.0;   // max(|tau + T|, |tau-bar - T|)
    double difftension = 0.0;        // |tau-hat - (tau + tau-bar)/2|
    double path_agreement = 0.0;     // general vs proof form, both maps
    double main1_difference = 0.0;   // |(tau2 - tau2-bar) + 2 T1|
    double main1_sum = 0.0;          // |(tau2 + tau2-bar) + 2 T2|
};

IdentityMapReport identity_map_report(const GeometryFrame& geo, const StatisticalFrame& st);

/// Semi-equiaffine flag from the worst (T1)/(T2) norms, and the flag from the
/// worst bi-tension norms; the two must coincide.
struct SemiEquiaffine {
    double t1_max = 0.0;
    double t2_max = 0.0;
    double bitension_max = 0.0;
    TriState semi_equiaffine = TriState::Inconclusive;
    TriState bitension_vanishing = TriState::Inconclusive;
    TriState equivalence = TriState::Inconclusive;
};

SemiEquiaffine semi_equiaffine_flag(std::span<const IdentityMapReport> reports, double eps);

}  // namespace statgeom::maps
