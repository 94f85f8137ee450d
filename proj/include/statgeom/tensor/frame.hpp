// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "statgeom/tensor/tensor.hpp"

namespace statgeom::tensor {

/// m vectors e_i (contravariant components) with g(e_i, e_j) = delta_ij.
class OrthonormalFrame {
public:
    OrthonormalFrame() = default;
    explicit OrthonormalFrame(std::vector<std::vector<double>> vectors) : vectors_(std::move(vectors)) {}

    int dim() const { return static_cast<int>(vectors_.size()); }
    /// Component k of e_i.
    double operator()(int i, int k) const {
        return vectors_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    PointTensor vector(int i) const;
    const std::vector<std::vector<double>>& vectors() const { return vectors_; }

    /// max |E^T G E - I|.
    double orthonormality_defect(const PointTensor& g) const;

private:
    std::vector<std::vector<double>> vectors_;
};

/// Frame from the inverse transpose of the Cholesky factor of g (G = L L^T,
/// E = L^-T). Throws MetricError if g is not symmetric positive definite.
OrthonormalFrame orthonormal_frame(const PointTensor& g);

/// g^-1 for a (0,2) metric; MetricError when g is not positive definite.
PointTensor inverse_metric(const PointTensor& g);

/// g^-1 in jet arithmetic: G = G0 + N with N nilpotent in the truncated ring,
/// so G^-1 = sum_k (-G0^-1 N)^k G0^-1.
JetTensor inverse_metric(const JetTensor& g);

/// sum_i t(.., e_i, .., e_i, ..) over two lower slots.
PointTensor frame_trace(const PointTensor& t, int slot_a, int slot_b, const OrthonormalFrame& frame);

/// Insert vector `v` into lower slot `slot` (interior product on that slot).
PointTensor insert_vector(const PointTensor& t, int slot, const PointTensor& v);

}  // namespace statgeom::tensor
