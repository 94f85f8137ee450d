// SPDX-License-Identifier: MIT
#include "statgeom/tensor/tensor.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "statgeom/tensor/frame.hpp"

namespace statgeom::tensor {
namespace {

Eigen::MatrixXd to_matrix(const PointTensor& g) {
    if (g.rank() != 2) throw TensorError("expected a rank-2 tensor");
    const int m = g.dim();
    Eigen::MatrixXd out(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = g(i, j);
    return out;
}

Eigen::LLT<Eigen::MatrixXd> cholesky(const PointTensor& g) {
    if (g.rank() != 2 || g.variance(0) != Variance::Down || g.variance(1) != Variance::Down)
        throw TensorError("metric must be a (0,2) tensor");
    const Eigen::MatrixXd G = to_matrix(g);
    double scale = 0.0;
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j) scale = std::max(scale, std::abs(G(i, j)));
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(G(i, j) - G(j, i)) > 1e-12 * std::max(1.0, scale))
                throw MetricError("metric is not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw MetricError("metric is not positive definite");
    const auto& L = llt.matrixL();
    for (int i = 0; i < G.rows(); ++i)
        if (!(Eigen::MatrixXd(L)(i, i) > 0.0)) throw MetricError("metric is not positive definite");
    return llt;
}

}  // namespace

PointTensor values(const JetTensor& t) {
    PointTensor out(t.dim(), t.signature());
    for (std::size_t i = 0; i < t.size(); ++i) out.data()[i] = t.data()[i].value();
    return out;
}

JetTensor constant_jets(const PointTensor& t) {
    JetTensor out(t.dim(), t.signature());
    for (std::size_t i = 0; i < t.size(); ++i) out.data()[i] = expr::Jet(t.data()[i]);
    return out;
}

double max_abs(const PointTensor& t) {
    double m = 0.0;
    for (double v : t.data()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_difference(const PointTensor& a, const PointTensor& b) {
    PointTensor::require_same_shape(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double max_asymmetry(const PointTensor& t, int slot_a, int slot_b) {
    std::vector<int> order(static_cast<std::size_t>(t.rank()));
    for (int s = 0; s < t.rank(); ++s) order[static_cast<std::size_t>(s)] = s;
    std::swap(order[static_cast<std::size_t>(slot_a)], order[static_cast<std::size_t>(slot_b)]);
    return max_abs_difference(t, permute(t, order));
}

PointTensor identity(int dim) {
    PointTensor out(dim, {U, D});
    for (int i = 0; i < dim; ++i) out(i, i) = 1.0;
    return out;
}

PointTensor vector(std::vector<double> components) {
    PointTensor out(static_cast<int>(components.size()), {U});
    out.data() = std::move(components);
    return out;
}

PointTensor covector(std::vector<double> components) {
    PointTensor out(static_cast<int>(components.size()), {D});
    out.data() = std::move(components);
    return out;
}

PointTensor matrix(int dim, Signature signature, const std::vector<std::vector<double>>& rows) {
    PointTensor out(dim, std::move(signature));
    if (out.rank() != 2 || static_cast<int>(rows.size()) != dim) throw TensorError("matrix shape mismatch");
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != dim) throw TensorError("matrix shape mismatch");
        for (int j = 0; j < dim; ++j) out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return out;
}

PointTensor OrthonormalFrame::vector(int i) const { return tensor::vector(vectors_.at(static_cast<std::size_t>(i))); }

double OrthonormalFrame::orthonormality_defect(const PointTensor& g) const {
    double worst = 0.0;
    const int m = dim();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) s += (*this)(i, a) * g(a, b) * (*this)(j, b);
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

OrthonormalFrame orthonormal_frame(const PointTensor& g) {
    const auto llt = cholesky(g);
    const int m = g.dim();
    const Eigen::MatrixXd L = llt.matrixL();
    // Columns of L^-T are the frame vectors.
    const Eigen::MatrixXd E = L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
    std::vector<std::vector<double>> vecs(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) vecs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = E(k, i);
    return OrthonormalFrame(std::move(vecs));
}

PointTensor inverse_metric(const PointTensor& g) {
    const auto llt = cholesky(g);
    const int m = g.dim();
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m, m));
    PointTensor out(m, {U, U});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = 0.5 * (inv(i, j) + inv(j, i));
    return out;
}

JetTensor inverse_metric(const JetTensor& g) {
    if (g.rank() != 2 || g.variance(0) != Variance::Down || g.variance(1) != Variance::Down)
        throw TensorError("metric must be a (0,2) tensor");
    const int m = g.dim();
    int order = 0;
    for (const auto& c : g.data()) order = std::max(order, c.order());
    const PointTensor g0 = values(g);
    const PointTensor g0_inv = inverse_metric(g0);

    // A = -G0^-1 N with N = G - G0 (no constant terms).
    JetTensor A(m, {U, D});
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            expr::Jet acc;
            for (int k = 0; k < m; ++k) {
                expr::Jet n = g(k, j) - expr::Jet(g0(k, j));
                acc -= expr::Jet(g0_inv(i, k)) * n;
            }
            A(i, j) = acc;
        }
    }
    JetTensor result = constant_jets(g0_inv);
    JetTensor term = constant_jets(g0_inv);
    for (int k = 1; k <= order; ++k) {
        JetTensor next(m, {U, U});
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                expr::Jet acc;
                for (int p = 0; p < m; ++p) acc += A(i, p) * term(p, j);
                next(i, j) = acc;
            }
        term = next;
        result += term;
    }
    // Pin the layout: constant entries must carry the metric's dimension/order.
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            expr::Jet& v = result(i, j);
            if (v.is_constant()) {
                for (const auto& c : g.data())
                    if (!c.is_constant()) {
                        v = expr::Jet::constant(c.dim(), c.order(), v.value());
                        break;
                    }
            }
        }
    return result;
}

PointTensor frame_trace(const PointTensor& t, int slot_a, int slot_b, const OrthonormalFrame& frame) {
    if (t.variance(slot_a) != Variance::Down || t.variance(slot_b) != Variance::Down)
        throw TensorError("frame trace requires two lower slots");
    if (slot_a == slot_b) throw TensorError("frame trace requires distinct slots");
    Signature sig;
    for (int s = 0; s < t.rank(); ++s)
        if (s != slot_a && s != slot_b) sig.push_back(t.variance(s));
    const int m = t.dim();
    PointTensor out(m, sig);
    for (std::size_t f = 0; f < out.size(); ++f) {
        const auto idx = out.unflatten(f);
        std::vector<int> full(static_cast<std::size_t>(t.rank()));
        for (int s = 0, k = 0; s < t.rank(); ++s)
            if (s != slot_a && s != slot_b) full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(k++)];
        double acc = 0.0;
        for (int i = 0; i < m; ++i)
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) {
                    full[static_cast<std::size_t>(slot_a)] = a;
                    full[static_cast<std::size_t>(slot_b)] = b;
                    acc += frame(i, a) * frame(i, b) * t.at(full);
                }
        out.data()[f] = acc;
    }
    return out;
}

PointTensor insert_vector(const PointTensor& t, int slot, const PointTensor& v) {
    if (v.rank() != 1 || v.variance(0) != Variance::Up) throw TensorError("insert_vector expects a vector");
    if (t.variance(slot) != Variance::Down) throw TensorError("vectors can only be inserted into lower slots");
    Signature sig = t.signature();
    sig.erase(sig.begin() + slot);
    PointTensor out(t.dim(), sig);
    for (std::size_t f = 0; f < out.size(); ++f) {
        auto idx = out.unflatten(f);
        idx.insert(idx.begin() + slot, 0);
        double acc = 0.0;
        for (int a = 0; a < t.dim(); ++a) {
            idx[static_cast<std::size_t>(slot)] = a;
            acc += t.at(idx) * v(a);
        }
        out.data()[f] = acc;
    }
    return out;
}

}  // namespace statgeom::tensor
