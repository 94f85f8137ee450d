// SPDX-License-Identifier: MIT
#include "statgeom/geometry/differential.hpp"

#include <cmath>

#include "statgeom/error.hpp"

namespace statgeom::geometry {

using expr::Jet;
using tensor::D;
using tensor::Signature;
using tensor::U;
using tensor::Variance;

JetTensor partial_derivative(const JetTensor& t) {
    Signature sig = t.signature();
    sig.push_back(D);
    const int m = t.dim();
    JetTensor out(m, sig);
    for (std::size_t f = 0; f < t.size(); ++f) {
        const Jet& c = t.data()[f];
        for (int l = 0; l < m; ++l) {
            if (!c.is_constant() && c.order() == 0)
                throw Error("insufficient jet order for differentiation");
            out.data()[f * static_cast<std::size_t>(m) + static_cast<std::size_t>(l)] = c.derivative(l);
        }
    }
    return out;
}

JetTensor covariant_derivative(const JetTensor& t, const std::vector<const JetTensor*>& slot_connections) {
    if (static_cast<int>(slot_connections.size()) != t.rank())
        throw TensorError("one connection per slot is required");
    for (const auto* c : slot_connections) {
        if (c == nullptr || c->rank() != 3 || c->dim() != t.dim()) throw TensorError("invalid connection coefficients");
    }
    JetTensor out = partial_derivative(t);
    const int m = t.dim();
    const int r = t.rank();
    for (std::size_t f = 0; f < out.size(); ++f) {
        auto idx = out.unflatten(f);
        const int l = idx.back();
        std::vector<int> src(idx.begin(), idx.end() - 1);
        Jet acc;
        for (int s = 0; s < r; ++s) {
            const JetTensor& A = *slot_connections[static_cast<std::size_t>(s)];
            const int orig = src[static_cast<std::size_t>(s)];
            for (int c = 0; c < m; ++c) {
                src[static_cast<std::size_t>(s)] = c;
                if (t.variance(s) == Variance::Up) {
                    acc += A(orig, l, c) * t.at(src);
                } else {
                    acc -= A(c, l, orig) * t.at(src);
                }
            }
            src[static_cast<std::size_t>(s)] = orig;
        }
        out.data()[f] += acc;
    }
    return out;
}

JetTensor covariant_derivative(const JetTensor& t, const JetTensor& connection) {
    return covariant_derivative(t, std::vector<const JetTensor*>(static_cast<std::size_t>(t.rank()), &connection));
}

JetTensor christoffel(const JetTensor& g, const JetTensor& g_inv) {
    const int m = g.dim();
    const JetTensor dg = partial_derivative(g);  // dg(a, b, c) = d_c g_ab
    JetTensor lowered(m, {D, D, D});             // Gamma_{l, ij}
    for (int l = 0; l < m; ++l)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) lowered(l, i, j) = 0.5 * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
    JetTensor out(m, {U, D, D});
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                Jet acc;
                for (int l = 0; l < m; ++l) acc += g_inv(k, l) * lowered(l, i, j);
                out(k, i, j) = acc;
                out(k, j, i) = acc;
            }
    return out;
}

JetTensor riemann(const JetTensor& A) {
    const int m = A.dim();
    const JetTensor dA = partial_derivative(A);  // dA(q, j, k, i) = d_i A^q_jk
    JetTensor R(m, {U, D, D, D});
    for (int q = 0; q < m; ++q)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) {
                    Jet acc = dA(q, j, k, i) - dA(q, i, k, j);
                    for (int p = 0; p < m; ++p) acc += A(p, j, k) * A(q, i, p) - A(p, i, k) * A(q, j, p);
                    R(q, i, j, k) = acc;
                }
    return R;
}

PointTensor ricci(const PointTensor& R, const PointTensor& g, const OrthonormalFrame& frame) {
    // g(R(e_i, X) Y, e_i): lower the output slot, then frame-trace it against slot 1.
    const PointTensor lowered = tensor::lower_index(R, 0, g);
    return tensor::frame_trace(lowered, 0, 1, frame);
}

PointTensor ricci_contraction(const PointTensor& R) { return tensor::contract(R, 0, 1); }

double scalar_curvature(const PointTensor& ric, const PointTensor& g_inv) {
    return tensor::trace_g(ric, 0, 1, g_inv).data()[0];
}

JetTensor divergence(const JetTensor& V, const JetTensor& connection) {
    return tensor::contract(covariant_derivative(V, connection), 0, 1);
}

JetTensor gradient(const JetTensor& f, const JetTensor& g_inv) {
    return tensor::raise_index(partial_derivative(f), 0, g_inv);
}

JetTensor laplacian_scalar(const JetTensor& f, const JetTensor& connection, const JetTensor& g_inv) {
    if (f.rank() != 0) throw TensorError("laplacian_scalar expects a scalar field");
    const JetTensor hess = covariant_derivative(partial_derivative(f), connection);
    return tensor::trace_g(hess, 0, 1, g_inv);
}

JetTensor connection_laplacian(const JetTensor& xi, const JetTensor& bundle_connection,
                               const JetTensor& source_connection, const JetTensor& g_inv) {
    if (xi.rank() != 1 || xi.variance(0) != Variance::Up) throw TensorError("connection Laplacian expects a vector field");
    const JetTensor first = covariant_derivative(xi, bundle_connection);
    const JetTensor second = covariant_derivative(first, {&bundle_connection, &source_connection});
    return tensor::trace_g(second, 1, 2, g_inv);
}

JetTensor rough_laplacian(const JetTensor& V, const JetTensor& connection, const JetTensor& g_inv) {
    return connection_laplacian(V, connection, connection, g_inv);
}

double first_bianchi_residual(const PointTensor& R) {
    const int m = R.dim();
    double worst = 0.0;
    for (int q = 0; q < m; ++q)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    worst = std::max(worst, std::abs(R(q, i, j, k) + R(q, j, k, i) + R(q, k, i, j)));
    return worst;
}

}  // namespace statgeom::geometry
