// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "statgeom/error.hpp"
#include "statgeom/expr/jet.hpp"

namespace statgeom::tensor {

inline constexpr int kMaxDim = 8;

enum class Variance : unsigned char { Up, Down };

using Signature = std::vector<Variance>;

inline constexpr Variance U = Variance::Up;
inline constexpr Variance D = Variance::Down;

/// Dense multi-index array of components at a point. Slot s has variance
/// signature()[s]; components are stored row-major with slot 0 outermost.
template <class Scalar>
class Tensor {
public:
    Tensor() = default;
    Tensor(int dim, Signature signature, Scalar fill = Scalar{}) : dim_(dim), signature_(std::move(signature)) {
        if (dim < 1 || dim > kMaxDim) throw TensorError("tensor dimension must be in 1..8");
        std::size_t n = 1;
        for (std::size_t s = 0; s < signature_.size(); ++s) n *= static_cast<std::size_t>(dim);
        data_.assign(n, fill);
    }

    static Tensor scalar(int dim, Scalar v) { return Tensor(dim, {}, std::move(v)); }

    int dim() const noexcept { return dim_; }
    int rank() const noexcept { return static_cast<int>(signature_.size()); }
    const Signature& signature() const noexcept { return signature_; }
    Variance variance(int slot) const { return signature_.at(static_cast<std::size_t>(slot)); }
    std::size_t size() const noexcept { return data_.size(); }

    std::vector<Scalar>& data() noexcept { return data_; }
    const std::vector<Scalar>& data() const noexcept { return data_; }

    template <class... I>
    Scalar& operator()(I... idx) {
        return data_[offset({static_cast<int>(idx)...})];
    }
    template <class... I>
    const Scalar& operator()(I... idx) const {
        return data_[offset({static_cast<int>(idx)...})];
    }

    Scalar& at(const std::vector<int>& idx) { return data_[offset(idx)]; }
    const Scalar& at(const std::vector<int>& idx) const { return data_[offset(idx)]; }

    /// Multi-index of a flat position.
    std::vector<int> unflatten(std::size_t flat) const {
        std::vector<int> idx(signature_.size());
        for (std::size_t s = signature_.size(); s-- > 0;) {
            idx[s] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
            flat /= static_cast<std::size_t>(dim_);
        }
        return idx;
    }

    std::size_t offset(const std::vector<int>& idx) const {
        if (idx.size() != signature_.size()) throw TensorError("index count does not match tensor rank");
        std::size_t off = 0;
        for (int i : idx) {
            if (i < 0 || i >= dim_) throw TensorError("tensor index out of range");
            off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        }
        return off;
    }

    Tensor& operator+=(const Tensor& rhs) {
        require_same_shape(*this, rhs);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
        return *this;
    }
    Tensor& operator-=(const Tensor& rhs) {
        require_same_shape(*this, rhs);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
        return *this;
    }
    Tensor& operator*=(const Scalar& s) {
        for (auto& v : data_) v = v * s;
        return *this;
    }
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(Tensor a, const Scalar& s) { return a *= s; }
    friend Tensor operator*(const Scalar& s, Tensor a) { return a *= s; }
    friend Tensor operator-(Tensor a) {
        for (auto& v : a.data_) v = -v;
        return a;
    }

    static void require_same_shape(const Tensor& a, const Tensor& b) {
        if (a.dim_ != b.dim_ || a.signature_ != b.signature_) throw TensorError("tensor shape/signature mismatch");
    }

private:
    int dim_ = 0;
    Signature signature_;
    std::vector<Scalar> data_;
};

using PointTensor = Tensor<double>;
using JetTensor = Tensor<expr::Jet>;

/// Component values of a jet tensor at the expansion point.
PointTensor values(const JetTensor& t);
/// Promote point values to constant jets.
JetTensor constant_jets(const PointTensor& t);

/// Permute slots: result slot s is source slot order[s].
template <class S>
Tensor<S> permute(const Tensor<S>& t, const std::vector<int>& order) {
    if (static_cast<int>(order.size()) != t.rank()) throw TensorError("permutation length mismatch");
    Signature sig;
    for (int s : order) sig.push_back(t.variance(s));
    Tensor<S> out(t.dim(), sig);
    for (std::size_t f = 0; f < out.size(); ++f) {
        const auto idx = out.unflatten(f);
        std::vector<int> src(idx.size());
        for (std::size_t s = 0; s < order.size(); ++s) src[static_cast<std::size_t>(order[s])] = idx[s];
        out.data()[f] = t.at(src);
    }
    return out;
}

template <class S>
Tensor<S> tensor_product(const Tensor<S>& a, const Tensor<S>& b) {
    if (a.dim() != b.dim()) throw TensorError("tensor dimension mismatch");
    Signature sig = a.signature();
    sig.insert(sig.end(), b.signature().begin(), b.signature().end());
    Tensor<S> out(a.dim(), sig);
    std::size_t f = 0;
    for (const auto& x : a.data())
        for (const auto& y : b.data()) out.data()[f++] = x * y;
    return out;
}

/// Einstein contraction of an upper and a lower slot.
template <class S>
Tensor<S> contract(const Tensor<S>& t, int slot_a, int slot_b) {
    if (slot_a == slot_b || slot_a < 0 || slot_b < 0 || slot_a >= t.rank() || slot_b >= t.rank())
        throw TensorError("invalid contraction slots");
    if (t.variance(slot_a) == t.variance(slot_b)) throw TensorError("contraction requires slots of opposite variance");
    Signature sig;
    for (int s = 0; s < t.rank(); ++s)
        if (s != slot_a && s != slot_b) sig.push_back(t.variance(s));
    Tensor<S> out(t.dim(), sig);
    for (std::size_t f = 0; f < out.size(); ++f) {
        const auto idx = out.unflatten(f);
        std::vector<int> full(static_cast<std::size_t>(t.rank()));
        for (int s = 0, k = 0; s < t.rank(); ++s)
            if (s != slot_a && s != slot_b) full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(k++)];
        S acc{};
        for (int i = 0; i < t.dim(); ++i) {
            full[static_cast<std::size_t>(slot_a)] = i;
            full[static_cast<std::size_t>(slot_b)] = i;
            acc += t.at(full);
        }
        out.data()[f] = acc;
    }
    return out;
}

namespace detail {

template <class S>
Tensor<S> flip_slot(const Tensor<S>& t, int slot, const Tensor<S>& metric, Variance from, Variance to) {
    if (slot < 0 || slot >= t.rank()) throw TensorError("slot out of range");
    if (t.variance(slot) != from) throw TensorError("slot has the wrong variance for this operation");
    if (metric.rank() != 2 || metric.dim() != t.dim() || metric.variance(0) != to || metric.variance(1) != to)
        throw TensorError("metric tensor has the wrong signature");
    Signature sig = t.signature();
    sig[static_cast<std::size_t>(slot)] = to;
    Tensor<S> out(t.dim(), sig);
    for (std::size_t f = 0; f < out.size(); ++f) {
        auto idx = out.unflatten(f);
        const int a = idx[static_cast<std::size_t>(slot)];
        S acc{};
        for (int b = 0; b < t.dim(); ++b) {
            idx[static_cast<std::size_t>(slot)] = b;
            acc += metric(a, b) * t.at(idx);
        }
        out.data()[f] = acc;
    }
    return out;
}

}  // namespace detail

template <class S>
Tensor<S> raise_index(const Tensor<S>& t, int slot, const Tensor<S>& g_inv) {
    return detail::flip_slot(t, slot, g_inv, Variance::Down, Variance::Up);
}

template <class S>
Tensor<S> lower_index(const Tensor<S>& t, int slot, const Tensor<S>& g) {
    return detail::flip_slot(t, slot, g, Variance::Up, Variance::Down);
}

/// Metric pair (g_ij, g^ij) used for musical isomorphisms and inner products.
template <class S>
struct Metric {
    Tensor<S> g;
    Tensor<S> g_inv;
};

/// Full contraction g(a, b): every slot of `b` is flipped with g or g^-1 and
/// paired with the matching slot of `a`.
template <class S>
S inner(const Metric<S>& metric, const Tensor<S>& a, const Tensor<S>& b) {
    Tensor<S>::require_same_shape(a, b);
    Tensor<S> flipped = b;
    for (int s = 0; s < b.rank(); ++s) {
        flipped = b.variance(s) == Variance::Up ? lower_index(flipped, s, metric.g)
                                                : raise_index(flipped, s, metric.g_inv);
    }
    S acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * flipped.data()[i];
    return acc;
}

/// g-trace of two lower slots.
template <class S>
Tensor<S> trace_g(const Tensor<S>& t, int slot_a, int slot_b, const Tensor<S>& g_inv) {
    return contract(raise_index(t, slot_a, g_inv), slot_a, slot_b);
}

double max_abs(const PointTensor& t);
double max_abs_difference(const PointTensor& a, const PointTensor& b);
/// Max |t(..i..j..) - t(..j..i..)| over all components.
double max_asymmetry(const PointTensor& t, int slot_a, int slot_b);

PointTensor identity(int dim);  // delta^i_j as a (1,1) tensor
PointTensor vector(std::vector<double> components);
PointTensor covector(std::vector<double> components);
PointTensor matrix(int dim, Signature signature, const std::vector<std::vector<double>>& rows);

}  // namespace statgeom::tensor
