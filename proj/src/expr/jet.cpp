// SPDX-License-Identifier: MIT
#include "statgeom/expr/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "statgeom/error.hpp"

namespace statgeom::expr {
namespace {

int degree(const MultiIndex& a, int dim) {
    int d = 0;
    for (int i = 0; i < dim; ++i) d += a[static_cast<std::size_t>(i)];
    return d;
}

void enumerate(int dim, int remaining, int slot, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (slot == dim - 1) {
        cur[static_cast<std::size_t>(slot)] = static_cast<std::uint8_t>(remaining);
        out.push_back(cur);
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        cur[static_cast<std::size_t>(slot)] = static_cast<std::uint8_t>(k);
        enumerate(dim, remaining - k, slot + 1, cur, out);
    }
}

JetLayout build_layout(int dim) {
    JetLayout layout;
    layout.dim = dim;
    for (int d = 0; d <= kMaxJetOrder; ++d) {
        layout.degree_offset[static_cast<std::size_t>(d)] = layout.monomials.size();
        MultiIndex cur{};
        enumerate(dim, d, 0, cur, layout.monomials);
    }
    layout.degree_offset[kMaxJetOrder + 1] = layout.monomials.size();

    const std::size_t n = layout.monomials.size();
    layout.factorial.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f = 1.0;
        for (int c = 0; c < dim; ++c)
            for (int k = 2; k <= layout.monomials[i][static_cast<std::size_t>(c)]; ++k) f *= k;
        layout.factorial[i] = f;
    }

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            MultiIndex sum{};
            for (int c = 0; c < dim; ++c) {
                const auto cc = static_cast<std::size_t>(c);
                sum[cc] = static_cast<std::uint8_t>(layout.monomials[a][cc] + layout.monomials[b][cc]);
            }
            if (degree(sum, dim) > kMaxJetOrder) continue;
            layout.products.push_back({static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                                       static_cast<std::uint16_t>(layout.index_of(sum))});
        }
    }
    std::stable_sort(layout.products.begin(), layout.products.end(),
                     [](const JetLayout::Product& x, const JetLayout::Product& y) { return x.out < y.out; });
    for (int o = 0; o <= kMaxJetOrder; ++o) {
        const auto limit = layout.count(o);
        layout.products_end[static_cast<std::size_t>(o)] = static_cast<std::size_t>(
            std::count_if(layout.products.begin(), layout.products.end(),
                          [limit](const JetLayout::Product& p) { return p.out < limit; }));
    }

    layout.shifts.resize(static_cast<std::size_t>(dim));
    for (int l = 0; l < dim; ++l) {
        auto& table = layout.shifts[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < layout.count(kMaxJetOrder - 1); ++i) {
            MultiIndex up = layout.monomials[i];
            up[static_cast<std::size_t>(l)] += 1;
            table.push_back({static_cast<std::uint16_t>(layout.index_of(up)),
                             static_cast<double>(up[static_cast<std::size_t>(l)])});
        }
    }
    return layout;
}

}  // namespace

std::size_t JetLayout::index_of(const MultiIndex& alpha) const {
    const int d = degree(alpha, dim);
    if (d > kMaxJetOrder) throw Error("multi-index exceeds maximum jet order");
    const auto begin = monomials.begin() + static_cast<std::ptrdiff_t>(degree_offset[static_cast<std::size_t>(d)]);
    const auto end = monomials.begin() + static_cast<std::ptrdiff_t>(degree_offset[static_cast<std::size_t>(d) + 1]);
    for (auto it = begin; it != end; ++it) {
        if (std::equal(it->begin(), it->begin() + dim, alpha.begin())) {
            return static_cast<std::size_t>(it - monomials.begin());
        }
    }
    throw Error("multi-index not found in jet layout");
}

const JetLayout& JetLayout::get(int dim) {
    static const std::array<JetLayout, kMaxJetDim> layouts = [] {
        std::array<JetLayout, kMaxJetDim> out;
        for (int d = 1; d <= kMaxJetDim; ++d) out[static_cast<std::size_t>(d - 1)] = build_layout(d);
        return out;
    }();
    if (dim < 1 || dim > kMaxJetDim) throw Error("jet dimension must be in 1..8, got " + std::to_string(dim));
    return layouts[static_cast<std::size_t>(dim - 1)];
}

Jet Jet::constant(int dim, int order, double value) {
    if (order < 0 || order > kMaxJetOrder) throw Error("jet order must be in 0..3");
    std::vector<double> c(JetLayout::get(dim).count(order), 0.0);
    c[0] = value;
    return Jet(dim, order, std::move(c));
}

Jet Jet::variable(int dim, int order, int index, double value) {
    Jet j = constant(dim, order, value);
    if (index < 0 || index >= dim) throw Error("variable index out of range");
    if (order >= 1) j.coeffs_[1 + static_cast<std::size_t>(index)] = 1.0;
    return j;
}

Jet Jet::from_coefficients(int dim, int order, std::vector<double> coeffs) {
    if (order < 0 || order > kMaxJetOrder) throw Error("jet order must be in 0..3");
    if (coeffs.size() != JetLayout::get(dim).count(order)) throw Error("jet coefficient count mismatch");
    return Jet(dim, order, std::move(coeffs));
}

double Jet::coefficient(const MultiIndex& alpha) const {
    if (is_constant()) return degree(alpha, kMaxJetDim) == 0 ? coeffs_[0] : 0.0;
    const auto& layout = JetLayout::get(dim_);
    if (degree(alpha, dim_) > order_) return 0.0;
    return coeffs_[layout.index_of(alpha)];
}

double Jet::partial(std::initializer_list<int> coords) const {
    return partial(std::span<const int>(coords.begin(), coords.size()));
}

double Jet::partial(std::span<const int> coords) const {
    if (coords.empty()) return value();
    if (is_constant()) return 0.0;
    if (static_cast<int>(coords.size()) > order_) throw Error("derivative order exceeds jet order");
    MultiIndex alpha{};
    for (int c : coords) {
        if (c < 0 || c >= dim_) throw Error("derivative coordinate out of range");
        alpha[static_cast<std::size_t>(c)] += 1;
    }
    const auto& layout = JetLayout::get(dim_);
    const auto idx = layout.index_of(alpha);
    return coeffs_[idx] * layout.factorial[idx];
}

Jet Jet::derivative(int l) const {
    if (is_constant()) return Jet(0.0);
    if (order_ == 0) throw Error("cannot differentiate an order-0 jet");
    if (l < 0 || l >= dim_) throw Error("derivative coordinate out of range");
    const auto& layout = JetLayout::get(dim_);
    const auto& table = layout.shifts[static_cast<std::size_t>(l)];
    std::vector<double> out(layout.count(order_ - 1));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = table[i].factor * coeffs_[table[i].from];
    return Jet(dim_, order_ - 1, std::move(out));
}

Jet Jet::truncated(int order) const {
    if (is_constant() || order >= order_) return *this;
    if (order < 0) throw Error("jet order must be non-negative");
    std::vector<double> c(coeffs_.begin(),
                          coeffs_.begin() + static_cast<std::ptrdiff_t>(JetLayout::get(dim_).count(order)));
    return Jet(dim_, order, std::move(c));
}

Jet Jet::promoted(int dim, int order) const {
    if (!is_constant()) return truncated(order);
    return constant(dim, order, coeffs_[0]);
}

void Jet::unify(Jet& a, const Jet& b, int& dim, int& order) {
    if (a.is_constant() && b.is_constant()) {
        dim = 0;
        order = kConstant;
        return;
    }
    if (!a.is_constant() && !b.is_constant() && a.dim_ != b.dim_) throw Error("jet dimension mismatch");
    dim = a.is_constant() ? b.dim_ : a.dim_;
    if (a.is_constant()) order = b.order_;
    else if (b.is_constant()) order = a.order_;
    else order = std::min(a.order_, b.order_);
    a = a.promoted(dim, order);
}

Jet& Jet::operator+=(const Jet& rhs) {
    int dim = 0, order = 0;
    unify(*this, rhs, dim, order);
    if (order == kConstant) {
        coeffs_[0] += rhs.coeffs_[0];
        return *this;
    }
    if (rhs.is_constant()) {
        coeffs_[0] += rhs.coeffs_[0];
        return *this;
    }
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
    int dim = 0, order = 0;
    unify(*this, rhs, dim, order);
    if (order == kConstant || rhs.is_constant()) {
        coeffs_[0] -= rhs.coeffs_[0];
        return *this;
    }
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
    if (lhs.is_constant() || rhs.is_constant()) {
        const Jet& scalar = lhs.is_constant() ? lhs : rhs;
        Jet out = lhs.is_constant() ? rhs : lhs;
        const double s = scalar.coeffs_[0];
        for (double& c : out.coeffs_) c *= s;
        return out;
    }
    if (lhs.dim_ != rhs.dim_) throw Error("jet dimension mismatch");
    const int order = std::min(lhs.order_, rhs.order_);
    const auto& layout = JetLayout::get(lhs.dim_);
    std::vector<double> out(layout.count(order), 0.0);
    const auto end = layout.products_end[static_cast<std::size_t>(order)];
    for (std::size_t p = 0; p < end; ++p) {
        const auto& prod = layout.products[p];
        out[prod.out] += lhs.coeffs_[prod.lhs] * rhs.coeffs_[prod.rhs];
    }
    return Jet(lhs.dim_, order, std::move(out));
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet operator/(const Jet& lhs, const Jet& rhs) { return lhs * reciprocal(rhs); }

Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet operator-(Jet j) {
    for (double& c : j.coeffs_) c = -c;
    return j;
}

Jet Jet::compose(const std::array<double, kMaxJetOrder + 1>& derivatives) const {
    if (is_constant() || order_ == 0) {
        Jet out = *this;
        out.coeffs_[0] = derivatives[0];
        return out;
    }
    Jet h = *this;
    h.coeffs_[0] = 0.0;
    Jet result = constant(dim_, order_, derivatives[0]);
    Jet power = h;
    double factorial = 1.0;
    for (int k = 1; k <= order_; ++k) {
        factorial *= k;
        const double scale = derivatives[static_cast<std::size_t>(k)] / factorial;
        if (scale != 0.0) {
            for (std::size_t i = 0; i < result.coeffs_.size(); ++i) result.coeffs_[i] += scale * power.coeffs_[i];
        }
        if (k < order_) power = power * h;
    }
    return result;
}

Jet exp(const Jet& u) {
    const double e = std::exp(u.value());
    return u.compose({e, e, e, e});
}

Jet log(const Jet& u) {
    const double a = u.value();
    return u.compose({std::log(a), 1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a)});
}

Jet sin(const Jet& u) {
    const double s = std::sin(u.value());
    const double c = std::cos(u.value());
    return u.compose({s, c, -s, -c});
}

Jet cos(const Jet& u) {
    const double s = std::sin(u.value());
    const double c = std::cos(u.value());
    return u.compose({c, -s, -c, s});
}

Jet sqrt(const Jet& u) { return pow(u, 0.5); }

Jet pow(const Jet& u, double exponent) {
    const double a = u.value();
    const bool integral = std::floor(exponent) == exponent;
    std::array<double, kMaxJetOrder + 1> d{};
    double falling = 1.0;
    for (int k = 0; k <= kMaxJetOrder; ++k) {
        const double p = exponent - k;
        if (integral && exponent >= 0 && p < 0) {
            d[static_cast<std::size_t>(k)] = 0.0;
        } else {
            d[static_cast<std::size_t>(k)] = falling * std::pow(a, p);
        }
        falling *= p;
    }
    return u.compose(d);
}

Jet reciprocal(const Jet& u) {
    const double a = u.value();
    return u.compose({1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a), -6.0 / (a * a * a * a)});
}

}  // namespace statgeom::expr
