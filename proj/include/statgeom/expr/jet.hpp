// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace statgeom::expr {

inline constexpr int kMaxJetDim = 8;
inline constexpr int kMaxJetOrder = 3;

using MultiIndex = std::array<std::uint8_t, kMaxJetDim>;

/// Monomial bookkeeping for truncated Taylor polynomials in `dim` variables up
/// to total degree kMaxJetOrder. Monomials are sorted by total degree, so the
/// coefficients of an order-o jet are a prefix of the order-3 layout.
struct JetLayout {
    struct Product {
        std::uint16_t lhs;
        std::uint16_t rhs;
        std::uint16_t out;
    };
    struct Shift {
        std::uint16_t from;  // index of beta + e_l
        double factor;       // beta_l + 1
    };

    int dim = 0;
    std::vector<MultiIndex> monomials;
    std::array<std::size_t, kMaxJetOrder + 2> degree_offset{};  // count of monomials with degree < d
    std::vector<Product> products;                              // sorted by degree of `out`
    std::array<std::size_t, kMaxJetOrder + 1> products_end{};   // products with deg(out) <= o
    std::vector<std::vector<Shift>> shifts;                     // per direction l, per target monomial
    std::vector<double> factorial;                              // alpha! per monomial

    std::size_t count(int order) const { return degree_offset[static_cast<std::size_t>(order) + 1]; }
    std::size_t index_of(const MultiIndex& alpha) const;

    static const JetLayout& get(int dim);
};

/// Truncated multivariate Taylor expansion about a point:
///   f(x0 + h) ~ sum_alpha c_alpha h^alpha,  |alpha| <= order.
/// Coefficients are normalized (c_alpha = d^alpha f / alpha!), so mixed-partial
/// symmetry holds by construction. A default-constructed jet is the constant 0
/// and combines with jets of any dimension/order.
class Jet {
public:
    static constexpr int kConstant = -1;

    Jet() : coeffs_{0.0} {}
    Jet(double value) : coeffs_{value} {}  // NOLINT(google-explicit-constructor): scalars promote

    static Jet constant(int dim, int order, double value);
    static Jet variable(int dim, int order, int index, double value);
    static Jet from_coefficients(int dim, int order, std::vector<double> coeffs);

    bool is_constant() const noexcept { return order_ == kConstant; }
    int dim() const noexcept { return dim_; }
    /// kConstant for layout-free constants.
    int order() const noexcept { return order_; }
    double value() const noexcept { return coeffs_[0]; }

    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    /// Normalized coefficient c_alpha (zero beyond the jet's order).
    double coefficient(const MultiIndex& alpha) const;
    /// Partial derivative d^alpha f at the expansion point, where alpha is given
    /// as a list of coordinate indices, e.g. {0, 1} for d^2 f / dx0 dx1.
    double partial(std::initializer_list<int> coords) const;
    double partial(std::span<const int> coords) const;

    /// Jet of d f / dx_l, one order lower.
    Jet derivative(int l) const;
    Jet truncated(int order) const;

    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(const Jet& rhs);
    Jet& operator/=(const Jet& rhs);

    friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
    friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
    friend Jet operator*(const Jet& lhs, const Jet& rhs);
    friend Jet operator/(const Jet& lhs, const Jet& rhs);
    friend Jet operator-(Jet j);

    /// f(u) for a univariate f given its derivatives f^(k)(u0), k = 0..3.
    Jet compose(const std::array<double, kMaxJetOrder + 1>& derivatives) const;

private:
    Jet(int dim, int order, std::vector<double> coeffs) : dim_(dim), order_(order), coeffs_(std::move(coeffs)) {}

    static void unify(Jet& a, const Jet& b, int& dim, int& order);
    Jet promoted(int dim, int order) const;

    int dim_ = 0;
    int order_ = kConstant;
    std::vector<double> coeffs_;
};

Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sqrt(const Jet& u);
Jet pow(const Jet& u, double exponent);
Jet reciprocal(const Jet& u);

}  // namespace statgeom::expr
