// SPDX-License-Identifier: MIT
#include "statgeom/expr/evaluate.hpp"

#include <cmath>
#include <vector>

#include "statgeom/error.hpp"
#include "statgeom/expr/domain.hpp"

namespace statgeom::expr {
namespace {

struct JetEvaluator {
    std::span<const double> point;
    int dim;
    int order;

    Jet eval(const Node& n) const {
        switch (n.kind) {
            case NodeKind::Constant:
            case NodeKind::Parameter: return Jet::constant(dim, order, n.value);
            case NodeKind::Variable:
                return Jet::variable(dim, order, n.index, point[static_cast<std::size_t>(n.index)]);
            case NodeKind::Negate: return -eval(*n.children[0]);
            case NodeKind::Add: return eval(*n.children[0]) + eval(*n.children[1]);
            case NodeKind::Subtract: return eval(*n.children[0]) - eval(*n.children[1]);
            case NodeKind::Multiply: return eval(*n.children[0]) * eval(*n.children[1]);
            case NodeKind::Divide: {
                const Jet den = eval(*n.children[1]);
                detail::check_divisor(n, den.value());
                return finite(n, eval(*n.children[0]) / den);
            }
            case NodeKind::Call: {
                const Jet a = eval(*n.children[0]);
                detail::check_argument(n, a.value(), order);
                switch (n.function) {
                    case Function::Pow: return finite(n, pow(a, n.value));
                    case Function::Exp: return finite(n, exp(a));
                    case Function::Log: return log(a);
                    case Function::Sin: return sin(a);
                    case Function::Cos: return cos(a);
                    case Function::Sqrt: return finite(n, sqrt(a));
                }
            }
        }
        throw Error("corrupt expression node");
    }

    static Jet finite(const Node& n, Jet j) {
        for (double c : j.coefficients()) detail::check_finite(n, c);
        return j;
    }
};

}  // namespace

Jet eval_jet(const Expression& e, std::span<const double> point, int order) {
    if (e.empty()) throw Error("evaluating an empty expression");
    if (order < 0 || order > kMaxJetOrder) throw Error("jet order must be in 0..3");
    if (static_cast<int>(point.size()) != e.dim()) throw Error("point dimension does not match expression variables");
    JetEvaluator ev{point, e.dim(), order};
    Jet j = ev.eval(e.root());
    return j.is_constant() ? Jet::constant(e.dim(), order, j.value()) : j;
}

Jet fd_jet(const Expression& e, std::span<const double> point, int order, double h) {
    if (order < 1 || order > 2) throw Error("finite-difference jets support order 1 or 2");
    if (!(h > 0.0)) throw Error("finite-difference step must be positive");
    const int m = e.dim();
    if (static_cast<int>(point.size()) != m) throw Error("point dimension does not match expression variables");

    std::vector<double> x(point.begin(), point.end());
    auto at = [&](int i, double di, int j, double dj) {
        std::vector<double> y = x;
        if (i >= 0) y[static_cast<std::size_t>(i)] += di;
        if (j >= 0) y[static_cast<std::size_t>(j)] += dj;
        try {
            return e.evaluate(y);
        } catch (const DomainError& err) {
            throw DomainError("finite-difference step leaves the domain", err.subexpression());
        }
    };

    const auto& layout = JetLayout::get(m);
    std::vector<double> c(layout.count(order), 0.0);
    const double f0 = at(-1, 0, -1, 0);
    c[0] = f0;
    for (int i = 0; i < m; ++i) {
        const double fp = at(i, h, -1, 0);
        const double fm = at(i, -h, -1, 0);
        c[1 + static_cast<std::size_t>(i)] = (fp - fm) / (2.0 * h);
        if (order == 2) {
            MultiIndex a{};
            a[static_cast<std::size_t>(i)] = 2;
            c[layout.index_of(a)] = (fp - 2.0 * f0 + fm) / (h * h) / 2.0;
        }
    }
    if (order == 2) {
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                const double fpp = at(i, h, j, h);
                const double fpm = at(i, h, j, -h);
                const double fmp = at(i, -h, j, h);
                const double fmm = at(i, -h, j, -h);
                MultiIndex a{};
                a[static_cast<std::size_t>(i)] = 1;
                a[static_cast<std::size_t>(j)] = 1;
                c[layout.index_of(a)] = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            }
        }
    }
    return Jet::from_coefficients(m, order, std::move(c));
}

}  // namespace statgeom::expr
