// SPDX-License-Identifier: MIT
#include "statgeom/expr/ast.hpp"

#include <charconv>
#include <cmath>

#include "statgeom/error.hpp"
#include "statgeom/expr/domain.hpp"

namespace statgeom::expr {

const char* function_name(Function f) {
    switch (f) {
        case Function::Pow: return "pow";
        case Function::Exp: return "exp";
        case Function::Log: return "log";
        case Function::Sin: return "sin";
        case Function::Cos: return "cos";
        case Function::Sqrt: return "sqrt";
    }
    return "?";
}

bool depends_on_variables(const Node& node) {
    if (node.kind == NodeKind::Variable) return true;
    for (const auto& c : node.children)
        if (depends_on_variables(*c)) return true;
    return false;
}

namespace {

double eval(const Node& n, std::span<const double> x) {
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Parameter: return n.value;
        case NodeKind::Variable: return x[static_cast<std::size_t>(n.index)];
        case NodeKind::Negate: return -eval(*n.children[0], x);
        case NodeKind::Add: return eval(*n.children[0], x) + eval(*n.children[1], x);
        case NodeKind::Subtract: return eval(*n.children[0], x) - eval(*n.children[1], x);
        case NodeKind::Multiply: return eval(*n.children[0], x) * eval(*n.children[1], x);
        case NodeKind::Divide: {
            const double den = eval(*n.children[1], x);
            detail::check_divisor(n, den);
            return detail::check_finite(n, eval(*n.children[0], x) / den);
        }
        case NodeKind::Call: {
            const double a = eval(*n.children[0], x);
            detail::check_argument(n, a, 0);
            switch (n.function) {
                case Function::Pow: return detail::check_finite(n, std::pow(a, n.value));
                case Function::Exp: return detail::check_finite(n, std::exp(a));
                case Function::Log: return std::log(a);
                case Function::Sin: return std::sin(a);
                case Function::Cos: return std::cos(a);
                case Function::Sqrt: return std::sqrt(a);
            }
        }
    }
    throw Error("corrupt expression node");
}

int precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Subtract: return 1;
        case NodeKind::Multiply:
        case NodeKind::Divide: return 2;
        case NodeKind::Negate: return 3;
        case NodeKind::Constant: return n.value < 0 || std::signbit(n.value) ? 3 : 4;
        default: return 4;
    }
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void render(const Node& n, std::string& out) {
    auto child = [&out](const Node& c, bool parens) {
        if (parens) out += '(';
        render(c, out);
        if (parens) out += ')';
    };
    switch (n.kind) {
        case NodeKind::Constant: out += format_number(n.value); return;
        case NodeKind::Parameter:
        case NodeKind::Variable: out += n.name; return;
        case NodeKind::Negate:
            out += '-';
            child(*n.children[0], precedence(*n.children[0]) < 3);
            return;
        case NodeKind::Add:
        case NodeKind::Subtract:
        case NodeKind::Multiply:
        case NodeKind::Divide: {
            const int p = precedence(n);
            child(*n.children[0], precedence(*n.children[0]) < p);
            out += n.kind == NodeKind::Add        ? " + "
                   : n.kind == NodeKind::Subtract ? " - "
                   : n.kind == NodeKind::Multiply ? "*"
                                                  : "/";
            // Right operands of equal precedence keep their parentheses so the
            // re-parsed tree evaluates in the same order.
            child(*n.children[1], precedence(*n.children[1]) <= p);
            return;
        }
        case NodeKind::Call:
            out += function_name(n.function);
            out += '(';
            render(*n.children[0], out);
            if (n.function == Function::Pow) {
                out += ", ";
                render(*n.children[1], out);
            }
            out += ')';
            return;
    }
}

}  // namespace

double Expression::evaluate(std::span<const double> point) const {
    if (!root_) throw Error("evaluating an empty expression");
    if (point.size() < variables_.size()) throw Error("point dimension does not match expression variables");
    return eval(*root_, point);
}

std::string to_string(const Node& node) {
    std::string out;
    render(node, out);
    return out;
}

}  // namespace statgeom::expr
