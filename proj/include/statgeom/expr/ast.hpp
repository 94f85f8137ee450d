// SPDX-License-Identifier: MIT
#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace statgeom::expr {

enum class NodeKind { Constant, Variable, Parameter, Negate, Add, Subtract, Multiply, Divide, Call };

enum class Function { Pow, Exp, Log, Sin, Cos, Sqrt };

const char* function_name(Function f);

/// Immutable expression tree node. Subtrees are shared, never mutated.
struct Node {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;  // Constant, Parameter (bound value), Call Pow (exponent)
    int index = -1;      // Variable: coordinate slot
    std::string name;    // Variable / Parameter
    Function function = Function::Exp;
    std::vector<std::shared_ptr<const Node>> children;
};

using NodePtr = std::shared_ptr<const Node>;

/// A parsed expression together with the coordinate names it was parsed against.
class Expression {
public:
    Expression() = default;
    Expression(NodePtr root, std::vector<std::string> variables, std::string source)
        : root_(std::move(root)), variables_(std::move(variables)), source_(std::move(source)) {}

    const Node& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }
    const std::vector<std::string>& variables() const { return variables_; }
    int dim() const { return static_cast<int>(variables_.size()); }
    const std::string& source() const { return source_; }
    bool empty() const { return root_ == nullptr; }

    /// Plain double evaluation.
    double evaluate(std::span<const double> point) const;

private:
    NodePtr root_;
    std::vector<std::string> variables_;
    std::string source_;
};

/// Canonical infix rendering with minimal parentheses. Constants use the
/// shortest representation that round-trips to the same double.
std::string to_string(const Node& node);
inline std::string to_string(const Expression& e) { return to_string(e.root()); }

bool depends_on_variables(const Node& node);

}  // namespace statgeom::expr
