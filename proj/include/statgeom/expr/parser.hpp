// SPDX-License-Identifier: MIT
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "statgeom/expr/ast.hpp"

namespace statgeom::expr {

struct ParseOptions {
    /// Fold parameters into constants instead of keeping named parameter nodes.
    bool substitute_parameters = false;
};

/// Parses the expression DSL:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | primary
///   primary := number | identifier | identifier '(' args ')' | '(' expr ')'
///
/// Identifiers are [a-zA-Z][a-zA-Z0-9]*; numbers are decimal literals with an
/// optional exponent. Calls: pow(base, exponent), exp, log, sin, cos, sqrt. The
/// pow exponent must not depend on coordinates.
///
/// Throws ParseError on syntax errors, unknown identifiers and non-constant
/// exponents.
Expression parse_expression(std::string_view source, const std::vector<std::string>& variables,
                            const std::map<std::string, double>& parameters = {}, ParseOptions options = {});

}  // namespace statgeom::expr
