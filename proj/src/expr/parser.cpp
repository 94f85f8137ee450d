// SPDX-License-Identifier: MIT
#include "statgeom/expr/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "statgeom/error.hpp"

namespace statgeom::expr {
namespace {

enum class TokenKind { Number, Identifier, Plus, Minus, Star, Slash, LParen, RParen, Comma, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string_view text;
    double number = 0.0;
    std::size_t offset = 0;
};

const char* describe(TokenKind k) {
    switch (k) {
        case TokenKind::Number: return "number";
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::Slash: return "'/'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::Comma: return "','";
        case TokenKind::End: return "end of input";
    }
    return "token";
}

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars, const std::map<std::string, double>& params,
           ParseOptions options)
        : src_(src), vars_(vars), params_(params), options_(options) {
        advance();
    }

    NodePtr parse() {
        NodePtr root = expression();
        if (tok_.kind != TokenKind::End) fail("unexpected " + std::string(describe(tok_.kind)), tok_.offset);
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::size_t offset) const {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
            if (src_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg + " at offset " + std::to_string(offset), offset, line, col);
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_.kind = TokenKind::End;
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_ + 1;
            while (end < src_.size() && std::isalnum(static_cast<unsigned char>(src_[end]))) ++end;
            tok_.kind = TokenKind::Identifier;
            tok_.text = src_.substr(pos_, end - pos_);
            pos_ = end;
            return;
        }
        switch (c) {
            case '+': tok_.kind = TokenKind::Plus; break;
            case '-': tok_.kind = TokenKind::Minus; break;
            case '*': tok_.kind = TokenKind::Star; break;
            case '/': tok_.kind = TokenKind::Slash; break;
            case '(': tok_.kind = TokenKind::LParen; break;
            case ')': tok_.kind = TokenKind::RParen; break;
            case ',': tok_.kind = TokenKind::Comma; break;
            default: fail(std::string("unexpected character '") + c + "'", pos_);
        }
        tok_.text = src_.substr(pos_, 1);
        ++pos_;
    }

    void lex_number() {
        std::size_t end = pos_;
        bool digits = false;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
            ++end;
            digits = true;
        }
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
                ++end;
                digits = true;
            }
        }
        if (!digits) fail("malformed number", pos_);
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t exp = end + 1;
            if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
            if (exp >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[exp])))
                fail("malformed number exponent", end);
            while (exp < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp]))) ++exp;
            end = exp;
        }
        if (end < src_.size() && std::isalpha(static_cast<unsigned char>(src_[end])))
            fail("malformed number", pos_);
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + pos_, src_.data() + end, value);
        if (res.ec != std::errc() || res.ptr != src_.data() + end) fail("malformed number", pos_);
        tok_.kind = TokenKind::Number;
        tok_.text = src_.substr(pos_, end - pos_);
        tok_.number = value;
        pos_ = end;
    }

    void expect(TokenKind k) {
        if (tok_.kind != k)
            fail("expected " + std::string(describe(k)) + ", found " + describe(tok_.kind), tok_.offset);
        advance();
    }

    static NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->children = {std::move(lhs), std::move(rhs)};
        return n;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        while (tok_.kind == TokenKind::Plus || tok_.kind == TokenKind::Minus) {
            const auto kind = tok_.kind == TokenKind::Plus ? NodeKind::Add : NodeKind::Subtract;
            advance();
            lhs = make_binary(kind, lhs, term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (tok_.kind == TokenKind::Star || tok_.kind == TokenKind::Slash) {
            const auto kind = tok_.kind == TokenKind::Star ? NodeKind::Multiply : NodeKind::Divide;
            advance();
            lhs = make_binary(kind, lhs, unary());
        }
        return lhs;
    }

    NodePtr unary() {
        if (tok_.kind == TokenKind::Minus) {
            advance();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Negate;
            n->children = {unary()};
            return n;
        }
        return primary();
    }

    NodePtr primary() {
        const Token t = tok_;
        switch (t.kind) {
            case TokenKind::Number: {
                advance();
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Constant;
                n->value = t.number;
                return n;
            }
            case TokenKind::LParen: {
                advance();
                NodePtr inner = expression();
                expect(TokenKind::RParen);
                return inner;
            }
            case TokenKind::Identifier: {
                advance();
                if (tok_.kind == TokenKind::LParen) return call(t);
                return identifier(t);
            }
            default: fail("expected an operand, found " + std::string(describe(t.kind)), t.offset);
        }
    }

    NodePtr identifier(const Token& t) {
        const std::string name(t.text);
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) {
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Variable;
                n->index = static_cast<int>(i);
                n->name = name;
                return n;
            }
        }
        if (auto it = params_.find(name); it != params_.end()) {
            auto n = std::make_shared<Node>();
            n->kind = options_.substitute_parameters ? NodeKind::Constant : NodeKind::Parameter;
            n->name = options_.substitute_parameters ? std::string() : name;
            n->value = it->second;
            return n;
        }
        fail("unknown identifier '" + name + "'", t.offset);
    }

    NodePtr call(const Token& t) {
        static const std::map<std::string, Function, std::less<>> functions{
            {"pow", Function::Pow}, {"exp", Function::Exp}, {"log", Function::Log},
            {"sin", Function::Sin}, {"cos", Function::Cos}, {"sqrt", Function::Sqrt}};
        const auto it = functions.find(t.text);
        if (it == functions.end()) fail("unknown function '" + std::string(t.text) + "'", t.offset);
        expect(TokenKind::LParen);
        std::vector<NodePtr> args;
        std::vector<std::size_t> arg_offsets;
        if (tok_.kind != TokenKind::RParen) {
            arg_offsets.push_back(tok_.offset);
            args.push_back(expression());
            while (tok_.kind == TokenKind::Comma) {
                advance();
                arg_offsets.push_back(tok_.offset);
                args.push_back(expression());
            }
        }
        expect(TokenKind::RParen);
        const std::size_t arity = it->second == Function::Pow ? 2 : 1;
        if (args.size() != arity)
            fail(std::string(t.text) + " expects " + std::to_string(arity) + " argument(s)", t.offset);
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Call;
        n->function = it->second;
        if (it->second == Function::Pow) {
            if (depends_on_variables(*args[1])) fail("pow exponent must be constant", arg_offsets[1]);
            n->value = Expression(args[1], {}, "").evaluate({});
            n->children = {args[0], args[1]};
        } else {
            n->children = {args[0]};
        }
        return n;
    }

    std::string_view src_;
    const std::vector<std::string>& vars_;
    const std::map<std::string, double>& params_;
    ParseOptions options_;
    std::size_t pos_ = 0;
    Token tok_;
};

bool valid_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Expression parse_expression(std::string_view source, const std::vector<std::string>& variables,
                            const std::map<std::string, double>& parameters, ParseOptions options) {
    std::set<std::string> seen;
    for (const auto& v : variables) {
        if (!valid_identifier(v)) throw ValidationError("invalid coordinate name '" + v + "'");
        if (!seen.insert(v).second) throw ValidationError("duplicate coordinate name '" + v + "'");
    }
    for (const auto& [name, value] : parameters) {
        if (!valid_identifier(name)) throw ValidationError("invalid parameter name '" + name + "'");
        if (seen.count(name) != 0) throw ValidationError("parameter '" + name + "' shadows a coordinate");
    }
    bool blank = true;
    for (char c : source)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) throw ParseError("empty expression at offset 0", 0, 1, 1);
    Parser parser(source, variables, parameters, options);
    return Expression(parser.parse(), variables, std::string(source));
}

}  // namespace statgeom::expr
