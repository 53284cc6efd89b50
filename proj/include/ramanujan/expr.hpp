#pragma once

// Single-variable expression language for coefficient functions phi(n).
//
//   expr    := term (("+"|"-") term)* ;
//   term    := factor (("*"|"/") factor)* ;
//   factor  := "-" factor | power ;
//   power   := atom ("^" power)? ;          right operand starts with an atom
//   atom    := NUMBER | "n" | "pi" | "e" | IDENT "(" expr ("," expr)? ")" | "(" expr ")" ;
//
// "2^-n" is rejected: a negative exponent has to be parenthesized.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "ramanujan/eval_result.hpp"
#include "ramanujan/specfun.hpp"

namespace ramanujan::expr {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string expected, const std::string& what)
        : std::runtime_error(what), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class UnknownIdentifier : public ParseError {
public:
    UnknownIdentifier(std::size_t offset, std::string name)
        : ParseError(offset, "known identifier",
                     "unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

enum class Constant { pi, e };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { gamma, lgamma, rgamma, exp, ln, sqrt, sin, cos, pow };

struct FunctionInfo {
    Function fn;
    std::string_view name;
    int arity;
};

inline constexpr std::array<FunctionInfo, 9> function_table = {{
    {Function::gamma, "gamma", 1},
    {Function::lgamma, "lgamma", 1},
    {Function::rgamma, "rgamma", 1},
    {Function::exp, "exp", 1},
    {Function::ln, "ln", 1},
    {Function::sqrt, "sqrt", 1},
    {Function::sin, "sin", 1},
    {Function::cos, "cos", 1},
    {Function::pow, "pow", 2},
}};

inline const FunctionInfo& function_info(Function fn) {
    return function_table[static_cast<std::size_t>(fn)];
}

inline std::optional<Function> find_function(std::string_view name) {
    for (const auto& info : function_table)
        if (info.name == name) return info.fn;
    return std::nullopt;
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
    double value;
};
struct Variable {};
struct ConstantNode {
    Constant which;
};
struct Negate {
    NodePtr operand;
};
struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};
struct Call {
    Function fn;
    std::vector<NodePtr> args;
};

struct Node {
    std::variant<Number, Variable, ConstantNode, Negate, Binary, Call> data;
};

bool structurally_equal(const Node& a, const Node& b);

/// Immutable expression tree in the single variable n.
class Ast {
public:
    explicit Ast(NodePtr root) : root_(std::move(root)) {
        if (!root_) throw std::invalid_argument("Ast: null root");
    }

    const Node& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }

    friend bool operator==(const Ast& a, const Ast& b) {
        return structurally_equal(*a.root_, *b.root_);
    }

private:
    NodePtr root_;
};

// Node construction helpers.
inline NodePtr number(double v) { return std::make_shared<const Node>(Node{Number{v}}); }
inline NodePtr variable() { return std::make_shared<const Node>(Node{Variable{}}); }
inline NodePtr constant(Constant c) { return std::make_shared<const Node>(Node{ConstantNode{c}}); }
inline NodePtr negate(NodePtr a) { return std::make_shared<const Node>(Node{Negate{std::move(a)}}); }
inline NodePtr binary(BinaryOp op, NodePtr a, NodePtr b) {
    return std::make_shared<const Node>(Node{Binary{op, std::move(a), std::move(b)}});
}
inline NodePtr call(Function fn, std::vector<NodePtr> args) {
    if (static_cast<int>(args.size()) != function_info(fn).arity)
        throw std::invalid_argument("call: arity mismatch for " + std::string(function_info(fn).name));
    return std::make_shared<const Node>(Node{Call{fn, std::move(args)}});
}

inline bool structurally_equal(const Node& a, const Node& b) {
    if (a.data.index() != b.data.index()) return false;
    return std::visit(
        [&b](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.data);
            if constexpr (std::is_same_v<T, Number>) {
                return x.value == y.value && std::signbit(x.value) == std::signbit(y.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, ConstantNode>) {
                return x.which == y.which;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return structurally_equal(*x.operand, *y.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) &&
                       structurally_equal(*x.rhs, *y.rhs);
            } else {
                if (x.fn != y.fn || x.args.size() != y.args.size()) return false;
                for (std::size_t i = 0; i < x.args.size(); ++i)
                    if (!structurally_equal(*x.args[i], *y.args[i])) return false;
                return true;
            }
        },
        a.data);
}

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Ast parse() {
        NodePtr root = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("operator or end of input");
        return Ast(std::move(root));
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
        throw ParseError(pos_, expected,
                         "syntax error at offset " + std::to_string(pos_) + ": expected " + expected +
                             ", found " + found);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("'") + c + "'");
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = binary(BinaryOp::add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = binary(BinaryOp::sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (accept('*')) {
                lhs = binary(BinaryOp::mul, lhs, parse_factor());
            } else if (accept('/')) {
                lhs = binary(BinaryOp::div, lhs, parse_factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_factor() {
        if (accept('-')) return negate(parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (accept('^')) return binary(BinaryOp::pow, base, parse_power());
        return base;
    }

    NodePtr parse_number() {
        std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_, ++n;
            return n;
        };
        std::size_t int_digits = digits();
        std::size_t frac_digits = 0;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            frac_digits = digits();
        }
        if (int_digits + frac_digits == 0) {
            pos_ = start;
            fail("number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            // Only an exponent if digits follow; otherwise leave 'e' alone.
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec == std::errc::result_out_of_range) {
            pos_ = start;
            fail("representable number");
        }
        if (ec != std::errc() || ptr != text_.data() + pos_) {
            pos_ = start;
            fail("number");
        }
        return number(value);
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("number, identifier or '('");
        char c = text_[pos_];
        if ((c >= '0' && c <= '9') || c == '.') return parse_number();
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (c >= 'a' && c <= 'z') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ((text_[pos_] >= 'a' && text_[pos_] <= 'z') ||
                                           (text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (name == "n") return variable();
            if (name == "pi") return constant(Constant::pi);
            if (name == "e") return constant(Constant::e);
            auto fn = find_function(name);
            if (!fn) throw UnknownIdentifier(start, name);
            expect('(');
            std::vector<NodePtr> args;
            args.push_back(parse_expr());
            if (accept(',')) args.push_back(parse_expr());
            int arity = function_info(*fn).arity;
            if (static_cast<int>(args.size()) != arity) {
                if (static_cast<int>(args.size()) < arity) fail("','");
                fail("')'");
            }
            expect(')');
            return call(*fn, std::move(args));
        }
        fail("number, identifier or '('");
    }
};

inline std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

inline void format_into(const Node& node, std::string& out) {
    std::visit(
        [&out](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Number>) {
                out += format_number(x.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += 'n';
            } else if constexpr (std::is_same_v<T, ConstantNode>) {
                out += x.which == Constant::pi ? "pi" : "e";
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += "(-";
                format_into(*x.operand, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, Binary>) {
                static constexpr std::array<const char*, 5> symbols = {" + ", " - ", " * ", " / ", " ^ "};
                out += '(';
                format_into(*x.lhs, out);
                out += symbols[static_cast<std::size_t>(x.op)];
                format_into(*x.rhs, out);
                out += ')';
            } else {
                out += function_info(x.fn).name;
                out += '(';
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    if (i) out += ", ";
                    format_into(*x.args[i], out);
                }
                out += ')';
            }
        },
        node.data);
}

inline EvalResult apply_function(Function fn, double a, double b) {
    switch (fn) {
        case Function::gamma: {
            auto g = specfun::gamma(a);
            if (g.at_pole) return EvalResult::pole("gamma pole at " + format_number(a));
            return EvalResult::ok(g.value);
        }
        case Function::lgamma:
            if (specfun::is_gamma_pole(a)) return EvalResult::pole("lgamma pole at " + format_number(a));
            if (!(a > 0.0)) return EvalResult::domain("lgamma of non-positive argument");
            return EvalResult::ok(specfun::log_gamma(a));
        case Function::rgamma:
            return EvalResult::ok(specfun::reciprocal_gamma(a));
        case Function::exp:
            return EvalResult::ok(std::exp(a));
        case Function::ln:
            if (!(a > 0.0)) return EvalResult::domain("ln of non-positive argument");
            return EvalResult::ok(std::log(a));
        case Function::sqrt:
            if (a < 0.0) return EvalResult::domain("sqrt of negative argument");
            return EvalResult::ok(std::sqrt(a));
        case Function::sin:
            return EvalResult::ok(std::sin(a));
        case Function::cos:
            return EvalResult::ok(std::cos(a));
        case Function::pow:
            break;
    }
    double p = std::pow(a, b);
    if (std::isnan(p) && !std::isnan(a) && !std::isnan(b))
        return EvalResult::domain("pow of negative base with non-integer exponent");
    return EvalResult::ok(p);
}

inline EvalResult eval_node(const Node& node, double n) {
    return std::visit(
        [n](const auto& x) -> EvalResult {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Number>) {
                return EvalResult::ok(x.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                return EvalResult::ok(n);
            } else if constexpr (std::is_same_v<T, ConstantNode>) {
                return EvalResult::ok(x.which == Constant::pi ? std::numbers::pi : std::numbers::e);
            } else if constexpr (std::is_same_v<T, Negate>) {
                auto r = eval_node(*x.operand, n);
                if (r.is_ok()) r.value = -r.value;
                return r;
            } else if constexpr (std::is_same_v<T, Binary>) {
                auto l = eval_node(*x.lhs, n);
                if (!l.is_ok()) return l;
                auto r = eval_node(*x.rhs, n);
                if (!r.is_ok()) return r;
                switch (x.op) {
                    case BinaryOp::add: return EvalResult::ok(l.value + r.value);
                    case BinaryOp::sub: return EvalResult::ok(l.value - r.value);
                    case BinaryOp::mul: return EvalResult::ok(l.value * r.value);
                    case BinaryOp::div:
                        if (r.value == 0.0) return EvalResult::domain("division by zero");
                        return EvalResult::ok(l.value / r.value);
                    case BinaryOp::pow: return apply_function(Function::pow, l.value, r.value);
                }
                return EvalResult::domain("unknown operator");
            } else {
                std::array<double, 2> args{0.0, 0.0};
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    auto r = eval_node(*x.args[i], n);
                    if (!r.is_ok()) return r;
                    args[i] = r.value;
                }
                return apply_function(x.fn, args[0], args[1]);
            }
        },
        node.data);
}

}  // namespace detail

/// Parses `text`; throws ParseError (or UnknownIdentifier) on failure.
inline Ast parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Evaluates at n = `n_value`. Never throws; gamma poles and domain errors
/// come back as distinct statuses. rgamma at a pole is exactly 0.
inline EvalResult eval_ast(const Ast& ast, double n_value) { return detail::eval_node(ast.root(), n_value); }

/// Fully parenthesized canonical text; parse(format_ast(a)) == a.
inline std::string format_ast(const Ast& ast) {
    std::string out;
    detail::format_into(ast.root(), out);
    return out;
}

/// Replaces every occurrence of the variable n by `replacement`.
inline NodePtr substitute(const NodePtr& node, const NodePtr& replacement) {
    return std::visit(
        [&](const auto& x) -> NodePtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Variable>) {
                return replacement;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return negate(substitute(x.operand, replacement));
            } else if constexpr (std::is_same_v<T, Binary>) {
                return binary(x.op, substitute(x.lhs, replacement), substitute(x.rhs, replacement));
            } else if constexpr (std::is_same_v<T, Call>) {
                std::vector<NodePtr> args;
                for (const auto& a : x.args) args.push_back(substitute(a, replacement));
                return call(x.fn, std::move(args));
            } else {
                return node;
            }
        },
        node->data);
}

}  // namespace ramanujan::expr
