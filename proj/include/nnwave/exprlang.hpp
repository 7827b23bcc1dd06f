#pragma once

// Univariate arithmetic expressions: used for custom chart bijections and
// wave profiles given on the command line.
//
//   expr    := term (("+" | "-") term)*
//   term    := unary (("*" | "/") unary)*
//   unary   := ("-" | "+") unary | power
//   power   := primary ("^" unary)?
//   primary := NUMBER | "x" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")"
//   FUNC    := sin | cos | exp | ln | sqrt | cbrt | abs | tanh

#include <cctype>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "format.hpp"

namespace nnwave::expr {

enum class Func { Sin, Cos, Exp, Ln, Sqrt, Cbrt, Abs, Tanh };

inline constexpr std::pair<std::string_view, Func> kFunctions[] = {
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"exp", Func::Exp},
    {"ln", Func::Ln},     {"sqrt", Func::Sqrt}, {"cbrt", Func::Cbrt},
    {"abs", Func::Abs},   {"tanh", Func::Tanh},
};

inline std::string_view function_name(Func f) {
    for (const auto& [name, fn] : kFunctions)
        if (fn == f) return name;
    return "?";
}

enum class Kind { Number, Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Node {
    Kind kind = Kind::Number;
    double value = 0.0;       // Number, Constant
    Func func = Func::Sin;    // Call
    int lhs = -1;             // operand of Neg/Call, left of binary ops
    int rhs = -1;
    std::size_t offset = 0;   // byte offset of the token that produced the node
    std::string_view name;    // Constant
};

/// Immutable parsed expression; cheap to copy.
class Expr {
public:
    Expr() = default;
    Expr(std::shared_ptr<const std::vector<Node>> nodes, int root)
        : nodes_(std::move(nodes)), root_(root) {}

    double operator()(double x) const;

    bool empty() const { return !nodes_; }
    const Node& node(int i) const { return (*nodes_)[static_cast<std::size_t>(i)]; }
    int root() const { return root_; }
    std::size_t size() const { return nodes_ ? nodes_->size() : 0; }

private:
    std::shared_ptr<const std::vector<Node>> nodes_;
    int root_ = -1;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
        int root = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) {
            if (text_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
            throw ParseError("unexpected trailing input", pos_);
        }
        return Expr(std::make_shared<const std::vector<Node>>(std::move(nodes_)), root);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<Node> nodes_;

    int push(Node n) {
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int binary(Kind k, int l, int r, std::size_t at) {
        Node n;
        n.kind = k;
        n.lhs = l;
        n.rhs = r;
        n.offset = at;
        return push(n);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            skip_ws();
            std::size_t at = pos_;
            if (accept('+')) lhs = binary(Kind::Add, lhs, parse_term(), at);
            else if (accept('-')) lhs = binary(Kind::Sub, lhs, parse_term(), at);
            else return lhs;
        }
    }

    int parse_term() {
        int lhs = parse_unary();
        for (;;) {
            skip_ws();
            std::size_t at = pos_;
            if (accept('*')) lhs = binary(Kind::Mul, lhs, parse_unary(), at);
            else if (accept('/')) lhs = binary(Kind::Div, lhs, parse_unary(), at);
            else return lhs;
        }
    }

    int parse_unary() {
        skip_ws();
        std::size_t at = pos_;
        if (accept('-')) {
            Node n;
            n.kind = Kind::Neg;
            n.lhs = parse_unary();
            n.offset = at;
            return push(n);
        }
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    int parse_power() {
        int base = parse_primary();
        skip_ws();
        std::size_t at = pos_;
        if (accept('^')) return binary(Kind::Pow, base, parse_unary(), at);
        return base;
    }

    int parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        const std::size_t at = pos_;
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            int inner = parse_expr();
            if (!accept(')')) throw ParseError("unbalanced '(' opened", at);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string_view ident = text_.substr(at, pos_ - at);
            Node n;
            n.offset = at;
            if (ident == "x") {
                n.kind = Kind::Variable;
                return push(n);
            }
            if (ident == "pi" || ident == "e") {
                n.kind = Kind::Constant;
                n.name = ident == "pi" ? "pi" : "e";
                n.value = ident == "pi" ? std::numbers::pi : std::numbers::e;
                return push(n);
            }
            for (const auto& [name, fn] : kFunctions) {
                if (ident != name) continue;
                if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
                n.kind = Kind::Call;
                n.func = fn;
                n.lhs = parse_expr();
                if (!accept(')')) throw ParseError("unbalanced '(' opened", pos_);
                return push(n);
            }
            throw ParseError("unknown identifier '" + std::string(ident) + "'", at);
        }
        if (c == ')') throw ParseError("unbalanced ')'", at);
        throw ParseError(std::string("unexpected character '") + c + "'", at);
    }

    int parse_number() {
        const std::size_t at = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) throw ParseError("malformed number", at);
        // Exponent only when digits follow; otherwise `e` is left for the next token.
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;
        }
        Node node;
        node.kind = Kind::Number;
        node.offset = at;
        if (!parse_double(text_.substr(at, pos_ - at), node.value))
            throw ParseError("malformed number", at);
        return push(node);
    }
};

[[noreturn]] inline void fail_at(const Node& n, const std::string& what) {
    throw NumericError(what + " at offset " + std::to_string(n.offset));
}

inline double checked(const Node& n, double v) {
    if (!std::isfinite(v)) fail_at(n, "non-finite result");
    return v;
}

inline double eval_node(const Expr& e, int i, double x) {
    const Node& n = e.node(i);
    switch (n.kind) {
    case Kind::Number:
    case Kind::Constant: return n.value;
    case Kind::Variable: return x;
    case Kind::Neg: return -eval_node(e, n.lhs, x);
    case Kind::Add: {
        double l = eval_node(e, n.lhs, x);
        return checked(n, l + eval_node(e, n.rhs, x));
    }
    case Kind::Sub: {
        double l = eval_node(e, n.lhs, x);
        return checked(n, l - eval_node(e, n.rhs, x));
    }
    case Kind::Mul: {
        double l = eval_node(e, n.lhs, x);
        return checked(n, l * eval_node(e, n.rhs, x));
    }
    case Kind::Div: {
        double l = eval_node(e, n.lhs, x);
        double r = eval_node(e, n.rhs, x);
        if (r == 0.0) fail_at(n, "division by zero");
        return checked(n, l / r);
    }
    case Kind::Pow: {
        double l = eval_node(e, n.lhs, x);
        double r = eval_node(e, n.rhs, x);
        if (l < 0.0 && r != std::trunc(r)) fail_at(n, "non-integer power of a negative number");
        if (l == 0.0 && r < 0.0) fail_at(n, "negative power of zero");
        return checked(n, std::pow(l, r));
    }
    case Kind::Call: {
        double a = eval_node(e, n.lhs, x);
        switch (n.func) {
        case Func::Sin: return checked(n, std::sin(a));
        case Func::Cos: return checked(n, std::cos(a));
        case Func::Exp: return checked(n, std::exp(a));
        case Func::Ln:
            if (a <= 0.0) fail_at(n, "ln of non-positive argument");
            return checked(n, std::log(a));
        case Func::Sqrt:
            if (a < 0.0) fail_at(n, "sqrt of negative argument");
            return std::sqrt(a);
        case Func::Cbrt: return std::cbrt(a);
        case Func::Abs: return std::fabs(a);
        case Func::Tanh: return std::tanh(a);
        }
    }
    }
    fail_at(n, "corrupt expression node");
}

// Binding strength of a node's own syntax; children weaker than required get parens.
inline int precedence(Kind k) {
    switch (k) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
    }
}

inline void format_node(const Expr& e, int i, std::string& out);

inline void format_child(const Expr& e, int i, int min_prec, std::string& out) {
    bool parens = precedence(e.node(i).kind) < min_prec;
    if (parens) out += '(';
    format_node(e, i, out);
    if (parens) out += ')';
}

inline void format_node(const Expr& e, int i, std::string& out) {
    const Node& n = e.node(i);
    switch (n.kind) {
    case Kind::Number: out += format_double(n.value); return;
    case Kind::Constant: out += n.name; return;
    case Kind::Variable: out += 'x'; return;
    case Kind::Neg:
        out += '-';
        format_child(e, n.lhs, 3, out);
        return;
    case Kind::Call:
        out += function_name(n.func);
        out += '(';
        format_node(e, n.lhs, out);
        out += ')';
        return;
    case Kind::Pow:
        format_child(e, n.lhs, 5, out);
        out += '^';
        format_child(e, n.rhs, 3, out);
        return;
    default: break;
    }
    const int p = precedence(n.kind);
    const char* op = n.kind == Kind::Add ? " + " : n.kind == Kind::Sub ? " - " : n.kind == Kind::Mul ? "*" : "/";
    format_child(e, n.lhs, p, out);
    out += op;
    format_child(e, n.rhs, p + 1, out);
}

inline bool equal_nodes(const Expr& a, int i, const Expr& b, int j) {
    const Node& x = a.node(i);
    const Node& y = b.node(j);
    if (x.kind != y.kind) return false;
    switch (x.kind) {
    case Kind::Number: return x.value == y.value;
    case Kind::Constant: return x.name == y.name;
    case Kind::Variable: return true;
    case Kind::Neg: return equal_nodes(a, x.lhs, b, y.lhs);
    case Kind::Call: return x.func == y.func && equal_nodes(a, x.lhs, b, y.lhs);
    default: return equal_nodes(a, x.lhs, b, y.lhs) && equal_nodes(a, x.rhs, b, y.rhs);
    }
}

}  // namespace detail

/// Parses `text`; throws ParseError carrying the byte offset of the problem.
inline Expr parse(std::string_view text) { return detail::Parser(text).run(); }

/// Evaluates at `x`. Domain failures (ln of non-positive, sqrt or fractional
/// power of a negative, division by zero, overflow) throw NumericError naming
/// the offset of the failing subexpression.
inline double eval(const Expr& e, double x) {
    if (e.empty()) throw NumericError("empty expression");
    return detail::eval_node(e, e.root(), x);
}

inline double Expr::operator()(double x) const { return eval(*this, x); }

/// Minimal-parenthesis text that parses back to the same tree.
inline std::string format(const Expr& e) {
    std::string out;
    if (!e.empty()) detail::format_node(e, e.root(), out);
    return out;
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) return a.empty() && b.empty();
    return detail::equal_nodes(a, a.root(), b, b.root());
}

/// Parses and evaluates a variable-free expression such as "pi/3".
inline double evaluate_constant(std::string_view text) {
    Expr e = parse(text);
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e.node(static_cast<int>(i)).kind == Kind::Variable)
            throw ParseError("constant expression may not use x", e.node(static_cast<int>(i)).offset);
    return eval(e, 0.0);
}

}  // namespace nnwave::expr
