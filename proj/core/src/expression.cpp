#include "eqgeo/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace eqgeo {

ParseError::ParseError(const std::string& message, size_t offset)
    : InvalidInput(message + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace expr {

enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log, Sqrt };

struct Node {
    Kind kind;
    double value{0.0};
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

namespace {

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    return std::make_shared<const Node>(Node{k, 0.0, std::move(a), std::move(b)});
}
NodePtr number(double v) { return std::make_shared<const Node>(Node{Kind::Number, v, nullptr, nullptr}); }
NodePtr variable() { return make(Kind::Variable); }

bool is_number(const NodePtr& n, double v) { return n->kind == Kind::Number && n->value == v; }

// Builders used by differentiation; they fold the obvious identities.
NodePtr add(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    if (a->kind == Kind::Number && b->kind == Kind::Number) return number(a->value + b->value);
    return make(Kind::Add, std::move(a), std::move(b));
}
NodePtr neg(NodePtr a) {
    if (a->kind == Kind::Number) return number(-a->value);
    if (a->kind == Kind::Neg) return a->lhs;
    return make(Kind::Neg, std::move(a));
}
NodePtr sub(NodePtr a, NodePtr b) {
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return neg(std::move(b));
    if (a->kind == Kind::Number && b->kind == Kind::Number) return number(a->value - b->value);
    return make(Kind::Sub, std::move(a), std::move(b));
}
NodePtr mul(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return number(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    if (a->kind == Kind::Number && b->kind == Kind::Number) return number(a->value * b->value);
    return make(Kind::Mul, std::move(a), std::move(b));
}
NodePtr div(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0)) return number(0.0);
    if (is_number(b, 1.0)) return a;
    return make(Kind::Div, std::move(a), std::move(b));
}
NodePtr power(NodePtr a, NodePtr b) {
    if (is_number(b, 0.0)) return number(1.0);
    if (is_number(b, 1.0)) return a;
    return make(Kind::Pow, std::move(a), std::move(b));
}

bool depends(const NodePtr& n) {
    if (!n) return false;
    if (n->kind == Kind::Variable) return true;
    return depends(n->lhs) || depends(n->rhs);
}

NodePtr differentiate(const NodePtr& n) {
    const NodePtr& u = n->lhs;
    const NodePtr& v = n->rhs;
    switch (n->kind) {
        case Kind::Number: return number(0.0);
        case Kind::Variable: return number(1.0);
        case Kind::Neg: return neg(differentiate(u));
        case Kind::Add: return add(differentiate(u), differentiate(v));
        case Kind::Sub: return sub(differentiate(u), differentiate(v));
        case Kind::Mul: return add(mul(differentiate(u), v), mul(u, differentiate(v)));
        case Kind::Div:
            return div(sub(mul(differentiate(u), v), mul(u, differentiate(v))), mul(v, v));
        case Kind::Pow:
            if (!depends(v)) {
                return mul(mul(v, power(u, sub(v, number(1.0)))), differentiate(u));
            }
            // d(u^v) = u^v (v' log u + v u'/u)
            return mul(n, add(mul(differentiate(v), make(Kind::Log, u)),
                              div(mul(v, differentiate(u)), u)));
        case Kind::Sin: return mul(make(Kind::Cos, u), differentiate(u));
        case Kind::Cos: return neg(mul(make(Kind::Sin, u), differentiate(u)));
        case Kind::Exp: return mul(n, differentiate(u));
        case Kind::Log: return div(differentiate(u), u);
        case Kind::Sqrt: return div(differentiate(u), mul(number(2.0), n));
    }
    return number(0.0);
}

template <class T>
T evaluate(const Node& n, const T& t) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sqrt;
    switch (n.kind) {
        case Kind::Number: return T(n.value);
        case Kind::Variable: return t;
        case Kind::Neg: return -evaluate(*n.lhs, t);
        case Kind::Add: return evaluate(*n.lhs, t) + evaluate(*n.rhs, t);
        case Kind::Sub: return evaluate(*n.lhs, t) - evaluate(*n.rhs, t);
        case Kind::Mul: return evaluate(*n.lhs, t) * evaluate(*n.rhs, t);
        case Kind::Div: return evaluate(*n.lhs, t) / evaluate(*n.rhs, t);
        case Kind::Pow:
            if (!depends(n.rhs)) return pow(evaluate(*n.lhs, t), evaluate(*n.rhs, 0.0));
            return pow(evaluate(*n.lhs, t), evaluate(*n.rhs, t));
        case Kind::Sin: return sin(evaluate(*n.lhs, t));
        case Kind::Cos: return cos(evaluate(*n.lhs, t));
        case Kind::Exp: return exp(evaluate(*n.lhs, t));
        case Kind::Log: return log(evaluate(*n.lhs, t));
        case Kind::Sqrt: return sqrt(evaluate(*n.lhs, t));
    }
    return T(0.0);
}

bool same(const NodePtr& a, const NodePtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    if (a->kind == Kind::Number) return a->value == b->value;
    return same(a->lhs, b->lhs) && same(a->rhs, b->rhs);
}

// ----------------------------------------------------------------------------
// Printing

int precedence(Kind k) {
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

const char* function_name(Kind k) {
    switch (k) {
        case Kind::Sin: return "sin";
        case Kind::Cos: return "cos";
        case Kind::Exp: return "exp";
        case Kind::Log: return "log";
        case Kind::Sqrt: return "sqrt";
        default: return "";
    }
}

char operator_symbol(Kind k) {
    switch (k) {
        case Kind::Add: return '+';
        case Kind::Sub: return '-';
        case Kind::Mul: return '*';
        case Kind::Div: return '/';
        default: return '^';
    }
}

void print(const NodePtr& n, std::string& out);

void print_wrapped(const NodePtr& n, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(n, out);
    if (wrap) out += ')';
}

void print(const NodePtr& n, std::string& out) {
    switch (n->kind) {
        case Kind::Number: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n->value);
            // Negative literals only appear in folded trees; keep them atomic.
            if (n->value < 0.0) {
                out += '(';
                out += buf;
                out += ')';
            } else {
                out += buf;
            }
            return;
        }
        case Kind::Variable: out += 't'; return;
        case Kind::Neg:
            out += '-';
            print_wrapped(n->lhs, precedence(n->lhs->kind) < 3, out);
            return;
        case Kind::Pow:
            print_wrapped(n->lhs, precedence(n->lhs->kind) <= 4, out);
            out += '^';
            print_wrapped(n->rhs, precedence(n->rhs->kind) < 3, out);
            return;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            const int p = precedence(n->kind);
            print_wrapped(n->lhs, precedence(n->lhs->kind) < p, out);
            out += ' ';
            out += operator_symbol(n->kind);
            out += ' ';
            print_wrapped(n->rhs, precedence(n->rhs->kind) <= p, out);
            return;
        }
        default:
            out += function_name(n->kind);
            out += '(';
            print(n->lhs, out);
            out += ')';
            return;
    }
}

// ----------------------------------------------------------------------------
// Parsing

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
        NodePtr n = parse_sum();
        skip_space();
        if (pos_ < text_.size()) {
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        }
        return n;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept('+')) lhs = make(Kind::Add, lhs, parse_product());
            else if (accept('-')) lhs = make(Kind::Sub, lhs, parse_product());
            else return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) lhs = make(Kind::Mul, lhs, parse_unary());
            else if (accept('/')) lhs = make(Kind::Div, lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return make(Kind::Neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept('^')) return make(Kind::Pow, base, parse_unary());
        return base;
    }

    NodePtr parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        if (c == '(') {
            const size_t open = pos_++;
            NodePtr inner = parse_sum();
            if (!accept(')')) throw ParseError("unbalanced '(' opened at offset " + std::to_string(open), pos_);
            return inner;
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        const size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
                pos_ = p;
            }
        }
        double v = 0.0;
        const auto* first = text_.data() + start;
        const auto* last = text_.data() + pos_;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) throw ParseError("malformed number", start);
        return number(v);
    }

    NodePtr parse_identifier() {
        const size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "t") return variable();
        Kind fn;
        if (name == "sin") fn = Kind::Sin;
        else if (name == "cos") fn = Kind::Cos;
        else if (name == "exp") fn = Kind::Exp;
        else if (name == "log") fn = Kind::Log;
        else if (name == "sqrt") fn = Kind::Sqrt;
        else throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
        NodePtr arg = parse_sum();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return make(fn, std::move(arg));
    }

    std::string_view text_;
    size_t pos_{0};
};

}  // namespace
}  // namespace expr

CurveExpression::CurveExpression(std::shared_ptr<const expr::Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

CurveExpression CurveExpression::parse(std::string_view text) {
    return CurveExpression(expr::Parser(text).parse(), std::string(text));
}

CurveExpression CurveExpression::constant(double value) {
    auto node = expr::number(value);
    std::string text;
    expr::print(node, text);
    return CurveExpression(std::move(node), std::move(text));
}

double CurveExpression::eval(double t) const { return expr::evaluate(*root_, t); }
Dual CurveExpression::eval(Dual t) const { return expr::evaluate(*root_, t); }
Jet2 CurveExpression::eval(Jet2 t) const { return expr::evaluate(*root_, t); }

CurveExpression CurveExpression::derivative() const {
    auto d = expr::differentiate(root_);
    std::string text;
    expr::print(d, text);
    return CurveExpression(std::move(d), std::move(text));
}

std::string CurveExpression::to_string() const {
    std::string out;
    expr::print(root_, out);
    return out;
}

bool CurveExpression::same_tree(const CurveExpression& other) const {
    return expr::same(root_, other.root_);
}

bool CurveExpression::depends_on_t() const { return expr::depends(root_); }

}  // namespace eqgeo
