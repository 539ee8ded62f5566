#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "eqgeo/autodiff.hpp"
#include "eqgeo/errors.hpp"

namespace eqgeo {

/// Syntax error in a curve expression; offset is a byte index into the source.
class ParseError : public InvalidInput {
public:
    ParseError(const std::string& message, size_t offset);
    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

namespace expr {
struct Node;
}

/// A scalar function of the single variable t.
///
/// Grammar: numbers, t, binary + - * / ^, unary -, sin cos exp log sqrt, and
/// parentheses.  ^ binds tighter than unary minus, which binds tighter than
/// * and /.  Binary operators are left associative except ^.
class CurveExpression {
public:
    static CurveExpression parse(std::string_view text);
    static CurveExpression constant(double value);

    const std::string& source() const { return source_; }

    double operator()(double t) const { return eval(t); }
    double eval(double t) const;
    Dual eval(Dual t) const;
    Jet2 eval(Jet2 t) const;

    /// Symbolic d/dt with constant folding.
    CurveExpression derivative() const;

    /// Canonical text; parsing it reproduces the same tree.
    std::string to_string() const;
    bool same_tree(const CurveExpression& other) const;
    bool depends_on_t() const;

private:
    CurveExpression(std::shared_ptr<const expr::Node> root, std::string source);

    std::shared_ptr<const expr::Node> root_;
    std::string source_;
};

}  // namespace eqgeo
