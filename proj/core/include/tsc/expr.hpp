#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "tsc/calculus.hpp"

namespace tsc {

class TimeScale;

namespace ast {

enum class Kind {
    Number,  // num
    Imag,    // the imaginary unit
    Var,     // the free variable t
    Add, Sub, Mul, Div,
    Neg,
    Pow,     // lhs ^ num
    Exp, Sin, Cos,
    Hk,      // h_n(t, s); ival = n
    Ets,     // e_c(t, s); cnum = c
    EtsInv,  // e_{(-)c}(t, s); cnum = c
    Chi,     // chi_{[a,b)}(t)
    Ind,     // point indicator at a, carrying the dense-point-mass annotation
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    double num = 0.0;
    Complex cnum{0.0};
    int ival = 0;
    double a = 0.0;
    double b = 0.0;
    NodePtr lhs;
    NodePtr rhs;
};

bool equal(const NodePtr& x, const NodePtr& y);

}  // namespace ast

/// A parsed expression over the free variable t, evaluable on a time scale
/// with a fixed anchor s. `growth` is the caller-declared exponential growth
/// bound used by the transform routines; parsing leaves it at 0.
class Expression {
  public:
    Expression() = default;
    explicit Expression(ast::NodePtr root) : root_(std::move(root)) {}

    const ast::NodePtr& root() const { return root_; }
    bool operator==(const Expression& other) const { return ast::equal(root_, other.root_); }

    std::string print() const;

    /// Binds the expression to a time scale and anchor. Exponential and
    /// monomial subterms get cached evaluators shared by both the pointwise
    /// and the dense-quadrature view; point indicators evaluate to zero in
    /// the dense view.
    GridFunction compile(const TimeScale& ts, double s, const QuadratureConfig& cfg = {}) const;

    double growth = 0.0;

  private:
    ast::NodePtr root_;
};

/// Parses the expression grammar
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' number)?
///   base   := number | 't' | 'i' | '(' expr ')' | exp(expr) | sin(expr)
///           | cos(expr) | hk(int) | ets(complex) | etsinv(complex)
///           | chi(number, number) | ind(number)
/// Throws SyntaxError with the byte offset, or UnknownFunction.
Expression parse_expr(std::string_view text);

/// Complex literals as used in flags and ets()/etsinv() arguments:
/// "2", "-1.5", "i", "-i", "2i", "1+2i", "1.5-0.25i" (no spaces).
Complex parse_complex(std::string_view text);

std::string format_complex(Complex z);

/// Shortest round-trip decimal form of a double (locale-independent).
std::string format_double(double v);

}  // namespace tsc
