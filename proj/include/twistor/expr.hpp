#pragma once

// Arithmetic expressions in the chart variables x1..x4, used for
// user-defined metrics and perturbation tensors.
//
// Grammar, loosest binding first:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' unary)?          right associative
//   atom    := number | 'pi' | x1..x4 | name '(' sum ')' | '(' sum ')'
// with name one of sin, cos, exp, log, sqrt, tanh.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "twistor/jet.hpp"
#include "twistor/metric.hpp"

namespace twistor {

struct Expr {
  enum class Kind { Constant, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };

  Kind kind = Kind::Constant;
  double value = 0.0;  // Constant
  int variable = 0;    // Variable, 0-based (x1 is 0)
  Elementary function = Elementary::Exp;  // Call
  std::vector<Expr> args;

  bool operator==(const Expr&) const = default;
};

// Throws ParseError carrying the byte offset of the problem.
Expr parse_expr(std::string_view text);

// Minimal parentheses; parse_expr(print_expr(e)) == e for every tree
// parse_expr can produce.
std::string print_expr(const Expr& e);

std::size_t count_kind(const Expr& e, Expr::Kind kind);

// A power whose exponent contains no variable is pow(a, p); otherwise
// exp(b log a). Both evaluators follow the same operation sequence, so the
// real result equals the value slot of the jet result bit for bit.
double evaluate(const Expr& e, const Point& x);
Jet2 evaluate(const Expr& e, const std::array<Jet2, kDim>& x);

// Ten expressions for g_ij in packed order sym_index(i, j).
using TensorExpr = std::array<Expr, kSymSize>;

// All components factor * delta_ij.
TensorExpr conformal_tensor(const Expr& factor);

MetricEvaluator expression_tensor(const TensorExpr& components);
MetricChart expression_chart(const std::string& name, const TensorExpr& components,
                             const Domain& domain, int orientation);

}  // namespace twistor
