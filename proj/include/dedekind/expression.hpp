#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dedekind/differentiation.hpp"
#include "dedekind/interval.hpp"
#include "dedekind/real.hpp"
#include "dedekind/real_func.hpp"

namespace dedekind {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Neg, Pow, Ln, Exp, Min, Max, Log };
  Kind kind;
  Rational value;     // Number
  char var = 't';     // Var: 't' or 'x'
  std::vector<Expr> args;  // Log: {base, argument}
};

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 't' | 'x' | '(' expr ')' | ln(expr) | exp(expr)
//            | min(expr, expr) | max(expr, expr) | log(expr; expr)
// Numbers are integers or decimals with an optional exponent.
Expr parse_expression(std::string_view text);

// Canonical text: minimal parentheses, single spaces around binary + - * /.
std::string unparse(const Expr& e);

bool is_closed(const Expr& e);

// Translation into the engine. Guards (nonzero divisors, positive arguments of
// ln and of real powers, bases of log away from 1) are certified over
// `domain` at tolerance `tol`; failures throw the engine's separation errors.
RealFunc to_func(const Expr& e, const RatInterval& domain, const Rational& tol);
Real to_real(const Expr& e, const Rational& tol);
Slope to_slope(const Expr& e, const RatInterval& domain, const Rational& tol);

}  // namespace dedekind
