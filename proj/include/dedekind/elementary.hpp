#pragma once

#include <memory>

#include "dedekind/differentiation.hpp"
#include "dedekind/integration.hpp"
#include "dedekind/real.hpp"
#include "dedekind/real_func.hpp"

namespace dedekind {

// ln x as the integral of 1/t from 1 to x. Requires x >= sep > 0, checked
// on the enclosure of x at sep / 2.
Enclosure ln(const Real& x, const Rational& sep, const Rational& eps);
// Euler's number: the solution of ln e = 1, bracketed inside [2, 4].
Enclosure euler_e(const Rational& eps);
// Inverse of ln, by certified bracketing.
Enclosure exp(const Real& x, const Rational& eps);
// gamma^x = exp(x ln gamma), for gamma >= sep > 0.
Enclosure exp_base(const Real& gamma, const Real& x, const Rational& sep, const Rational& eps);
// x^alpha = exp(alpha ln x), for x >= sep > 0.
Enclosure pow(const Real& x, const Real& alpha, const Rational& sep, const Rational& eps);
// ln x / ln gamma, for gamma, x >= sep_pos and |gamma - 1| >= sep_one.
Enclosure log_base(const Real& gamma, const Real& x, const Rational& sep_pos,
                   const Rational& sep_one, const Rational& eps);

// The same functions as lazily evaluated reals.
Real ln_real(const Real& x, const Rational& sep);
Real exp_real(const Real& x);
Real euler_e_real();
Real exp_base_real(const Real& gamma, const Real& x, const Rational& sep);
Real pow_real(const Real& x, const Real& alpha, const Rational& sep);
Real log_base_real(const Real& gamma, const Real& x, const Rational& sep_pos,
                   const Rational& sep_one);

// Lower bound on |ln gamma| from an enclosure of gamma that excludes 1.
Rational ln_separation(const RatInterval& gamma);

// An elementary function together with the box it is used on. `sep` bounds
// the argument (Ln, LogBase, PowExponent) or the base (ExpBase) away from 0;
// `sep_one` bounds the base of LogBase and ExpBase away from 1.
struct ElementaryFunc {
  enum class Tag { Ln, Exp, PowExponent, ExpBase, LogBase };
  Tag tag = Tag::Ln;
  Real param;  // alpha or gamma
  Rational sep{1};
  Rational sep_one{1};
  RatInterval box{Rational(1)};

  static ElementaryFunc ln(const RatInterval& box);
  static ElementaryFunc exp(const RatInterval& box);
  static ElementaryFunc power(const Real& alpha, const RatInterval& box);
  static ElementaryFunc exp_base(const Real& gamma, const Rational& sep_one, const RatInterval& box);
  static ElementaryFunc log_base(const Real& gamma, const Rational& sep_one, const RatInterval& box);
};

std::shared_ptr<const UnaryOp> ln_op(const Rational& sep);
std::shared_ptr<const UnaryOp> exp_op();
std::shared_ptr<const UnaryOp> pow_op(const Real& alpha, const Rational& sep);
std::shared_ptr<const UnaryOp> exp_base_op(const Real& gamma, const Rational& sep);
std::shared_ptr<const UnaryOp> log_base_op(const Real& gamma, const Rational& sep_pos,
                                           const Rational& sep_one);

// t -> fn(t) as an expression.
RealFunc as_func(const ElementaryFunc& fn);

// Slopes from the integral definitions: ln and log_gamma from the FTC,
// exp and gamma^x through the inverse-function rule, x^alpha by the chain rule.
Slope slope_of(const ElementaryFunc& fn);

}  // namespace dedekind
