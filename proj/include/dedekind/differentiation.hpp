#pragma once

#include <functional>

#include "dedekind/integration.hpp"
#include "dedekind/real.hpp"
#include "dedekind/real_func.hpp"

namespace dedekind {

// A slope map for f: a function of two points with
//   f(y) - f(x) = (y - x) * slope(x, y),
// whose diagonal slope(x, x) is the derivative f'(x). A Slope also carries f
// and an expression for f' so both can be checked against it.
class Slope {
 public:
  using At = std::function<Real(const Real& x, const Real& y)>;

  Slope(RealFunc f, RealFunc df, At at)
      : f_(std::move(f)), df_(std::move(df)), at_(std::move(at)) {}

  const RealFunc& for_func() const { return f_; }
  const RealFunc& derivative_func() const { return df_; }

  Real at(const Real& x, const Real& y) const { return at_(x, y); }
  RatInterval eval(const Real& x, const Real& y, const Rational& eps) const {
    return at(x, y).approx(eps);
  }

 private:
  RealFunc f_;
  RealFunc df_;
  At at_;
};

Slope slope_const(const Real& c);
Slope slope_id();
Slope slope_add(const Slope& s, const Slope& t);
Slope slope_neg(const Slope& s);
Slope slope_sub(const Slope& s, const Slope& t);
// Product rule: slope(fg)(x, y) = slope f(x, y) g(y) + f(x) slope g(x, y).
Slope slope_mul(const Slope& s, const Slope& t);
// Reciprocal rule, for |f| >= sep: -slope f(x, y) / (f(x) f(y)).
Slope slope_recip(const Slope& s, const Rational& sep);
// Chain rule: slope(o . i)(x, y) = slope o(i(x), i(y)) slope i(x, y).
Slope slope_chain(const Slope& outer, const Slope& inner);
// Slope of g, the inverse of the function of s, given |slope s| >= sep at
// the points (g(x), g(y)).
Slope slope_inverse(const Slope& s, const RealFunc& g, const Rational& sep);
// Slope of F(x) = integral of g from x0 to x: the mean of g against the
// uniform valuation on [min(x, y), max(x, y)].
Slope slope_from_integral(const RealFunc& g, const Rational& x0 = Rational(0),
                          const IntegrationOptions& opts = {});

// slope(x, x)
RatInterval derivative(const Slope& s, const Real& x, const Rational& eps);

// Real whose enclosures come from an integration routine; throws
// BudgetExhausted when an enclosure cannot be made narrow enough.
Real real_from_enclosures(std::function<Enclosure(const Rational& eps)> fn);

}  // namespace dedekind
