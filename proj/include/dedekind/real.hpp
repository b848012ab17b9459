#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "dedekind/errors.hpp"
#include "dedekind/interval.hpp"
#include "dedekind/rational.hpp"

namespace dedekind {

// A computable real, given as a procedure that returns, for each tolerance
// eps > 0, a rational enclosure of width at most eps. Immutable and cheap to
// copy; copies share the underlying procedure and its cache.
class Real {
 public:
  using Approx = std::function<RatInterval(const Rational& eps)>;

  Real() : Real(Rational(0)) {}
  Real(const Rational& q);  // NOLINT(google-explicit-constructor)
  Real(long v) : Real(Rational(v)) {}  // NOLINT(google-explicit-constructor)

  // The procedure must return enclosures of the same number for every eps.
  // With `cache` set, answers are remembered per tolerance.
  static Real from_approx(Approx fn, bool cache = true);

  // Enclosure of width <= eps; throws std::invalid_argument when eps <= 0.
  RatInterval approx(const Rational& eps) const;

  // Set when the real is a known rational.
  const std::optional<Rational>& exact() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

Real real_from_rational(const Rational& q);

Real operator+(const Real& x, const Real& y);
Real operator-(const Real& x, const Real& y);
Real operator-(const Real& x);
Real operator*(const Real& x, const Real& y);
Real min(const Real& x, const Real& y);
Real max(const Real& x, const Real& y);
// max(0, y - x)
Real tminus(const Real& y, const Real& x);
Real abs(const Real& x);
Real pow_int(const Real& x, unsigned n);

// 1/x. Before building the result, x.approx(sep / 2) must exclude zero,
// otherwise NotSeparatedFromZero is thrown.
Real recip(const Real& x, const Rational& sep);

enum class Order { Less, Greater, Indistinguishable };

struct Apartness {
  Order order;
  Rational eps;  // tolerance at which the verdict was reached
};

Apartness compare(const Real& x, const Real& y, const Rational& eps);

struct Decimal {
  std::string text;
  bool last_digit_uncertain = false;
};

// d digits after the point, from the enclosure at 10^-(d+1).
Decimal to_decimal(const Real& x, int digits);
// Same rounding rule applied to a given enclosure.
Decimal to_decimal(const RatInterval& enclosure, int digits);

}  // namespace dedekind
