#pragma once

#include <memory>
#include <optional>
#include <string>

#include "dedekind/interval.hpp"
#include "dedekind/real.hpp"

namespace dedekind {

// A one-argument map with a pointwise evaluator and interval enclosures of
// its values and of its derivative. Implemented by the elementary functions.
class UnaryOp {
 public:
  virtual ~UnaryOp() = default;
  virtual Real apply(const Real& x) const = 0;
  // Enclosure of { op(t) : t in j }, endpoints accurate to about tol.
  virtual RatInterval range(const RatInterval& j, const Rational& tol) const = 0;
  // Enclosure of { op'(t) : t in j }.
  virtual RatInterval deriv_range(const RatInterval& j, const Rational& tol) const = 0;
  // Enclosure of { op''(t) : t in j }, when the op provides one.
  virtual std::optional<RatInterval> deriv2_range(const RatInterval&, const Rational&) const {
    return std::nullopt;
  }
  virtual std::string name() const = 0;
};

// Value range and derivative range of a function over an interval. For the
// Lipschitz but non-smooth nodes (min, max, truncated minus) `slope` holds
// every difference quotient instead of the derivative.
struct Jet {
  RatInterval value;
  RatInterval slope;
};

// Value, first and second derivative ranges over an interval.
struct Jet2 {
  RatInterval value;
  RatInterval d1;
  RatInterval d2;
};

// Immutable expression tree for a map of one real variable.
class RealFunc {
 public:
  enum class Kind {
    Const, ConstReal, Var, Add, Sub, Neg, Mul, TMinus, Min, Max, Recip, PowInt, Compose, Apply
  };

  RealFunc();  // the constant 0

  static RealFunc constant(const Rational& c);
  static RealFunc constant(const Real& c);
  static RealFunc constant(long c) { return constant(Rational(c)); }
  static RealFunc identity();

  // Pointwise evaluation.
  Real operator()(const Real& x) const;
  // Natural interval extension; throws when an operation is undefined on j.
  RatInterval range(const RatInterval& j, const Rational& tol = pow2(-40)) const;
  Jet jet(const RatInterval& j, const Rational& tol = pow2(-40)) const;
  // Empty where f is not known to be twice differentiable on j.
  std::optional<Jet2> jet2(const RatInterval& j, const Rational& tol = pow2(-40)) const;

  std::string str() const;

  Kind kind() const;
  const RealFunc& lhs() const;
  const RealFunc& rhs() const;

  friend RealFunc operator+(const RealFunc& f, const RealFunc& g);
  friend RealFunc operator-(const RealFunc& f, const RealFunc& g);
  friend RealFunc operator-(const RealFunc& f);
  friend RealFunc operator*(const RealFunc& f, const RealFunc& g);
  friend RealFunc tminus(const RealFunc& f, const RealFunc& g);
  friend RealFunc min(const RealFunc& f, const RealFunc& g);
  friend RealFunc max(const RealFunc& f, const RealFunc& g);
  friend RealFunc recip(const RealFunc& f, const Rational& sep);
  friend RealFunc pow_int(const RealFunc& f, unsigned n);
  friend RealFunc compose(const RealFunc& outer, const RealFunc& inner);
  friend RealFunc apply(std::shared_ptr<const UnaryOp> op, const RealFunc& arg);

 private:
  struct Node;
  explicit RealFunc(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

RealFunc operator+(const RealFunc& f, const RealFunc& g);
RealFunc operator-(const RealFunc& f, const RealFunc& g);
RealFunc operator-(const RealFunc& f);
RealFunc operator*(const RealFunc& f, const RealFunc& g);
// max(0, f - g)
RealFunc tminus(const RealFunc& f, const RealFunc& g);
RealFunc min(const RealFunc& f, const RealFunc& g);
RealFunc max(const RealFunc& f, const RealFunc& g);
// 1/f, where the caller certifies |f| >= sep wherever it is evaluated.
RealFunc recip(const RealFunc& f, const Rational& sep);
RealFunc pow_int(const RealFunc& f, unsigned n);
// outer(inner(t))
RealFunc compose(const RealFunc& outer, const RealFunc& inner);
RealFunc apply(std::shared_ptr<const UnaryOp> op, const RealFunc& arg);

}  // namespace dedekind
