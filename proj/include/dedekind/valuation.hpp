#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dedekind/interval.hpp"
#include "dedekind/real.hpp"

namespace dedekind {

// Finite union of rational open intervals in canonical form: sorted, every
// member has lo < hi, and consecutive members are separated (hi_i < lo_{i+1}).
// Touching members are merged.
class OpenSet {
 public:
  OpenSet() = default;

  const std::vector<RatInterval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  bool contains(const Rational& q) const;

  friend bool operator==(const OpenSet&, const OpenSet&) = default;
  friend OpenSet normalize_union(std::vector<RatInterval> raw);

 private:
  std::vector<RatInterval> intervals_;
};

// Drops empty members and merges overlapping or touching ones.
OpenSet normalize_union(std::vector<RatInterval> raw);
OpenSet join(const OpenSet& u, const OpenSet& v);
OpenSet meet(const OpenSet& u, const OpenSet& v);

// How a valuation looks on a closed cell [a, b], used by the integrator.
struct CellDensity {
  enum class Kind {
    Zero,     // certified: the cell misses the carrier
    Dense,    // certified: mu(s, t) is between lo*(t - s) and hi*(t - s) on the cell
    Generic,  // nothing better known
  };
  Kind kind = Kind::Generic;
  Rational lo;
  Rational hi;
};

class ValuationImpl {
 public:
  virtual ~ValuationImpl() = default;

  virtual Real carrier_lo() const = 0;
  virtual Real carrier_hi() const = 0;
  virtual Real total_mass() const = 0;
  // Lower bound L on mu(a, b) with mu(a, b) - tol <= L <= mu(a, b); a < b.
  virtual Rational measure_lb(const Rational& a, const Rational& b, const Rational& tol) const = 0;
  virtual CellDensity density(const Rational& a, const Rational& b, const Rational& tol) const = 0;
  // True when the valuation is certified to have no point masses.
  virtual bool atomless(const Rational& tol) const = 0;
};

// A finite valuation on a compact interval [x, y], determined by its values
// on rational open intervals. Value type; copies share the implementation.
class Valuation {
 public:
  explicit Valuation(std::shared_ptr<const ValuationImpl> impl) : impl_(std::move(impl)) {}

  Real carrier_lo() const { return impl_->carrier_lo(); }
  Real carrier_hi() const { return impl_->carrier_hi(); }
  Real total_mass() const { return impl_->total_mass(); }

  Rational measure_lb(const Rational& a, const Rational& b, const Rational& tol) const;
  Rational measure_lb(const RatInterval& ab, const Rational& tol) const {
    return measure_lb(ab.lo(), ab.hi(), tol);
  }
  // Upper bound on mu of the closed interval [a, b], through the complement:
  // mu(X)_hi minus lower bounds of the two open pieces outside [a, b].
  Rational measure_ub_closed(const Rational& a, const Rational& b, const Rational& tol) const;

  CellDensity density(const Rational& a, const Rational& b, const Rational& tol) const {
    return impl_->density(a, b, tol);
  }
  bool atomless(const Rational& tol) const { return impl_->atomless(tol); }

 private:
  std::shared_ptr<const ValuationImpl> impl_;
};

// Sum of per-interval lower bounds at tolerance eps / |U|.
Rational measure_open(const Valuation& mu, const OpenSet& u, const Rational& eps);

// Lebesgue valuation on [x, y]: mu(a, b) = min(b, y) -. max(a, x).
// Throws InvalidIntervalOrder if y < x is certified at the check tolerance;
// a check tolerance of 0 skips the check.
Valuation lebesgue(const Real& x, const Real& y, const Rational& check_tol = pow2(-30));

// Uniform probability valuation on [x, y]; a point mass when x = y.
Valuation uniform(const Real& x, const Real& y, const Rational& check_tol = pow2(-30));

// The complement nu(U) = mu(X) - mu(U), evaluated as upper bounds.
class Covaluation {
 public:
  explicit Covaluation(Valuation base) : base_(std::move(base)) {}
  const Valuation& base() const { return base_; }
  Rational measure_ub(const OpenSet& u, const Rational& eps) const;

 private:
  Valuation base_;
};

Covaluation complement(const Valuation& mu);

}  // namespace dedekind
