#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dedekind/interval.hpp"
#include "dedekind/real.hpp"
#include "dedekind/real_func.hpp"
#include "dedekind/valuation.hpp"

namespace dedekind {

struct IntegrationOptions {
  int max_depth = 48;          // bisection depth limit, relative to the bounding box
  std::size_t max_cells = 1 << 16;
  int max_rounds = 6;          // tolerance tightenings before giving up
  bool record_trace = false;
  std::size_t trace_levels = 256;  // traces with more levels are resampled to this many
};

// Levels 0 = r_0 < r_1 < ... < r_n.
class Partition {
 public:
  explicit Partition(std::vector<Rational> levels);  // validates
  static Partition arithmetic(const Rational& top, std::size_t n);

  const std::vector<Rational>& levels() const { return levels_; }
  std::size_t n() const { return levels_.size() - 1; }
  const Rational& top() const { return levels_.back(); }
  // Union of the levels of both partitions.
  Partition refine(const Partition& other) const;

 private:
  std::vector<Rational> levels_;
};

// Per-level data behind a lower/upper sum pair, in a plottable form.
struct Trace {
  std::vector<Rational> levels;
  std::vector<Rational> superlevel_bounds;  // lower bounds on mu{f > r_i}, i = 1..n
  std::vector<Rational> sublevel_bounds;    // lower bounds on mu{f < r_k}, k = 0..n-1
  Rational lower_sum;
  Rational upper_sum;
  Rational total_mass;  // upper bound used for mu(X)
};

struct Enclosure {
  Rational lo;
  Rational hi;
  bool exhausted = false;  // refinement budget ran out; still sound, only wider
  std::optional<Trace> trace;
  std::optional<Trace> negative_trace;  // the f_- half of a signed integral

  RatInterval interval() const { return {lo, hi}; }
  Rational width() const { return hi - lo; }
};

struct SupBound {
  Rational bound;
  Rational slack;  // certified: bound - slack <= sup f
  bool exhausted = false;
};

struct LevelBound {
  Rational bound;
  bool exhausted = false;
};

struct SumBound {
  Rational value;
  bool exhausted = false;
};

// Upper bound on sup f over [x, y] within eps, by branch and bound.
SupBound sup_bound(const RealFunc& f, const Real& x, const Real& y, const Rational& eps,
                   const IntegrationOptions& opts = {});

// Lower bound on mu{t : f(t) > r}, aiming at accuracy eps.
LevelBound superlevel_lb(const RealFunc& f, const Valuation& mu, const Rational& r,
                         const Rational& eps, const IntegrationOptions& opts = {});
// Lower bound on mu{t : f(t) < r}, aiming at accuracy eps.
LevelBound sublevel_lb(const RealFunc& f, const Valuation& mu, const Rational& r,
                       const Rational& eps, const IntegrationOptions& opts = {});

// sum_i (r_i - r_{i-1}) * superlevel_lb(r_i)
SumBound lower_sum(const RealFunc& f, const Valuation& mu, const Partition& p,
                   const Rational& eps, const IntegrationOptions& opts = {});
// sum_i (r_i - r_{i-1}) * (mu(X)_hi - sublevel_lb(r_{i-1})); throws LevelsTooLow
// unless the top level clears sup f.
SumBound upper_sum(const RealFunc& f, const Valuation& mu, const Partition& p,
                   const Rational& eps, const IntegrationOptions& opts = {});

// The same two sums for caller-supplied level measures; used where the
// measures are known exactly.
Rational choquet_lower(const Partition& p, const std::function<Rational(const Rational&)>& above);
Rational choquet_upper(const Partition& p, const Rational& total_mass,
                       const std::function<Rational(const Rational&)>& below);

// Enclosure of the integral of f >= 0 against mu, width <= eps unless the
// budget runs out. Throws DomainError if f is certified negative somewhere
// on the carrier.
Enclosure integrate(const RealFunc& f, const Valuation& mu, const Rational& eps,
                    const IntegrationOptions& opts = {});
// Integral of f = f_+ - f_-, each half at eps / 2.
Enclosure integrate_signed(const RealFunc& f, const Valuation& mu, const Rational& eps,
                           const IntegrationOptions& opts = {});
// Integral of f dt from x to y, negative when y < x.
Enclosure integrate_oriented(const RealFunc& f, const Real& x, const Real& y, const Rational& eps,
                             const IntegrationOptions& opts = {});

// Lower and upper Darboux sums over n equal pieces of [x, y].
RatInterval darboux_oracle(const RealFunc& f, const Rational& x, const Rational& y, std::size_t n);

}  // namespace dedekind
