#include "dedekind/valuation.hpp"

#include <algorithm>

namespace dedekind {

bool OpenSet::contains(const Rational& q) const {
  for (const auto& iv : intervals_) {
    if (iv.lo() < q && q < iv.hi()) return true;
  }
  return false;
}

OpenSet normalize_union(std::vector<RatInterval> raw) {
  std::erase_if(raw, [](const RatInterval& iv) { return iv.is_point(); });
  std::sort(raw.begin(), raw.end(),
            [](const RatInterval& p, const RatInterval& q) { return p.lo() < q.lo(); });
  OpenSet out;
  for (auto& iv : raw) {
    auto& merged = out.intervals_;
    if (!merged.empty() && iv.lo() <= merged.back().hi()) {
      if (merged.back().hi() < iv.hi()) merged.back() = RatInterval(merged.back().lo(), iv.hi());
    } else {
      merged.push_back(std::move(iv));
    }
  }
  return out;
}

OpenSet join(const OpenSet& u, const OpenSet& v) {
  std::vector<RatInterval> all = u.intervals();
  all.insert(all.end(), v.intervals().begin(), v.intervals().end());
  return normalize_union(std::move(all));
}

OpenSet meet(const OpenSet& u, const OpenSet& v) {
  std::vector<RatInterval> parts;
  for (const auto& p : u.intervals()) {
    for (const auto& q : v.intervals()) {
      const Rational lo = max(p.lo(), q.lo());
      const Rational hi = min(p.hi(), q.hi());
      if (lo < hi) parts.emplace_back(lo, hi);
    }
  }
  return normalize_union(std::move(parts));
}

Rational Valuation::measure_lb(const Rational& a, const Rational& b, const Rational& tol) const {
  if (!(a < b)) return 0;
  return impl_->measure_lb(a, b, tol);
}

Rational Valuation::measure_ub_closed(const Rational& a, const Rational& b,
                                      const Rational& tol) const {
  const Rational one(1);
  const Rational third = tol / Rational(3);
  const Rational outer_lo = carrier_lo().approx(one).lo() - one;
  const Rational outer_hi = carrier_hi().approx(one).hi() + one;
  Rational ub = total_mass().approx(third).hi();
  if (outer_lo < a) ub -= measure_lb(outer_lo, a, third);
  if (b < outer_hi) ub -= measure_lb(b, outer_hi, third);
  return max(ub, Rational(0));
}

Rational measure_open(const Valuation& mu, const OpenSet& u, const Rational& eps) {
  if (u.empty()) return 0;
  const Rational each = eps / Rational(static_cast<long>(u.size()));
  Rational total;
  for (const auto& iv : u.intervals()) total += mu.measure_lb(iv, each);
  return total;
}

namespace {

void check_order(const Real& x, const Real& y, const Rational& tol) {
  if (tol.sign() <= 0) return;
  if (compare(x, y, tol).order == Order::Greater) {
    throw InvalidIntervalOrder("carrier endpoints are certified to satisfy y < x");
  }
}

class LebesgueImpl final : public ValuationImpl {
 public:
  LebesgueImpl(Real x, Real y) : x_(std::move(x)), y_(std::move(y)), mass_(tminus(y_, x_)) {}

  Real carrier_lo() const override { return x_; }
  Real carrier_hi() const override { return y_; }
  Real total_mass() const override { return mass_; }

  Rational measure_lb(const Rational& a, const Rational& b, const Rational& tol) const override {
    const Rational half = tol / Rational(2);
    const RatInterval xs = x_.approx(half);
    const RatInterval ys = y_.approx(half);
    return max(Rational(0), min(b, ys.lo()) - max(a, xs.hi()));
  }

  CellDensity density(const Rational& a, const Rational& b, const Rational& tol) const override {
    const RatInterval xs = x_.approx(tol);
    const RatInterval ys = y_.approx(tol);
    if (b <= xs.lo() || ys.hi() <= a) return {CellDensity::Kind::Zero, 0, 0};
    if (xs.hi() <= a && b <= ys.lo()) return {CellDensity::Kind::Dense, 1, 1};
    return {CellDensity::Kind::Generic, 0, 0};
  }

  bool atomless(const Rational&) const override { return true; }

 private:
  Real x_, y_, mass_;
};

class UniformImpl final : public ValuationImpl {
 public:
  UniformImpl(Real x, Real y) : x_(std::move(x)), y_(std::move(y)) {}

  Real carrier_lo() const override { return x_; }
  Real carrier_hi() const override { return y_; }
  Real total_mass() const override { return Real(Rational(1)); }

  Rational measure_lb(const Rational& a, const Rational& b, const Rational& tol) const override {
    const Rational zero(0), one(1);
    Rational t = tol;
    Rational best = 0;
    for (int round = 0; round < 24; ++round, t /= Rational(16)) {
      const RatInterval xs = x_.approx(t);
      const RatInterval ys = y_.approx(t);
      if (b <= xs.lo() || ys.hi() <= a) return 0;
      const Rational w_lo = max(zero, ys.lo() - xs.hi());
      const Rational w_hi = ys.hi() - xs.lo();
      const Rational lam_lo = max(zero, min(b, ys.lo()) - max(a, xs.hi()));
      const Rational lam_hi = max(zero, min(b, ys.hi()) - max(a, xs.lo()));
      Rational lb = 0;
      // q (y - x) < Lambda(a, b)
      if (w_hi.sign() > 0) lb = lam_lo / w_hi;
      // a < x <= y < b and q < 1
      if (a < xs.lo() && ys.hi() < b) lb = one;
      lb = min(lb, one);
      Rational ub = one;
      if (w_lo.sign() > 0) ub = min(one, lam_hi / w_lo);
      best = max(best, lb);
      if (ub - best <= tol) break;
    }
    return best;
  }

  CellDensity density(const Rational& a, const Rational& b, const Rational& tol) const override {
    const RatInterval xs = x_.approx(tol);
    const RatInterval ys = y_.approx(tol);
    // A closed cell touching a possible atom is not empty.
    const bool spread_out = (ys.lo() - xs.hi()).sign() > 0;
    if (spread_out ? (b <= xs.lo() || ys.hi() <= a) : (b < xs.lo() || ys.hi() < a)) {
      return {CellDensity::Kind::Zero, 0, 0};
    }
    const Rational w_lo = ys.lo() - xs.hi();
    if (w_lo.sign() > 0 && xs.hi() <= a && b <= ys.lo()) {
      const Rational w_hi = ys.hi() - xs.lo();
      return {CellDensity::Kind::Dense, Rational(1) / w_hi, Rational(1) / w_lo};
    }
    return {CellDensity::Kind::Generic, 0, 0};
  }

  bool atomless(const Rational& tol) const override {
    return (y_.approx(tol).lo() - x_.approx(tol).hi()).sign() > 0;
  }

 private:
  Real x_, y_;
};

}  // namespace

Valuation lebesgue(const Real& x, const Real& y, const Rational& check_tol) {
  check_order(x, y, check_tol);
  return Valuation(std::make_shared<LebesgueImpl>(x, y));
}

Valuation uniform(const Real& x, const Real& y, const Rational& check_tol) {
  check_order(x, y, check_tol);
  return Valuation(std::make_shared<UniformImpl>(x, y));
}

Rational Covaluation::measure_ub(const OpenSet& u, const Rational& eps) const {
  const Rational half = eps / Rational(2);
  return base_.total_mass().approx(half).hi() - measure_open(base_, u, half);
}

Covaluation complement(const Valuation& mu) { return Covaluation(mu); }

}  // namespace dedekind
