#include "dedekind/real.hpp"

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace dedekind {

struct Real::Impl {
  std::optional<Rational> exact;
  Approx fn;
  bool cache = false;
  mutable std::mutex mutex;
  mutable std::unordered_map<Rational, RatInterval> memo;
};

Real::Real(const Rational& q) {
  auto impl = std::make_shared<Impl>();
  impl->exact = q;
  impl_ = std::move(impl);
}

Real Real::from_approx(Approx fn, bool cache) {
  auto impl = std::make_shared<Impl>();
  impl->fn = std::move(fn);
  impl->cache = cache;
  Real r;
  r.impl_ = std::move(impl);
  return r;
}

const std::optional<Rational>& Real::exact() const { return impl_->exact; }

RatInterval Real::approx(const Rational& eps) const {
  if (eps.sign() <= 0) throw std::invalid_argument("Real::approx: tolerance must be positive");
  if (impl_->exact) return RatInterval(*impl_->exact);
  if (impl_->cache) {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    if (auto it = impl_->memo.find(eps); it != impl_->memo.end()) return it->second;
  }
  RatInterval result = impl_->fn(eps);
  if (result.width() > eps) {
    throw Error("real produced an enclosure of width " + result.width().str() +
                " above the tolerance " + eps.str());
  }
  if (impl_->cache) {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    if (impl_->memo.size() > 4096) impl_->memo.clear();
    impl_->memo.emplace(eps, result);
  }
  return result;
}

Real real_from_rational(const Rational& q) { return Real(q); }

namespace {

// Grain for outward rounding of intermediate results: 2^-k <= eps / 8.
long grain_bits(const Rational& eps) { return bits_for(eps / Rational(8)); }

}  // namespace

Real operator+(const Real& x, const Real& y) {
  if (x.exact() && y.exact()) return Real(*x.exact() + *y.exact());
  if (x.exact() && x.exact()->is_zero()) return y;
  if (y.exact() && y.exact()->is_zero()) return x;
  return Real::from_approx([x, y](const Rational& eps) {
    const Rational half = eps / Rational(2);
    return x.approx(half) + y.approx(half);
  });
}

Real operator-(const Real& x) {
  if (x.exact()) return Real(-*x.exact());
  return Real::from_approx([x](const Rational& eps) { return -x.approx(eps); }, false);
}

Real operator-(const Real& x, const Real& y) { return x + (-y); }

Real operator*(const Real& x, const Real& y) {
  if (x.exact() && y.exact()) return Real(*x.exact() * *y.exact());
  if ((x.exact() && x.exact()->is_zero()) || (y.exact() && y.exact()->is_zero())) {
    return Real(Rational(0));
  }
  return Real::from_approx([x, y](const Rational& eps) {
    const Rational one(1);
    const Rational mx = x.approx(one).magnitude() + one;
    const Rational my = y.approx(one).magnitude() + one;
    const Rational e = min(eps, one);
    const Rational dx = min(e / (Rational(4) * my), one);
    const Rational dy = min(e / (Rational(4) * mx), one);
    RatInterval p = x.approx(dx) * y.approx(dy);
    RatInterval rounded = round_outward(p, grain_bits(eps));
    return rounded.width() <= eps ? rounded : p;
  });
}

Real min(const Real& x, const Real& y) {
  if (x.exact() && y.exact()) return Real(min(*x.exact(), *y.exact()));
  return Real::from_approx(
      [x, y](const Rational& eps) { return min(x.approx(eps), y.approx(eps)); });
}

Real max(const Real& x, const Real& y) {
  if (x.exact() && y.exact()) return Real(max(*x.exact(), *y.exact()));
  return Real::from_approx(
      [x, y](const Rational& eps) { return max(x.approx(eps), y.approx(eps)); });
}

Real tminus(const Real& y, const Real& x) { return max(Real(Rational(0)), y - x); }

Real abs(const Real& x) { return max(x, -x); }

Real pow_int(const Real& x, unsigned n) {
  if (n == 0) return Real(Rational(1));
  Real result = x;
  for (unsigned i = 1; i < n; ++i) result = result * x;
  return result;
}

Real recip(const Real& x, const Rational& sep) {
  if (sep.sign() <= 0) throw std::invalid_argument("recip: separation must be positive");
  const RatInterval check = x.approx(sep / Rational(2));
  if (check.contains_zero()) {
    throw NotSeparatedFromZero("cannot certify |x| >= " + sep.str() + ": enclosure " +
                               to_string(check) + " contains 0");
  }
  if (x.exact()) return Real(Rational(1) / *x.exact());
  const Rational m = check.mignitude();
  return Real::from_approx([x, check, m](const Rational& eps) {
    const Rational delta = min(m / Rational(2), eps * m * m / Rational(8));
    const RatInterval xi = intersect(x.approx(delta), check);
    RatInterval r = recip(xi);
    RatInterval rounded = round_outward(r, grain_bits(eps));
    return rounded.width() <= eps ? rounded : r;
  });
}

Apartness compare(const Real& x, const Real& y, const Rational& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("compare: tolerance must be positive");
  const Rational half = eps / Rational(2);
  const RatInterval a = x.approx(half);
  const RatInterval b = y.approx(half);
  if (a.hi() < b.lo()) return {Order::Less, eps};
  if (b.hi() < a.lo()) return {Order::Greater, eps};
  return {Order::Indistinguishable, eps};
}

namespace {

// Round q to `digits` decimals, half away from zero; returns the scaled integer.
Integer round_scaled(const Rational& q, int digits) {
  const Rational scaled = q * pow10(digits);
  const Rational half(1, 2);
  if (scaled.sign() >= 0) return (scaled + half).floor();
  return -((-scaled + half).floor());
}

std::string format_scaled(const Integer& v, int digits) {
  const bool negative = v < 0;
  std::string s = Integer(negative ? Integer(-v) : v).get_str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  return negative ? "-" + s : s;
}

}  // namespace

Decimal to_decimal(const RatInterval& e, int digits) {
  if (digits < 0) throw std::invalid_argument("to_decimal: digits must be >= 0");
  const Integer mid = round_scaled(e.mid(), digits);
  Decimal d;
  d.text = format_scaled(mid, digits);
  d.last_digit_uncertain = round_scaled(e.lo(), digits) != round_scaled(e.hi(), digits);
  return d;
}

Decimal to_decimal(const Real& x, int digits) {
  return to_decimal(x.approx(pow10(-(digits + 1))), digits);
}

}  // namespace dedekind
