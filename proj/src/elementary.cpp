#include "dedekind/elementary.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace dedekind {

namespace {

// Enclosures of ln q and exp q at rational points, remembered per tolerance.
class PointCache {
 public:
  std::optional<RatInterval> find(const Rational& q, const Rational& tol) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = map_.find(q);
    if (it == map_.end()) return std::nullopt;
    std::optional<RatInterval> best;
    for (const auto& [t, iv] : it->second) {
      if (iv.width() <= tol && (!best || iv.width() < best->width())) best = iv;
      (void)t;
    }
    return best;
  }

  void store(const Rational& q, const Rational& tol, const RatInterval& iv) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (map_.size() > 100000) map_.clear();
    map_[q].emplace_back(tol, iv);
  }

 private:
  std::mutex mutex_;
  std::unordered_map<Rational, std::vector<std::pair<Rational, RatInterval>>> map_;
};

PointCache& ln_cache() {
  static PointCache cache;
  return cache;
}

PointCache& exp_cache() {
  static PointCache cache;
  return cache;
}

Rational power(const Rational& r, long k) {
  const RatInterval p = pow_int(RatInterval(r), static_cast<unsigned>(k < 0 ? -k : k));
  return k >= 0 ? p.lo() : Rational(1) / p.lo();
}

RatInterval ln_point(const Rational& q, const Rational& tol);

// ln r for r in [3/4, 2]. Short ranges are integrated directly; longer ones
// use ln r = 16 ln s + ln(r / s^16) with s a short dyadic near r^(1/16).
RatInterval ln_near_one(const Rational& r, const Rational& tol) {
  const Rational d = (r - Rational(1)).abs();
  if (d * d * d <= tol * pow2(14)) {
    const Rational margin = min(r, Rational(1));
    return integrate_oriented(recip(RealFunc::identity(), margin), Real(Rational(1)), Real(r), tol).interval();
  }
  const long bits = std::min<long>(50, (bits_for(tol) - 13) / 3 + 6);
  const Rational s = round_down(Rational(mpq_class(std::pow(r.to_double(), 1.0 / 16))) + pow2(-bits - 1), bits);
  if (s == Rational(1) || s == r) {
    const Rational margin = min(r, Rational(1));
    return integrate_oriented(recip(RealFunc::identity(), margin), Real(Rational(1)), Real(r), tol).interval();
  }
  const Rational rho = r / power(s, 16);
  return Rational(16) * ln_point(s, tol / Rational(32)) + ln_point(rho, tol / Rational(2));
}

// ln q for rational q > 0, as the integral of 1/t from 1 to q.
RatInterval ln_point(const Rational& q, const Rational& tol) {
  if (q.sign() <= 0) throw DomainError("ln of a non-positive number " + q.str());
  if (q == Rational(1)) return RatInterval(Rational(0));
  if (auto hit = ln_cache().find(q, tol)) return *hit;
  // ln q = k ln 2 + ln(q / 2^k), with q / 2^k in [3/4, 3/2)
  long k = 0;
  Rational r = q;
  while (r >= Rational(3, 2)) { r /= Rational(2); ++k; }
  while (r < Rational(3, 4)) { r *= Rational(2); --k; }
  RatInterval iv;
  if (k == 0 || q == Rational(2)) {
    iv = ln_near_one(q, tol);
  } else {
    const Rational half = tol / Rational(2);
    iv = Rational(k) * ln_point(Rational(2), half / Rational(k < 0 ? -k : k)) + ln_point(r, half);
  }
  if (iv.width() <= tol) ln_cache().store(q, tol, iv);
  return iv;
}

// Shrinks [lo, hi], known to contain e^q, with one certified value of ln p
// for some p inside it, computed to width t. Returns that value.
RatInterval probe(const Rational& p, const Rational& q, const Rational& t, const Rational& tol,
                  Rational& lo, Rational& hi) {
  const RatInterval l = ln_point(p, t);
  if (l.hi() < q) {
    lo = max(lo, p);
  } else if (q < l.lo()) {
    hi = min(hi, p);
  } else {
    // |ln p - q| <= width(l), and p, e^q both lie in [lo, hi], so by the
    // mean value theorem |p - e^q| <= hi * width(l).
    const Rational r = hi * l.width();
    lo = max(lo, p - r);
    hi = min(hi, p + r);
  }
  // keep the endpoints short
  const long bits = bits_for(tol / Rational(64));
  lo = round_down(lo, bits);
  hi = round_up(hi, bits);
  return l;
}

// Point strictly inside (lo, hi) near `target`, on a coarse dyadic grid.
std::optional<Rational> inner_point(const Rational& target, const Rational& lo, const Rational& hi,
                                    const Rational& grain) {
  Rational p = round_down(target, bits_for(grain));
  if (lo < p && p < hi) return p;
  p = target;
  if (lo < p && p < hi) return p;
  return std::nullopt;
}

// Certified bracketing of e^q, the solution p of ln p = q. Each round probes
// the midpoint, then tries [p - d, p + d] around the Newton point
// p = m (1 + q - ln m), whose error is about hi (w / lo)^2.
Enclosure exp_core(const Rational& q, const Rational& tol, Rational lo, Rational hi) {
  const Rational one(1);
  for (int iter = 0; iter < 200; ++iter) {
    const Rational w = hi - lo;
    if (w <= tol) return {lo, hi, false, std::nullopt, std::nullopt};
    const Rational u = w / lo;  // bound on |ln m - q|
    const Rational floor_t = tol / (Rational(4) * hi);
    const Rational newton_err = Rational(3, 4) * hi * u * u;
    // once Newton can finish, ask ln(m) for just enough; before that, about u^2
    const Rational t = Rational(8) * newton_err <= tol
                           ? tol / (Rational(16) * hi)
                           : max(min(w / (Rational(64) * hi), u * u / Rational(4)), floor_t);
    const Rational mid = (lo + hi) / Rational(2);
    const Rational m = inner_point(mid, lo, hi, w * pow2(-12)).value_or(mid);
    const RatInterval lm = probe(m, q, t, tol, lo, hi);
    if (hi - lo <= tol || !(u <= one / Rational(2))) continue;

    // |e^v - 1 - v| <= v^2 e^|v| / 2 <= 3 v^2 / 4 for |v| <= 1/2
    const Rational grain = tol * pow2(-6);
    const Rational est = newton_err + hi * lm.width() + grain;
    const Rational d = round_up(max(Rational(2) * est, tol / Rational(2) - grain), bits_for(grain));
    const Rational guess = m * (one + q - lm.mid());
    const Rational p = round_down(guess, bits_for(grain));
    // ln(p +- d) is at least (d - est) / (hi + d) away from q
    const Rational t2 = (d - est) / (Rational(2) * (hi + d));
    if (lo < p - d && ln_point(p - d, t2).hi() < q) lo = p - d;
    if (p + d < hi && q < ln_point(p + d, t2).lo()) hi = p + d;
  }
  return {lo, hi, hi - lo > tol, std::nullopt, std::nullopt};
}

const Enclosure& coarse_e() {
  static const Enclosure e = exp_core(Rational(1), pow2(-12), Rational(2), Rational(4));
  return e;
}

RatInterval exp_point(const Rational& q, const Rational& tol) {
  if (q.is_zero()) return RatInterval(Rational(1));
  if (auto hit = exp_cache().find(q, tol)) return *hit;
  const Enclosure& e = coarse_e();
  const Integer kz = q.floor();
  if (abs(kz) > 10000) throw DomainError("exp argument out of range: " + q.str());
  const long k = kz.get_si();
  Rational lo = power(k >= 0 ? e.lo : e.hi, k);
  Rational hi = power(k + 1 >= 0 ? e.hi : e.lo, k + 1);
  // Narrow the bracket around a floating-point guess, if ln confirms it.
  const double guess = std::exp(q.to_double());
  if (std::isnormal(guess)) {
    const Rational g{mpq_class(guess)};
    const Rational d = max(g * pow2(-40), tol / Rational(2));
    const long bits = bits_for(d * pow2(-4));
    const Rational a = round_down(g - d, bits), b = round_up(g + d, bits);
    const Rational t = d / (Rational(4) * b);
    if (lo < a && a.sign() > 0 && ln_point(a, t).hi() < q) lo = a;
    if (b < hi && q < ln_point(b, t).lo()) hi = b;
  }
  const Enclosure r = exp_core(q, tol, lo, hi);
  const RatInterval iv = r.interval();
  if (!r.exhausted) exp_cache().store(q, tol, iv);
  return iv;
}

void require_positive(const Real& x, const Rational& sep, const char* what) {
  if (sep.sign() <= 0) throw std::invalid_argument(std::string(what) + ": separation must be positive");
  const RatInterval xs = x.approx(sep / Rational(2));
  if (xs.lo().sign() <= 0) {
    throw NotSeparatedFromZero(std::string(what) + ": cannot certify a positive argument, enclosure " +
                               to_string(xs));
  }
}

Enclosure from_interval(const RatInterval& iv, const Rational& eps) {
  return {iv.lo(), iv.hi(), iv.width() > eps, std::nullopt, std::nullopt};
}

// Enclosure of a real at eps, reporting budget exhaustion as a flag.
Enclosure enclose(const Real& x, const Rational& eps) {
  try {
    return from_interval(x.approx(eps), eps);
  } catch (const BudgetExhausted& e) {
    return {e.best().lo(), e.best().hi(), true, std::nullopt, std::nullopt};
  }
}

// Outward rounding of j that keeps a positive lower end positive.
RatInterval snap(const RatInterval& j, const Rational& grain) {
  const RatInterval r = round_outward(j, bits_for(grain));
  if (j.lo().sign() > 0 && r.lo().sign() <= 0) return {j.lo(), r.hi()};
  return r;
}

RatInterval ln_range(const RatInterval& j, const Rational& tol) {
  if (j.lo().sign() <= 0) throw DomainError("ln on an interval reaching 0: " + to_string(j));
  const RatInterval s = snap(j, tol * j.lo() / Rational(4));
  const Rational half = tol / Rational(2);
  return {ln_point(s.lo(), half).lo(), ln_point(s.hi(), half).hi()};
}

RatInterval exp_range(const RatInterval& j, const Rational& tol) {
  Rational growth(1);
  if (j.hi().sign() > 0) growth = power(Rational(3), j.hi().ceil().get_si());
  const RatInterval s = snap(j, tol / (Rational(4) * growth));
  const Rational half = tol / Rational(2);
  return {exp_point(s.lo(), half).lo(), exp_point(s.hi(), half).hi()};
}

class LnOp final : public UnaryOp {
 public:
  explicit LnOp(Rational sep) : sep_(std::move(sep)) {}
  Real apply(const Real& x) const override { return ln_real(x, sep_); }
  RatInterval range(const RatInterval& j, const Rational& tol) const override { return ln_range(j, tol); }
  RatInterval deriv_range(const RatInterval& j, const Rational&) const override {
    if (j.lo().sign() <= 0) throw DomainError("ln on an interval reaching 0: " + to_string(j));
    return recip(j);
  }
  std::optional<RatInterval> deriv2_range(const RatInterval& j, const Rational&) const override {
    if (j.lo().sign() <= 0) throw DomainError("ln on an interval reaching 0: " + to_string(j));
    return -pow_int(recip(j), 2);
  }
  std::string name() const override { return "ln"; }

 private:
  Rational sep_;
};

class ExpOp final : public UnaryOp {
 public:
  Real apply(const Real& x) const override { return exp_real(x); }
  RatInterval range(const RatInterval& j, const Rational& tol) const override { return exp_range(j, tol); }
  RatInterval deriv_range(const RatInterval& j, const Rational& tol) const override {
    return exp_range(j, tol);
  }
  std::optional<RatInterval> deriv2_range(const RatInterval& j, const Rational& tol) const override {
    return exp_range(j, tol);
  }
  std::string name() const override { return "exp"; }
};

// [l, u] around z^(1/n) for z > 0, u - l <= tol, by bisection on a dyadic grid.
RatInterval root_point(const Rational& z, unsigned n, const Rational& tol) {
  if (n == 1) return RatInterval(z);
  const long bits = bits_for(tol / Rational(2));
  const double guess = std::pow(z.to_double(), 1.0 / n);
  Rational lo(0), hi = max(z, Rational(1));
  if (std::isfinite(guess) && guess > 0) {
    const Rational g = round_down(Rational(mpq_class(guess)), bits);
    const Rational d = max(g * pow2(-40), pow2(-bits));
    if (g - d > lo && pow_int(RatInterval(g - d), n).hi() <= z) lo = g - d;
    if (g + d < hi && z <= pow_int(RatInterval(g + d), n).lo()) hi = g + d;
  }
  while (hi - lo > tol) {
    const Rational mid = round_down((lo + hi) / Rational(2), bits);
    if (mid <= lo || mid >= hi) break;
    (pow_int(RatInterval(mid), n).lo() <= z ? lo : hi) = mid;
  }
  return {lo, hi};
}

// x^(p/n) for rational x > 0, width <= tol.
RatInterval rational_power(const Rational& x, const Rational& alpha, const Rational& tol) {
  const long p = alpha.numerator().get_si();
  const unsigned n = static_cast<unsigned>(alpha.denominator().get_ui());
  return root_point(power(x, p), n, tol);
}

// x^alpha over j (j > 0) for exponents with small numerator and denominator.
std::optional<RatInterval> rational_power_range(const RatInterval& j, const Real& alpha,
                                                const Rational& tol) {
  const auto& a = alpha.exact();
  if (!a || abs(a->numerator()) > 64 || a->denominator() > 64) return std::nullopt;
  if (j.lo().sign() <= 0) throw DomainError("pow on an interval reaching 0: " + to_string(j));
  if (a->is_zero()) return RatInterval(Rational(1));
  const Rational half = tol / Rational(2);
  const RatInterval at_lo = rational_power(j.lo(), *a, half);
  const RatInterval at_hi = rational_power(j.hi(), *a, half);
  return a->sign() > 0 ? RatInterval(at_lo.lo(), at_hi.hi()) : RatInterval(at_hi.lo(), at_lo.hi());
}

class PowOp final : public UnaryOp {
 public:
  PowOp(Real alpha, Rational sep) : alpha_(std::move(alpha)), sep_(std::move(sep)) {}
  Real apply(const Real& x) const override { return pow_real(x, alpha_, sep_); }
  RatInterval range(const RatInterval& j, const Rational& tol) const override {
    if (auto r = rational_power_range(j, alpha_, tol)) return *r;
    const RatInterval a = alpha_.approx(tol / Rational(4));
    return exp_range(a * ln_range(j, tol / Rational(4)), tol);
  }
  RatInterval deriv_range(const RatInterval& j, const Rational& tol) const override {
    const RatInterval a = alpha_.approx(tol / Rational(4));
    const Real am1 = alpha_ - Real(Rational(1));
    const Rational inner_tol = tol / (Rational(2) * (a.magnitude() + Rational(1)));
    if (auto r = rational_power_range(j, am1, inner_tol)) return a * *r;
    const RatInterval am1_iv = a - RatInterval(Rational(1));
    return a * exp_range(am1_iv * ln_range(j, tol / Rational(4)), tol);
  }
  std::optional<RatInterval> deriv2_range(const RatInterval& j, const Rational& tol) const override {
    const RatInterval a = alpha_.approx(tol / Rational(4));
    const RatInterval c = a * (a - RatInterval(Rational(1)));
    const Real am2 = alpha_ - Real(Rational(2));
    const Rational inner_tol = tol / (Rational(2) * (c.magnitude() + Rational(1)));
    if (auto r = rational_power_range(j, am2, inner_tol)) return c * *r;
    const RatInterval am2_iv = a - RatInterval(Rational(2));
    return c * exp_range(am2_iv * ln_range(j, tol / Rational(4)), tol);
  }
  std::string name() const override { return "pow"; }

 private:
  Real alpha_;
  Rational sep_;
};

class ExpBaseOp final : public UnaryOp {
 public:
  ExpBaseOp(Real gamma, Rational sep)
      : gamma_(std::move(gamma)), sep_(std::move(sep)), ln_gamma_(ln_real(gamma_, sep_)) {}
  Real apply(const Real& x) const override { return exp_base_real(gamma_, x, sep_); }
  RatInterval range(const RatInterval& j, const Rational& tol) const override {
    const RatInterval l = ln_gamma_.approx(tol / Rational(4));
    return exp_range(j * l, tol);
  }
  RatInterval deriv_range(const RatInterval& j, const Rational& tol) const override {
    const RatInterval l = ln_gamma_.approx(tol / Rational(4));
    return l * exp_range(j * l, tol);
  }
  std::optional<RatInterval> deriv2_range(const RatInterval& j, const Rational& tol) const override {
    const RatInterval l = ln_gamma_.approx(tol / Rational(4));
    return pow_int(l, 2) * exp_range(j * l, tol);
  }
  std::string name() const override { return "exp_base"; }

 private:
  Real gamma_;
  Rational sep_;
  Real ln_gamma_;
};

class LogBaseOp final : public UnaryOp {
 public:
  LogBaseOp(Real gamma, Rational sep_pos, Rational sep_one)
      : gamma_(std::move(gamma)), sep_pos_(std::move(sep_pos)), sep_one_(std::move(sep_one)) {
    require_positive(gamma_, sep_pos_, "log_base");
    const RatInterval g = gamma_.approx(sep_one_ / Rational(2));
    if (g.contains(Rational(1))) {
      throw NotSeparatedFromOne("log_base: cannot certify the base differs from 1, enclosure " +
                                to_string(g));
    }
    inv_ln_gamma_ = recip(ln_real(gamma_, sep_pos_), ln_separation(g));
  }
  Real apply(const Real& x) const override { return log_base_real(gamma_, x, sep_pos_, sep_one_); }
  RatInterval range(const RatInterval& j, const Rational& tol) const override {
    const RatInterval inv = inv_ln_gamma_.approx(tol / Rational(4));
    return ln_range(j, tol / (Rational(2) * (inv.magnitude() + Rational(1)))) * inv;
  }
  RatInterval deriv_range(const RatInterval& j, const Rational& tol) const override {
    if (j.lo().sign() <= 0) throw DomainError("log on an interval reaching 0: " + to_string(j));
    return recip(j) * inv_ln_gamma_.approx(tol / Rational(4));
  }
  std::optional<RatInterval> deriv2_range(const RatInterval& j, const Rational& tol) const override {
    if (j.lo().sign() <= 0) throw DomainError("log on an interval reaching 0: " + to_string(j));
    return -(pow_int(recip(j), 2) * inv_ln_gamma_.approx(tol / Rational(4)));
  }
  std::string name() const override { return "log"; }

 private:
  Real gamma_;
  Rational sep_pos_;
  Rational sep_one_;
  Real inv_ln_gamma_;
};

}  // namespace

Rational ln_separation(const RatInterval& gamma) {
  if (gamma.contains(Rational(1))) throw NotSeparatedFromOne("base enclosure contains 1");
  // For g > 1, ln g >= (g - 1) / g; for g < 1, |ln g| >= 1 - g.
  const Rational one(1);
  const Rational dist = one < gamma.lo() ? gamma.lo() - one : one - gamma.hi();
  return dist / max(gamma.hi(), one);
}

Enclosure ln(const Real& x, const Rational& sep, const Rational& eps) {
  require_positive(x, sep, "ln");
  if (x.exact()) return from_interval(ln_point(*x.exact(), eps), eps);
  const Rational low = x.approx(sep / Rational(2)).lo();
  const Rational delta = min(low / Rational(2), eps * low / Rational(32));
  const RatInterval xs = x.approx(delta);
  const Rational m = round_down(xs.mid(), bits_for(delta / Rational(4)));
  const Rational r = max(xs.hi() - m, m - xs.lo());
  // ln on [m - r, m + r] lies within ln(m) +- r / (m - r), and m - r >= low / 4.
  const Rational spread = r / (m - r);
  const RatInterval lm = ln_point(m, eps / Rational(4));
  return from_interval({lm.lo() - spread, lm.hi() + spread}, eps);
}

Enclosure euler_e(const Rational& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("euler_e: tolerance must be positive");
  return exp_core(Rational(1), eps, Rational(2), Rational(4));
}

Enclosure exp(const Real& x, const Rational& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("exp: tolerance must be positive");
  if (x.exact()) return from_interval(exp_point(*x.exact(), eps), eps);
  const Rational one(1);
  const Rational bound = exp_point(x.approx(one).hi() + one, one).hi();
  const Rational delta = min(Rational(1, 2), eps / (Rational(8) * bound));
  const RatInterval xs = x.approx(delta);
  // exp on [m - r, m + r] lies within exp(m) (1 +- 2r) for r <= 1/2.
  const long bits = bits_for(delta / Rational(4));
  const Rational m = round_down(xs.mid(), bits);
  const Rational r = max(xs.hi() - m, m - xs.lo());
  const RatInterval em = exp_point(m, eps / Rational(4));
  const Rational spread = Rational(2) * r * em.hi();
  return from_interval({em.lo() - spread, em.hi() + spread}, eps);
}

Enclosure exp_base(const Real& gamma, const Real& x, const Rational& sep, const Rational& eps) {
  return enclose(exp_base_real(gamma, x, sep), eps);
}

Enclosure pow(const Real& x, const Real& alpha, const Rational& sep, const Rational& eps) {
  return enclose(pow_real(x, alpha, sep), eps);
}

Enclosure log_base(const Real& gamma, const Real& x, const Rational& sep_pos,
                   const Rational& sep_one, const Rational& eps) {
  return enclose(log_base_real(gamma, x, sep_pos, sep_one), eps);
}

Real ln_real(const Real& x, const Rational& sep) {
  require_positive(x, sep, "ln");
  if (x.exact() && *x.exact() == Rational(1)) return Real(Rational(0));
  return real_from_enclosures([x, sep](const Rational& eps) { return ln(x, sep, eps); });
}

Real exp_real(const Real& x) {
  if (x.exact() && x.exact()->is_zero()) return Real(Rational(1));
  return real_from_enclosures([x](const Rational& eps) { return exp(x, eps); });
}

Real euler_e_real() {
  static const Real e = real_from_enclosures([](const Rational& eps) { return euler_e(eps); });
  return e;
}

Real exp_base_real(const Real& gamma, const Real& x, const Rational& sep) {
  return exp_real(x * ln_real(gamma, sep));
}

Real pow_real(const Real& x, const Real& alpha, const Rational& sep) {
  return exp_real(alpha * ln_real(x, sep));
}

Real log_base_real(const Real& gamma, const Real& x, const Rational& sep_pos,
                   const Rational& sep_one) {
  require_positive(gamma, sep_pos, "log_base");
  const RatInterval g = gamma.approx(sep_one / Rational(2));
  if (g.contains(Rational(1))) {
    throw NotSeparatedFromOne("log_base: cannot certify the base differs from 1, enclosure " +
                              to_string(g));
  }
  return ln_real(x, sep_pos) * recip(ln_real(gamma, sep_pos), ln_separation(g));
}

std::shared_ptr<const UnaryOp> ln_op(const Rational& sep) { return std::make_shared<LnOp>(sep); }
std::shared_ptr<const UnaryOp> exp_op() { return std::make_shared<ExpOp>(); }
std::shared_ptr<const UnaryOp> pow_op(const Real& alpha, const Rational& sep) {
  return std::make_shared<PowOp>(alpha, sep);
}
std::shared_ptr<const UnaryOp> exp_base_op(const Real& gamma, const Rational& sep) {
  return std::make_shared<ExpBaseOp>(gamma, sep);
}
std::shared_ptr<const UnaryOp> log_base_op(const Real& gamma, const Rational& sep_pos,
                                           const Rational& sep_one) {
  return std::make_shared<LogBaseOp>(gamma, sep_pos, sep_one);
}

namespace {

Rational positive_lower_bound(const Real& x, const char* what) {
  const RatInterval xs = x.approx(pow2(-10));
  if (xs.lo().sign() <= 0) {
    throw NotSeparatedFromZero(std::string(what) + ": cannot certify a positive base");
  }
  return xs.lo();
}

void require_positive_box(const RatInterval& box, const char* what) {
  if (box.lo().sign() <= 0) {
    throw DomainError(std::string(what) + ": domain box must lie in (0, inf), got " + to_string(box));
  }
}

}  // namespace

ElementaryFunc ElementaryFunc::ln(const RatInterval& box) {
  require_positive_box(box, "ln");
  ElementaryFunc f;
  f.tag = Tag::Ln;
  f.sep = box.lo();
  f.box = box;
  return f;
}

ElementaryFunc ElementaryFunc::exp(const RatInterval& box) {
  ElementaryFunc f;
  f.tag = Tag::Exp;
  f.param = euler_e_real();
  f.box = box;
  return f;
}

ElementaryFunc ElementaryFunc::power(const Real& alpha, const RatInterval& box) {
  require_positive_box(box, "pow");
  ElementaryFunc f;
  f.tag = Tag::PowExponent;
  f.param = alpha;
  f.sep = box.lo();
  f.box = box;
  return f;
}

ElementaryFunc ElementaryFunc::exp_base(const Real& gamma, const Rational& sep_one,
                                        const RatInterval& box) {
  ElementaryFunc f;
  f.tag = Tag::ExpBase;
  f.param = gamma;
  f.sep = positive_lower_bound(gamma, "exp_base");
  f.sep_one = sep_one;
  f.box = box;
  return f;
}

ElementaryFunc ElementaryFunc::log_base(const Real& gamma, const Rational& sep_one,
                                        const RatInterval& box) {
  require_positive_box(box, "log_base");
  ElementaryFunc f;
  f.tag = Tag::LogBase;
  f.param = gamma;
  f.sep = min(box.lo(), positive_lower_bound(gamma, "log_base"));
  f.sep_one = sep_one;
  f.box = box;
  return f;
}

RealFunc as_func(const ElementaryFunc& fn) {
  const RealFunc t = RealFunc::identity();
  switch (fn.tag) {
    case ElementaryFunc::Tag::Ln: return dedekind::apply(ln_op(fn.sep), t);
    case ElementaryFunc::Tag::Exp: return dedekind::apply(exp_op(), t);
    case ElementaryFunc::Tag::PowExponent: return dedekind::apply(pow_op(fn.param, fn.sep), t);
    case ElementaryFunc::Tag::ExpBase: return dedekind::apply(exp_base_op(fn.param, fn.sep), t);
    case ElementaryFunc::Tag::LogBase: return dedekind::apply(log_base_op(fn.param, fn.sep, fn.sep_one), t);
  }
  throw std::logic_error("as_func: unknown tag");
}

namespace {

const Rational kBoxTol = pow2(-16);

// Box containing exp over `box`, with some room at both ends.
RatInterval exp_image(const RatInterval& box) {
  const RatInterval r = exp_range(box, kBoxTol);
  return {r.lo() / Rational(2), r.hi() * Rational(2)};
}

// Same slope, with the function evaluated directly instead of as an integral.
Slope with_func(const Slope& s, const ElementaryFunc& fn) {
  return Slope(as_func(fn), s.derivative_func(), [s](const Real& x, const Real& y) { return s.at(x, y); });
}

}  // namespace

Slope slope_of(const ElementaryFunc& fn) {
  const RealFunc t = RealFunc::identity();
  switch (fn.tag) {
    case ElementaryFunc::Tag::Ln:
      return with_func(slope_from_integral(recip(t, min(fn.sep, Rational(1))), Rational(1)), fn);
    case ElementaryFunc::Tag::LogBase: {
      const RatInterval g = fn.param.approx(fn.sep_one / Rational(2));
      if (g.contains(Rational(1))) {
        throw NotSeparatedFromOne("log_base: cannot certify the base differs from 1");
      }
      const Real inv = recip(ln_real(fn.param, fn.sep), ln_separation(g));
      return with_func(
          slope_from_integral(RealFunc::constant(inv) * recip(t, min(fn.sep, Rational(1))), Rational(1)),
          fn);
    }
    case ElementaryFunc::Tag::Exp: {
      const RatInterval image = exp_image(fn.box);
      // slope of ln at (u, v) is at least 1 / max(u, v)
      const Rational sep = Rational(1) / (Rational(2) * image.hi());
      return slope_inverse(slope_of(ElementaryFunc::ln(image)), as_func(fn), sep);
    }
    case ElementaryFunc::Tag::ExpBase: {
      const RatInterval l = ln_real(fn.param, fn.sep).approx(kBoxTol);
      const RatInterval image = exp_image(fn.box * l);
      const Rational sep =
          Rational(1) / (Rational(2) * (l.magnitude() + kBoxTol) * image.hi());
      return slope_inverse(slope_of(ElementaryFunc::log_base(fn.param, fn.sep_one, image)),
                           as_func(fn), sep);
    }
    case ElementaryFunc::Tag::PowExponent: {
      // x^alpha = 1 + alpha * integral from 1 to x of t^(alpha - 1)
      const Real a = fn.param;
      const RealFunc integrand =
          RealFunc::constant(a) * dedekind::apply(pow_op(a - Real(Rational(1)), fn.sep), t);
      return with_func(slope_from_integral(integrand, Rational(1)), fn);
    }
  }
  throw std::logic_error("slope_of: unknown tag");
}

}  // namespace dedekind
