#include "dedekind/differentiation.hpp"

namespace dedekind {

Real real_from_enclosures(std::function<Enclosure(const Rational& eps)> fn) {
  return Real::from_approx([fn = std::move(fn)](const Rational& eps) {
    const Enclosure e = fn(eps);
    if (e.width() > eps) {
      throw BudgetExhausted("enclosure of width " + e.width().str() + " exceeds " + eps.str(),
                            e.interval());
    }
    return e.interval();
  });
}

Slope slope_const(const Real& c) {
  return Slope(RealFunc::constant(c), RealFunc::constant(Rational(0)),
               [](const Real&, const Real&) { return Real(Rational(0)); });
}

Slope slope_id() {
  return Slope(RealFunc::identity(), RealFunc::constant(Rational(1)),
               [](const Real&, const Real&) { return Real(Rational(1)); });
}

Slope slope_add(const Slope& s, const Slope& t) {
  return Slope(s.for_func() + t.for_func(), s.derivative_func() + t.derivative_func(),
               [s, t](const Real& x, const Real& y) { return s.at(x, y) + t.at(x, y); });
}

Slope slope_neg(const Slope& s) {
  return Slope(-s.for_func(), -s.derivative_func(),
               [s](const Real& x, const Real& y) { return -s.at(x, y); });
}

Slope slope_sub(const Slope& s, const Slope& t) { return slope_add(s, slope_neg(t)); }

Slope slope_mul(const Slope& s, const Slope& t) {
  const RealFunc& f = s.for_func();
  const RealFunc& g = t.for_func();
  return Slope(f * g, s.derivative_func() * g + f * t.derivative_func(),
               [s, t](const Real& x, const Real& y) {
                 return s.at(x, y) * t.for_func()(y) + s.for_func()(x) * t.at(x, y);
               });
}

Slope slope_recip(const Slope& s, const Rational& sep) {
  const RealFunc& f = s.for_func();
  const Rational sep2 = sep * sep;
  return Slope(recip(f, sep), -(s.derivative_func() * recip(pow_int(f, 2), sep2)),
               [s, sep2](const Real& x, const Real& y) {
                 const RealFunc& f = s.for_func();
                 return -(s.at(x, y) * recip(f(x) * f(y), sep2));
               });
}

Slope slope_chain(const Slope& outer, const Slope& inner) {
  const RealFunc& g = inner.for_func();
  return Slope(compose(outer.for_func(), g), compose(outer.derivative_func(), g) * inner.derivative_func(),
               [outer, inner](const Real& x, const Real& y) {
                 const RealFunc& g = inner.for_func();
                 return outer.at(g(x), g(y)) * inner.at(x, y);
               });
}

Slope slope_inverse(const Slope& s, const RealFunc& g, const Rational& sep) {
  return Slope(g, recip(compose(s.derivative_func(), g), sep),
               [s, g, sep](const Real& x, const Real& y) { return recip(s.at(g(x), g(y)), sep); });
}

namespace {

// x -> integral of g from x0 to x.
class IndefiniteIntegralOp final : public UnaryOp {
 public:
  IndefiniteIntegralOp(RealFunc g, Rational x0, IntegrationOptions opts)
      : g_(std::move(g)), x0_(std::move(x0)), opts_(opts) {}

  Real apply(const Real& x) const override {
    const RealFunc g = g_;
    const Rational x0 = x0_;
    const IntegrationOptions opts = opts_;
    return real_from_enclosures(
        [g, x0, x, opts](const Rational& eps) { return integrate_oriented(g, Real(x0), x, eps, opts); });
  }

  // F(t) = F(a) + integral of g from a to t, for t in [a, b].
  RatInterval range(const RatInterval& j, const Rational& tol) const override {
    const RatInterval at_a = apply(Real(j.lo())).approx(tol);
    const RatInterval gj = g_.range(j, tol);
    const RatInterval steps = gj * RatInterval(Rational(0), j.width());
    return at_a + hull(RatInterval(Rational(0)), steps);
  }

  RatInterval deriv_range(const RatInterval& j, const Rational& tol) const override {
    return g_.range(j, tol);
  }

  std::optional<RatInterval> deriv2_range(const RatInterval& j, const Rational& tol) const override {
    return g_.jet(j, tol).slope;
  }

  std::string name() const override { return "integral[" + x0_.str() + "]"; }

 private:
  RealFunc g_;
  Rational x0_;
  IntegrationOptions opts_;
};

}  // namespace

namespace {

// Mean of g between x and y at tolerance eps. Inexact endpoints are replaced
// by rationals within delta / 2. Moving one endpoint of [a, b] moves the mean
// by |g(b) - mean| / (b - a) per unit, which is at most L / 2 (L = sup |g'|)
// and at most osc(g) / (b - a).
Enclosure mean_between(const RealFunc& g, const Real& x, const Real& y, const Rational& eps,
                       const IntegrationOptions& opts) {
  if (x.exact() && y.exact()) {
    const Rational& a = *x.exact();
    const Rational& b = *y.exact();
    return integrate_signed(g, uniform(Real(min(a, b)), Real(max(a, b)), Rational(0)), eps, opts);
  }
  Rational delta = pow2(-4);
  for (int round = 0; round < 6; ++round) {
    const RatInterval xs = x.approx(delta);
    const RatInterval ys = y.approx(delta);
    Jet jt;
    try {
      jt = g.jet(hull(xs, ys), eps / Rational(16));
    } catch (const Error&) {
      break;
    }
    Rational rate = jt.slope.magnitude() / Rational(2);
    const Rational gap = (ys.mid() - xs.mid()).abs() - delta;
    if (gap.sign() > 0) rate = min(rate, jt.value.width() / gap);
    const Rational shift = rate * delta;
    if (shift > eps / Rational(4)) {
      const Rational next = round_down(eps / (Rational(4) * rate), bits_for(eps * pow2(-4)));
      if (next.sign() <= 0 || next >= delta) break;
      delta = next;
      continue;
    }
    const Rational a = xs.mid();
    const Rational b = ys.mid();
    Enclosure e = integrate_signed(g, uniform(Real(min(a, b)), Real(max(a, b)), Rational(0)),
                                   eps / Rational(2), opts);
    e.lo -= shift;
    e.hi += shift;
    return e;
  }
  return integrate_signed(g, uniform(min(x, y), max(x, y), Rational(0)), eps, opts);
}

}  // namespace

Slope slope_from_integral(const RealFunc& g, const Rational& x0, const IntegrationOptions& opts) {
  RealFunc f = dedekind::apply(std::make_shared<IndefiniteIntegralOp>(g, x0, opts), RealFunc::identity());
  return Slope(std::move(f), g, [g, opts](const Real& x, const Real& y) {
    return real_from_enclosures(
        [g, x, y, opts](const Rational& eps) { return mean_between(g, x, y, eps, opts); });
  });
}

RatInterval derivative(const Slope& s, const Real& x, const Rational& eps) {
  return s.eval(x, x, eps);
}

}  // namespace dedekind
