#include <gtest/gtest.h>

#include <random>

#include "dedekind/integration.hpp"
#include "support/oracles.hpp"

using namespace dedekind;

namespace {

const RealFunc t = RealFunc::identity();
const Rational kEps(1, 1000);

RealFunc poly(const oracle::Poly& p) {
  RealFunc f = RealFunc::constant(p.c.back());
  for (auto it = p.c.rbegin() + 1; it != p.c.rend(); ++it) f = f * t + RealFunc::constant(*it);
  return f;
}

oracle::Poly random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(0, 3);
  oracle::Poly p;
  for (int k = deg(rng); k >= 0; --k) p.c.push_back(oracle::random_rational(rng, -3, 3, 4));
  return p;
}

void expect_near_below(const Rational& got, const Rational& exact, const Rational& slack) {
  EXPECT_LE(got, exact);
  EXPECT_GE(got, exact - slack);
}

void expect_near_above(const Rational& got, const Rational& exact, const Rational& slack) {
  EXPECT_GE(got, exact);
  EXPECT_LE(got, exact + slack);
}

}  // namespace

TEST(Partition, ValidatesAndRefines) {
  EXPECT_THROW(Partition({Rational(1), Rational(2)}), std::exception);
  EXPECT_THROW(Partition({Rational(0), Rational(2), Rational(1)}), std::exception);
  EXPECT_THROW(Partition({Rational(0)}), std::exception);
  const Partition a = Partition::arithmetic(Rational(1), 4);
  EXPECT_EQ(a.levels()[2], Rational(1, 2));
  const Partition r = a.refine(Partition::arithmetic(Rational(1), 3));
  EXPECT_EQ(r.n(), 6u);
}

TEST(SupBound, Examples) {
  const SupBound id = sup_bound(t, Real(0), Real(1), kEps);
  expect_near_above(id.bound, Rational(1), kEps);
  const SupBound five = sup_bound(RealFunc::constant(5), Real(-3), Real(2), kEps);
  expect_near_above(five.bound, Rational(5), kEps);
  const SupBound hump = sup_bound(t * (RealFunc::constant(1) - t), Real(0), Real(1), Rational(1, 16));
  expect_near_above(hump.bound, Rational(1, 4), Rational(1, 16));
  EXPECT_LE(hump.bound - hump.slack, Rational(1, 4));
}

TEST(LevelSets, Examples) {
  const Valuation mu = lebesgue(Real(0), Real(1));
  expect_near_below(superlevel_lb(t, mu, Rational(1, 4), kEps).bound, Rational(3, 4), kEps);
  EXPECT_EQ(superlevel_lb(RealFunc::constant(0), mu, Rational(1), kEps).bound, Rational(0));
  EXPECT_EQ(superlevel_lb(t, mu, Rational(2), kEps).bound, Rational(0));
  expect_near_below(sublevel_lb(t, mu, Rational(1, 2), kEps).bound, Rational(1, 2), kEps);
  EXPECT_EQ(sublevel_lb(RealFunc::constant(5), mu, Rational(1), kEps).bound, Rational(0));
  expect_near_below(sublevel_lb(t, mu, Rational(2), kEps).bound, Rational(1), kEps);
}

TEST(ChoquetSums, HandValues) {
  const Valuation mu = lebesgue(Real(0), Real(1));
  const Partition quarters = Partition::arithmetic(Rational(1), 4);
  expect_near_below(lower_sum(t, mu, quarters, kEps).value, Rational(3, 8), kEps);
  EXPECT_EQ(lower_sum(RealFunc::constant(0), mu, quarters, kEps).value, Rational(0));
  // Constant 1 on levels (0, 1, 2): neither {1 > 1} nor {1 > 2} has mass.
  const Partition p012({Rational(0), Rational(1), Rational(2)});
  EXPECT_EQ(lower_sum(RealFunc::constant(1), mu, p012, kEps).value, Rational(0));
  EXPECT_EQ(choquet_lower(p012, [](const Rational& r) { return Rational(r < 1 ? 1 : 0); }),
            Rational(0));

  const Rational delta(1, 64);
  const Partition lifted({Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), 1 + delta});
  const Rational up = upper_sum(t, mu, lifted, kEps).value;
  // Exact value: (1/4)(1 + 3/4 + 1/2) + (1/4 + delta)(1/4).
  const Rational exact = Rational(9, 16) + (Rational(1, 4) + delta) / 4;
  expect_near_above(up, exact, 2 * kEps);
  EXPECT_LE(up - Rational(5, 8), delta / 4 + 2 * kEps);

  // Constant 0 on (0, 1): the sublevel {0 < 0} is empty, so the sum is mu X.
  expect_near_above(upper_sum(RealFunc::constant(0), mu, Partition::arithmetic(Rational(1), 1), kEps).value,
                    Rational(1), kEps);
  EXPECT_THROW(upper_sum(t, mu, quarters, kEps), LevelsTooLow);
}

TEST(ChoquetSums, RedundantTopLevel) {
  const Valuation mu = lebesgue(Real(0), Real(1));
  const Partition p({Rational(0), Rational(1, 2), Rational(3, 2)});
  const Partition q({Rational(0), Rational(1, 2), Rational(3, 2), Rational(2)});
  const RealFunc half = RealFunc::constant(Rational(1, 3)) * t;
  const Rational a = upper_sum(half, mu, p, kEps).value;
  const Rational b = upper_sum(half, mu, q, kEps).value;
  EXPECT_LE((a - b).abs(), 2 * kEps);
}

TEST(Integrate, Examples) {
  const Rational eps = pow2(-20);
  const Enclosure id = integrate(t, lebesgue(Real(0), Real(1)), eps);
  EXPECT_TRUE(id.interval().contains(Rational(1, 2)));
  EXPECT_LE(id.width(), eps);
  const Enclosure c = integrate(RealFunc::constant(Rational(7, 3)), uniform(Real(-1), Real(4)), eps);
  EXPECT_TRUE(c.interval().contains(Rational(7, 3)));
  const Enclosure point = integrate(t * t, uniform(Real(Rational(3, 2)), Real(Rational(3, 2))), eps);
  EXPECT_TRUE(point.interval().contains(Rational(9, 4)));
  EXPECT_THROW(integrate(t - RealFunc::constant(2), lebesgue(Real(0), Real(1)), eps), DomainError);
}

TEST(Integrate, TraceHasLevelData) {
  IntegrationOptions opts;
  opts.record_trace = true;
  const Enclosure e = integrate(t, lebesgue(Real(0), Real(1)), Rational(1, 100), opts);
  ASSERT_TRUE(e.trace.has_value());
  const Trace& tr = *e.trace;
  EXPECT_GE(tr.levels.size(), 2u);
  EXPECT_EQ(tr.levels.front(), Rational(0));
  EXPECT_EQ(tr.superlevel_bounds.size() + 1, tr.levels.size());
  EXPECT_EQ(tr.sublevel_bounds.size() + 1, tr.levels.size());
  EXPECT_LE(tr.lower_sum, Rational(1, 2));
  EXPECT_GE(tr.upper_sum, Rational(1, 2));
}

TEST(IntegrateSigned, Examples) {
  const Rational eps = pow2(-16);
  const Enclosure neg = integrate_signed(RealFunc::constant(-1), lebesgue(Real(0), Real(1)), eps);
  EXPECT_TRUE(neg.interval().contains(Rational(-1)));
  const Enclosure odd = integrate_signed(t, lebesgue(Real(-1), Real(1)), eps);
  EXPECT_TRUE(odd.interval().contains(Rational(0)));
  EXPECT_LE(odd.width(), eps);
  const Enclosure pos = integrate(t * t, lebesgue(Real(0), Real(1)), eps);
  const Enclosure both = integrate_signed(t * t, lebesgue(Real(0), Real(1)), eps);
  EXPECT_LE((pos.lo - both.lo).abs(), 2 * eps);
}

TEST(IntegrateOriented, Examples) {
  const Rational eps = pow2(-20);
  EXPECT_TRUE(integrate_oriented(t, Real(0), Real(1), eps).interval().contains(Rational(1, 2)));
  EXPECT_TRUE(integrate_oriented(t, Real(1), Real(0), eps).interval().contains(Rational(-1, 2)));
  EXPECT_TRUE(integrate_oriented(t * t, Real(Rational(2, 3)), Real(Rational(2, 3)), eps)
                  .interval()
                  .contains(Rational(0)));
}

TEST(DarbouxOracle, Examples) {
  EXPECT_EQ(darboux_oracle(t, Rational(0), Rational(1), 4), RatInterval(Rational(3, 8), Rational(5, 8)));
  const RatInterval c = darboux_oracle(RealFunc::constant(3), Rational(1), Rational(5, 2), 7);
  EXPECT_TRUE(c.contains(Rational(9, 2)));
  EXPECT_LE(c.width(), pow2(-30));
  const RealFunc g = t * t - t;
  RatInterval prev = darboux_oracle(g, Rational(0), Rational(2), 1);
  for (std::size_t n = 2; n <= 64; n *= 2) {
    const RatInterval cur = darboux_oracle(g, Rational(0), Rational(2), n);
    EXPECT_LE(cur.width(), prev.width());
    EXPECT_TRUE(cur.contains(Rational(2, 3)));
    prev = cur;
  }
}

TEST(IntegrationProperty, PolynomialsMatchExactAntiderivatives) {
  std::mt19937_64 rng(31);
  const Rational eps = pow2(-14);
  for (int i = 0; i < 30; ++i) {
    const oracle::Poly p = random_poly(rng);
    const Rational a = oracle::random_rational(rng, -2, 2, 5);
    const Rational b = oracle::random_rational(rng, -2, 2, 5);
    const Enclosure e = integrate_oriented(poly(p), Real(a), Real(b), eps);
    EXPECT_TRUE(e.interval().contains(p.integral(a, b))) << e.interval() << " vs " << p.integral(a, b);
    EXPECT_LE(e.width(), eps);
  }
}

TEST(IntegrationProperty, ExtensionSoundness) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 100; ++i) {
    const oracle::Poly p = random_poly(rng);
    const RealFunc f = tminus(poly(p), RealFunc::constant(Rational(1, 3))) + min(t, t * t);
    const Rational a = oracle::random_rational(rng, -2, 2, 9);
    const Rational b = a + oracle::random_rational(rng, 0, 1, 9);
    const RatInterval r = f.range(RatInterval(a, b));
    for (int k = 0; k < 5; ++k) {
      const Rational q = a + (b - a) * Rational(k, 4);
      EXPECT_TRUE(r.contains(f(Real(q)).approx(pow2(-40))));
    }
    const Rational mid = (a + b) / 2;
    Rational prev_w = f.range(RatInterval(mid - Rational(1), mid + Rational(1))).width();
    for (long k = 2; k < 12; k += 3) {
      const Rational w = f.range(RatInterval(mid - pow2(-k), mid + pow2(-k))).width();
      EXPECT_LE(w, prev_w);
      prev_w = w;
    }
    EXPECT_LE(prev_w, Rational(1, 10));
  }
}

TEST(Integrate, PointMassOnACellBoundary) {
  const RealFunc f = (RealFunc::constant(Rational(7, 4)) * t + RealFunc::constant(3)) * t + RealFunc::constant(Rational(1, 4));
  for (const Rational& x : {Rational(-10, 3), Rational(0), Rational(5, 2)}) {
    const Enclosure e = integrate(f * f, uniform(Real(x), Real(x)), pow2(-20));
    const Rational fx = (Rational(7, 4) * x + 3) * x + Rational(1, 4);
    EXPECT_TRUE(e.interval().contains(fx * fx)) << x << ": " << e.interval();
  }
}
