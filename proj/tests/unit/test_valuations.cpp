#include <gtest/gtest.h>

#include <random>

#include "dedekind/valuation.hpp"
#include "support/oracles.hpp"

using namespace dedekind;

namespace {

const Rational kTol = pow2(-24);

Real fuzzy(const Rational& q) {
  return Real::from_approx([q](const Rational& eps) {
    return RatInterval(q - eps / Rational(4), q + eps / Rational(2));
  });
}

RatInterval iv(long a, long b, long den = 1) { return {Rational(a, den), Rational(b, den)}; }

OpenSet random_open(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, 4);
  std::vector<RatInterval> raw;
  for (int k = count(rng); k > 0; --k) {
    const Rational a = oracle::random_rational(rng, -1, 2, 8);
    raw.emplace_back(a, a + oracle::random_rational(rng, 0, 1, 8));
  }
  return normalize_union(raw);
}

}  // namespace

TEST(OpenSet, NormalizeMergesAndSorts) {
  EXPECT_EQ(normalize_union({iv(0, 2), iv(1, 3)}).intervals(), std::vector<RatInterval>{iv(0, 3)});
  EXPECT_EQ(normalize_union({iv(0, 1), iv(2, 3)}).intervals(),
            (std::vector<RatInterval>{iv(0, 1), iv(2, 3)}));
  EXPECT_EQ(normalize_union({iv(1, 2), iv(0, 5)}).intervals(), std::vector<RatInterval>{iv(0, 5)});
  EXPECT_TRUE(normalize_union({iv(3, 3)}).empty());
}

TEST(OpenSetProperty, NormalizeIsIdempotentAndPreservesMembership) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<RatInterval> raw;
    for (int k = 0; k < 5; ++k) {
      const Rational a = oracle::random_rational(rng, -2, 2, 6);
      raw.emplace_back(a, a + oracle::random_rational(rng, 0, 1, 6));
    }
    const OpenSet u = normalize_union(raw);
    EXPECT_EQ(normalize_union(u.intervals()), u);
    for (std::size_t k = 1; k < u.size(); ++k) EXPECT_LT(u.intervals()[k - 1].hi(), u.intervals()[k].lo());
    for (int k = 0; k < 40; ++k) {
      const Rational q = oracle::random_rational(rng, -3, 3, 37);
      bool in_raw = false;
      for (const auto& r : raw) in_raw = in_raw || (r.lo() < q && q < r.hi());
      // Touching members are merged, so the merged set may gain the touch point.
      if (in_raw) EXPECT_TRUE(u.contains(q));
    }
  }
}

TEST(Lebesgue, IntervalValues) {
  const Valuation mu = lebesgue(Real(0), Real(1));
  EXPECT_EQ(mu.measure_lb(Rational(-1), Rational(1, 2), kTol), Rational(1, 2));
  EXPECT_EQ(mu.measure_lb(Rational(-1), Rational(2), kTol), Rational(1));
  EXPECT_EQ(mu.measure_lb(Rational(-2), Rational(-1), kTol), Rational(0));
  const Valuation point = lebesgue(Real(3), Real(3));
  EXPECT_EQ(point.measure_lb(Rational(2), Rational(4), kTol), Rational(0));
  EXPECT_EQ(point.measure_lb(Rational(3), Rational(7, 2), kTol), Rational(0));
}

TEST(Lebesgue, OpenSetMeasure) {
  const Valuation mu = lebesgue(Real(0), Real(1));
  const Rational eps(1, 100);
  const Rational m = measure_open(mu, normalize_union({iv(0, 1, 4), iv(2, 3, 4)}), eps);
  EXPECT_LE(m, Rational(1, 2));
  EXPECT_GE(m, Rational(1, 2) - eps);
  EXPECT_EQ(measure_open(mu, OpenSet{}, eps), Rational(0));
  EXPECT_EQ(measure_open(mu, normalize_union({iv(-2, -1)}), eps), Rational(0));
}

TEST(Lebesgue, RejectsReversedCarrier) {
  EXPECT_THROW(lebesgue(Real(2), Real(1)), InvalidIntervalOrder);
  EXPECT_NO_THROW(lebesgue(Real(2), Real(1), Rational(0)));
}

TEST(Uniform, IntervalValues) {
  const Valuation u = uniform(Real(0), Real(1));
  EXPECT_EQ(u.measure_lb(Rational(1, 4), Rational(3, 4), kTol), Rational(1, 2));
  const Valuation point = uniform(Real(5), Real(5));
  EXPECT_EQ(point.measure_lb(Rational(4), Rational(6), kTol), Rational(1));
  EXPECT_EQ(point.measure_lb(Rational(6), Rational(7), kTol), Rational(0));
  // A point carrier known only through enclosures.
  const Valuation fuzzy_point = uniform(fuzzy(Rational(5)), fuzzy(Rational(5)));
  EXPECT_EQ(fuzzy_point.measure_lb(Rational(4), Rational(6), kTol), Rational(1));
}

TEST(Covaluation, ComplementValues) {
  const Covaluation nu = complement(lebesgue(Real(0), Real(1)));
  const Rational eps(1, 100);
  const Rational half = nu.measure_ub(normalize_union({iv(0, 1, 2)}), eps);
  EXPECT_GE(half, Rational(1, 2));
  EXPECT_LE(half, Rational(1, 2) + eps);
  EXPECT_GE(nu.measure_ub(OpenSet{}, eps), Rational(1));
  EXPECT_LE(nu.measure_ub(OpenSet{}, eps), Rational(1) + eps);
  EXPECT_LE(nu.measure_ub(normalize_union({iv(-1, 2)}), eps), eps);
}

TEST(ValuationProperty, MonotoneVanishingModular) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const Rational x = oracle::random_rational(rng, -2, 1, 9);
    const Rational y = x + oracle::random_rational(rng, 0, 2, 7);
    const Valuation mu = (i % 2) ? lebesgue(fuzzy(x), fuzzy(y)) : uniform(fuzzy(x), fuzzy(y));
    Rational pts[4];
    for (auto& p : pts) p = oracle::random_rational(rng, -3, 3, 16);
    std::sort(std::begin(pts), std::end(pts));
    if (pts[0] == pts[1] || pts[1] == pts[2] || pts[2] == pts[3]) continue;
    const Rational &a = pts[0], &b = pts[1], &a2 = pts[2], &b2 = pts[3];
    // Monotone up to 2 tol.
    EXPECT_LE(mu.measure_lb(b, a2, kTol), mu.measure_lb(a, b2, kTol) + 2 * kTol);
    // Modular law for overlapping intervals (a, a2) and (b, b2).
    const Rational lhs = mu.measure_lb(a, a2, kTol) + mu.measure_lb(b, b2, kTol);
    const Rational rhs = mu.measure_lb(a, b2, kTol) + mu.measure_lb(b, a2, kTol);
    EXPECT_LE((lhs - rhs).abs(), 4 * kTol);
    // Vanishing outside the carrier.
    EXPECT_EQ(mu.measure_lb(y + Rational(1, 100), y + Rational(1), kTol), Rational(0));
    EXPECT_EQ(mu.measure_lb(x - Rational(1), x - Rational(1, 100), kTol), Rational(0));
  }
}

TEST(ValuationProperty, InnerRegularity) {
  const Valuation mu = lebesgue(fuzzy(Rational(0)), fuzzy(Rational(1)));
  const Rational a(1, 5), b(4, 5);
  const Rational full = mu.measure_lb(a, b, kTol);
  for (long k = 2; k < 20; ++k) {
    const Rational inner = mu.measure_lb(a + pow2(-k), b - pow2(-k), kTol);
    EXPECT_LE(inner, full + kTol);
    EXPECT_GE(inner, full - pow2(1 - k) - 2 * kTol);
  }
}

TEST(ValuationProperty, ModularLawOnFiniteUnions) {
  std::mt19937_64 rng(23);
  const Rational eps = pow2(-20);
  for (int i = 0; i < 200; ++i) {
    const Valuation mu = lebesgue(fuzzy(Rational(0)), fuzzy(oracle::random_rational(rng, 1, 2, 5)));
    const OpenSet u = random_open(rng), v = random_open(rng);
    const Rational lhs = measure_open(mu, join(u, v), eps) + measure_open(mu, meet(u, v), eps);
    const Rational rhs = measure_open(mu, u, eps) + measure_open(mu, v, eps);
    EXPECT_LE((lhs - rhs).abs(), 8 * eps);
  }
}

TEST(ValuationProperty, ScalingAndSplitting) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 100; ++i) {
    const Rational x = oracle::random_rational(rng, -2, 2, 7);
    const Rational y = x + oracle::random_rational(rng, 1, 3, 5);
    const Rational z = y + oracle::random_rational(rng, 0, 2, 3);
    const Rational a = oracle::random_rational(rng, -3, 3, 11);
    const Rational b = a + oracle::random_rational(rng, 0, 4, 13);
    const Rational s = (y - x) * uniform(fuzzy(x), fuzzy(y)).measure_lb(a, b, kTol);
    const Rational l = lebesgue(fuzzy(x), fuzzy(y)).measure_lb(a, b, kTol);
    EXPECT_LE((s - l).abs(), 4 * (y - x + 1) * kTol);
    const Rational whole = lebesgue(fuzzy(x), fuzzy(z)).measure_lb(a, b, kTol);
    const Rational parts = lebesgue(fuzzy(x), fuzzy(y)).measure_lb(a, b, kTol) +
                           lebesgue(fuzzy(y), fuzzy(z)).measure_lb(a, b, kTol);
    EXPECT_LE((whole - parts).abs(), 4 * kTol);
    if (b <= x || y <= a) EXPECT_EQ(l, Rational(0));
  }
}

TEST(Uniform, ClosedCellTouchingAnAtomIsNotEmpty) {
  const Valuation point = uniform(Real(5), Real(5));
  EXPECT_NE(point.density(Rational(4), Rational(5), kTol).kind, CellDensity::Kind::Zero);
  EXPECT_NE(point.density(Rational(5), Rational(6), kTol).kind, CellDensity::Kind::Zero);
  EXPECT_EQ(point.density(Rational(6), Rational(7), kTol).kind, CellDensity::Kind::Zero);
}
