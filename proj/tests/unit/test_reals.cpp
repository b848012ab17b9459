#include <gtest/gtest.h>

#include <random>

#include "dedekind/real.hpp"
#include "support/oracles.hpp"

using namespace dedekind;

namespace {

const Rational kEps = pow2(-30);

// A non-exact real for q: enclosures are jittered around q by a
// tolerance-dependent amount.
Real fuzzy(const Rational& q) {
  return Real::from_approx([q](const Rational& eps) {
    const Rational off = eps / Rational(3);
    return RatInterval(q - off, q + eps / Rational(2));
  });
}

void expect_encloses(const Real& x, const Rational& v, const Rational& eps = kEps) {
  const RatInterval e = x.approx(eps);
  EXPECT_TRUE(e.contains(v)) << e << " misses " << v;
  EXPECT_LE(e.width(), eps);
}

}  // namespace

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("3/6"), Rational(1, 2));
  EXPECT_EQ(Rational::parse("-1.25"), Rational(-5, 4));
  EXPECT_EQ(Rational::parse("1e-6"), Rational(1, 1000000));
  EXPECT_EQ(Rational::parse("2.5E+3"), Rational(2500));
  EXPECT_EQ(Rational::parse("010"), Rational(10));
  EXPECT_EQ(Rational::parse("0.09"), Rational(9, 100));
  EXPECT_EQ(Rational::parse("08/09"), Rational(8, 9));
  EXPECT_THROW(Rational::parse("abc"), std::exception);
  EXPECT_THROW(Rational::parse("1/0"), std::exception);
}

TEST(Rational, RoundingToDyadics) {
  const Rational q(1, 3);
  EXPECT_LE(round_down(q, 10), q);
  EXPECT_GE(round_up(q, 10), q);
  EXPECT_LE(round_up(q, 10) - round_down(q, 10), pow2(-10));
  EXPECT_EQ(bits_for(Rational(1, 1000)), 10);
}

TEST(Interval, ArithmeticContainsPointResults) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rational a = oracle::random_rational(rng, -5, 5, 7);
    const Rational b = a + oracle::random_rational(rng, 0, 2, 5);
    const Rational c = oracle::random_rational(rng, -5, 5, 3);
    const Rational d = c + oracle::random_rational(rng, 0, 2, 9);
    const RatInterval x(a, b), y(c, d);
    const Rational s = (a + b) / Rational(2), t = c;
    EXPECT_TRUE((x + y).contains(s + t));
    EXPECT_TRUE((x - y).contains(s - t));
    EXPECT_TRUE((x * y).contains(s * t));
    EXPECT_TRUE(min(x, y).contains(min(s, t)));
    EXPECT_TRUE(tminus(x, y).contains(max(Rational(0), s - t)));
    if (!y.contains_zero()) EXPECT_TRUE(recip(y).contains(Rational(1) / t));
  }
  EXPECT_THROW(recip(RatInterval(Rational(-1), Rational(1))), NotSeparatedFromZero);
  EXPECT_THROW(RatInterval(Rational(2), Rational(1)), std::invalid_argument);
}

TEST(Real, ExactEmbedding) {
  for (const Rational& q : {Rational(1, 2), Rational(0), Rational(-7, 3)}) {
    for (long k : {1L, 10L, 60L}) EXPECT_EQ(real_from_rational(q).approx(pow2(-k)), RatInterval(q));
  }
}

TEST(Real, AdditionAndLattice) {
  expect_encloses(Real(Rational(1, 3)) + Real(Rational(1, 6)), Rational(1, 2));
  const Real x = fuzzy(Rational(5, 7));
  const RatInterval a = (x + Real(0)).approx(kEps);
  EXPECT_TRUE(a.contains(Rational(5, 7)));
  expect_encloses(max(Real(2), Real(3)), Rational(3));
  expect_encloses(min(fuzzy(Rational(2)), fuzzy(Rational(3))), Rational(2));
}

TEST(Real, Multiplication) {
  expect_encloses(Real(2) * Real(3), Rational(6));
  expect_encloses(fuzzy(Rational(123, 7)) * Real(0), Rational(0));
  expect_encloses(Real(Rational(-1, 2)) * Real(Rational(1, 3)), Rational(-1, 6));
  expect_encloses(fuzzy(Rational(-3, 2)) * fuzzy(Rational(4, 5)), Rational(-6, 5));
}

TEST(Real, TruncatedMinus) {
  expect_encloses(tminus(Real(5), Real(3)), Rational(2));
  expect_encloses(tminus(Real(3), Real(5)), Rational(0));
  const Real x = fuzzy(Rational(2, 3));
  expect_encloses(tminus(x, x), Rational(0));
}

TEST(Real, Reciprocal) {
  expect_encloses(recip(Real(2), Rational(1)), Rational(1, 2));
  expect_encloses(recip(Real(-4), Rational(1)), Rational(-1, 4));
  expect_encloses(recip(fuzzy(Rational(3)), Rational(1)), Rational(1, 3));
  const Real near_zero = Real::from_approx([](const Rational& eps) {
    return RatInterval(-eps / Rational(2), eps / Rational(2));
  });
  EXPECT_THROW(recip(near_zero, Rational(1)), NotSeparatedFromZero);
}

TEST(Real, Compare) {
  EXPECT_EQ(compare(Real(Rational(1, 3)), Real(Rational(1, 2)), Rational(1, 1000)).order, Order::Less);
  EXPECT_EQ(compare(Real(2), Real(1), Rational(1, 10)).order, Order::Greater);
  const Real x = fuzzy(Rational(1, 7));
  const Apartness a = compare(x, x, Rational(1, 1000));
  EXPECT_EQ(a.order, Order::Indistinguishable);
  EXPECT_LE(a.eps, Rational(1, 1000));
}

TEST(Real, DecimalRendering) {
  EXPECT_EQ(to_decimal(Real(Rational(1, 2)), 4).text, "0.5000");
  EXPECT_EQ(to_decimal(Real(Rational(-1, 3)), 3).text, "-0.333");
  EXPECT_EQ(to_decimal(Real(7), 0).text, "7");
  EXPECT_FALSE(to_decimal(Real(Rational(1, 8)), 3).last_digit_uncertain);
}

TEST(Real, RejectsNonPositiveTolerance) {
  EXPECT_THROW(Real(1).approx(Rational(0)), std::invalid_argument);
  EXPECT_THROW(fuzzy(Rational(1)).approx(Rational(-1)), std::invalid_argument);
}

// Locatedness, consistency and determinism over random expression trees.
TEST(RealProperty, LocatedConsistentDeterministic) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> op(0, 5);
  for (int i = 0; i < 200; ++i) {
    const Rational p = oracle::random_rational(rng, -4, 4, 11);
    const Rational q = oracle::random_rational(rng, 1, 4, 13);
    Real x = fuzzy(p), y = fuzzy(q);
    Rational exact;
    Real z;
    switch (op(rng)) {
      case 0: z = x + y; exact = p + q; break;
      case 1: z = x - y; exact = p - q; break;
      case 2: z = x * y; exact = p * q; break;
      case 3: z = recip(y, Rational(1, 2)); exact = Rational(1) / q; break;
      case 4: z = tminus(x, y); exact = max(Rational(0), p - q); break;
      default: z = pow_int(x, 3); exact = p * p * p; break;
    }
    RatInterval prev;
    for (long k : {4L, 12L, 30L, 50L}) {
      const RatInterval e = z.approx(pow2(-k));
      EXPECT_LE(e.width(), pow2(-k));
      EXPECT_TRUE(e.contains(exact));
      if (k > 4) EXPECT_TRUE(e.overlaps(prev));
      EXPECT_EQ(e, z.approx(pow2(-k)));
      prev = e;
    }
  }
}
