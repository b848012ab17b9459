#include <gtest/gtest.h>

#include <random>

#include "dedekind/expression.hpp"
#include "support/oracles.hpp"

using namespace dedekind;

namespace {

const Rational kEps = pow2(-20);

std::string random_expr(std::mt19937_64& rng, int depth, char var, bool with_exp = true) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 1);
  std::uniform_int_distribution<int> small(1, 9);
  const auto sub = [&] { return random_expr(rng, depth - 1, var, with_exp); };
  switch (pick(rng)) {
    case 0: return std::to_string(small(rng));
    case 1: return std::string(1, var);
    case 2: return sub() + " + " + sub();
    case 3: return sub() + " - " + sub();
    case 4: return "(" + sub() + ") * (" + sub() + ")";
    case 5: return "-(" + sub() + ")";
    case 6: return "(" + sub() + ")^" + std::to_string(small(rng) % 3 + 1);
    case 7: return with_exp ? "exp(" + sub() + ")" : "(" + sub() + ")";
    case 8: return "max(" + sub() + ", " + sub() + ")";
    default: return "0." + std::to_string(small(rng)) + " * " + sub();
  }
}

}  // namespace

TEST(Parser, AcceptsTheGrammar) {
  for (const char* s : {"1/3 + 1/6", "t^2", "1/t", "ln(4)", "exp(0)", "x^(3/2)", "log(2; 8)",
                        "min(t, 1 - t)", "max(x, 2) * -x", "2.5e-3 * t", "-(t)"}) {
    EXPECT_NO_THROW(parse_expression(s)) << s;
  }
}

TEST(Parser, RejectsMalformedInput) {
  for (const char* s : {"", "2 +", "(t", "t)", "ln 4", "y", "log(2, 8)", "1..2", "t^"}) {
    EXPECT_THROW(parse_expression(s), ParseError) << s;
  }
}

TEST(Parser, PrecedenceAndAssociativity) {
  EXPECT_EQ(unparse(parse_expression("1 - 2 - 3")), "1 - 2 - 3");
  EXPECT_EQ(unparse(parse_expression("1 - (2 - 3)")), "1 - (2 - 3)");
  EXPECT_EQ(unparse(parse_expression("(1 + 2) * 3")), "(1 + 2) * 3");
  EXPECT_EQ(unparse(parse_expression("((t))")), "t");
  EXPECT_TRUE(to_real(parse_expression("2^3^2"), kEps).approx(kEps).contains(Rational(512)));
  EXPECT_TRUE(to_real(parse_expression("-2^2"), kEps).approx(kEps).contains(Rational(-4)));
  EXPECT_TRUE(to_real(parse_expression("8 / 4 / 2"), kEps).approx(kEps).contains(Rational(1)));
}

TEST(ParserProperty, UnparseIsAFixedPoint) {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 300; ++i) {
    const std::string s = random_expr(rng, 4, i % 2 ? 't' : 'x');
    const Expr e = parse_expression(s);
    const std::string canon = unparse(e);
    EXPECT_EQ(unparse(parse_expression(canon)), canon) << s;
  }
}

TEST(ParserProperty, UnparsePreservesMeaning) {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 100; ++i) {
    const std::string s = random_expr(rng, 3, 't', false);
    const Expr e = parse_expression(s);
    const Expr back = parse_expression(unparse(e));
    const RatInterval dom(Rational(-1), Rational(1));
    const Rational q = oracle::random_rational(rng, -1, 1, 5);
    try {
      const RatInterval a = to_func(e, dom, kEps)(Real(q)).approx(kEps);
      const RatInterval b = to_func(back, dom, kEps)(Real(q)).approx(kEps);
      EXPECT_TRUE(a.overlaps(b)) << s;
    } catch (const Error&) {
      // guards that cannot be certified are skipped
    }
  }
}

TEST(Translation, ClosedExpressions) {
  EXPECT_TRUE(is_closed(parse_expression("ln(4) + 1")));
  EXPECT_FALSE(is_closed(parse_expression("t + 1")));
  EXPECT_TRUE(to_real(parse_expression("1/3 + 1/6"), kEps).approx(kEps).contains(Rational(1, 2)));
  EXPECT_TRUE(to_real(parse_expression("log(2; 8)"), kEps).approx(kEps).contains(Rational(3)));
  EXPECT_TRUE(to_real(parse_expression("4^0.5"), kEps).approx(kEps).contains(Rational(2)));
  EXPECT_TRUE(to_real(parse_expression("min(3, 1/2)"), kEps).approx(kEps).contains(Rational(1, 2)));
  EXPECT_THROW(to_real(parse_expression("t"), kEps), std::exception);
}

TEST(Translation, GuardsAreCertified) {
  const RatInterval dom(Rational(-1), Rational(1));
  EXPECT_THROW(to_real(parse_expression("1/(1 - 1)"), kEps), NotSeparatedFromZero);
  EXPECT_THROW(to_func(parse_expression("1/t"), dom, kEps), NotSeparatedFromZero);
  EXPECT_THROW(to_func(parse_expression("ln(t)"), dom, kEps), NotSeparatedFromZero);
  EXPECT_THROW(to_real(parse_expression("log(1; 8)"), kEps), NotSeparatedFromOne);
  EXPECT_NO_THROW(to_func(parse_expression("1/(t*t + 1)"), dom, kEps));
}

TEST(Translation, SlopesOfExpressions) {
  const RatInterval dom(Rational(1), Rational(3));
  const Slope sq = to_slope(parse_expression("x^2"), dom, kEps);
  EXPECT_TRUE(sq.eval(Real(1), Real(3), kEps).contains(Rational(4)));
  EXPECT_TRUE(sq.eval(Real(2), Real(2), kEps).contains(Rational(4)));
  const Slope q = to_slope(parse_expression("(x + 1)/x"), dom, kEps);
  // (4/3 - 2)/(3 - 1) = -1/3
  EXPECT_TRUE(q.eval(Real(1), Real(3), kEps).contains(Rational(-1, 3)));
  EXPECT_THROW(to_slope(parse_expression("min(x, 2)"), dom, kEps), DomainError);
}
