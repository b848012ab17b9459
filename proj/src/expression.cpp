#include "dedekind/expression.hpp"

#include <cctype>

#include "dedekind/elementary.hpp"
#include "dedekind/errors.hpp"

namespace dedekind {

namespace {

using Kind = ExprNode::Kind;

Expr make(Kind k, std::vector<Expr> args = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool digit_at(std::size_t i) const {
    return i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]));
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = make(Kind::Add, {e, term()});
      } else if (accept('-')) {
        e = make(Kind::Sub, {e, term()});
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = make(Kind::Mul, {e, unary()});
      } else if (accept('/')) {
        e = make(Kind::Div, {e, unary()});
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return make(Kind::Neg, {unary()});
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return make(Kind::Pow, {base, unary()});
    return base;
  }

  Expr number() {
    const std::size_t start = pos_;
    while (digit_at(pos_)) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (digit_at(pos_)) ++pos_;
    }
    if (pos_ == start + 1 && s_[start] == '.') fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t k = pos_ + 1;
      if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
      if (digit_at(k)) {
        pos_ = k;
        while (digit_at(pos_)) ++pos_;
      }
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Number;
    n->value = Rational::parse(std::string(s_.substr(start, pos_ - start)));
    return n;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));
    if (name == "t" || name == "x") {
      auto n = std::make_shared<ExprNode>();
      n->kind = Kind::Var;
      n->var = name[0];
      return n;
    }
    Kind k;
    if (name == "ln") {
      k = Kind::Ln;
    } else if (name == "exp") {
      k = Kind::Exp;
    } else if (name == "min") {
      k = Kind::Min;
    } else if (name == "max") {
      k = Kind::Max;
    } else if (name == "log") {
      k = Kind::Log;
    } else {
      pos_ = start;
      fail("unknown name '" + name + "'");
    }
    expect('(');
    Expr a = expr();
    if (k == Kind::Ln || k == Kind::Exp) {
      expect(')');
      return make(k, {a});
    }
    expect(k == Kind::Log ? ';' : ',');
    Expr b = expr();
    expect(')');
    return make(k, {a, b});
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string number_text(const Rational& q) {
  if (q.is_integer()) return q.str();
  // finite decimal if the denominator is 2^a 5^b
  Integer den = q.denominator();
  int twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1 || q.sign() < 0) return "(" + q.fraction_str() + ")";
  const int k = std::max(twos, fives);
  const Integer scaled = (q * pow10(k)).numerator();
  std::string digits = scaled.get_str();
  if (static_cast<int>(digits.size()) <= k) digits.insert(0, k + 1 - digits.size(), '0');
  digits.insert(digits.size() - k, ".");
  return digits;
}

int precedence(const Expr& e) {
  switch (e->kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
  }
}

std::string wrap(const Expr& e, int min_prec) {
  const std::string s = unparse(e);
  return precedence(e) >= min_prec ? s : "(" + s + ")";
}

// ---- translation ----

struct Ctx {
  RatInterval domain;
  Rational tol;
};

// Positive lower bound on |g| (or on g itself when `positive`) over the
// domain, from ranges on up to 256 equal pieces.
Rational certify(const RealFunc& g, const Ctx& c, bool positive, const std::string& what) {
  const RatInterval& d = c.domain;
  RatInterval last = g.range(d, c.tol);
  for (int k = 0; k <= 8; ++k) {
    const long pieces = 1L << k;
    const Rational step = d.width() / Rational(pieces);
    Rational bound;
    bool ok = true;
    for (long i = 0; i < pieces && ok; ++i) {
      const Rational a = d.lo() + step * Rational(i);
      const RatInterval r = g.range(RatInterval(a, i + 1 == pieces ? d.hi() : a + step), c.tol);
      last = r;
      const Rational b = positive ? r.lo() : r.mignitude();
      if (b.sign() <= 0) ok = false;
      if (ok && (i == 0 || b < bound)) bound = b;
    }
    if (ok) return bound;
    if (d.is_point()) break;
  }
  if (positive) throw NotSeparatedFromZero(what + " is not certified positive, range " + to_string(last));
  throw NotSeparatedFromZero(what + " is not certified nonzero, range " + to_string(last));
}

Rational certify_real(const Real& x, const Rational& tol, bool positive, const std::string& what) {
  const RatInterval r = x.approx(tol);
  const Rational b = positive ? r.lo() : r.mignitude();
  if (b.sign() > 0) return b;
  throw NotSeparatedFromZero(what + " is not certified " + (positive ? "positive" : "nonzero") +
                             ", enclosure " + to_string(r));
}

// Distance of the base of a logarithm from 1.
Rational certify_not_one(const Real& gamma, const Rational& tol) {
  const RatInterval g = gamma.approx(tol);
  if (g.contains(Rational(1))) {
    throw NotSeparatedFromOne("base of log is not certified different from 1, enclosure " + to_string(g));
  }
  return Rational(1) < g.lo() ? g.lo() - Rational(1) : Rational(1) - g.hi();
}

std::optional<long> integer_exponent(const Real& e) {
  if (!e.exact() || !e.exact()->is_integer()) return std::nullopt;
  const Integer n = e.exact()->numerator();
  if (!n.fits_slong_p() || abs(n) > 4096) throw DomainError("integer exponent too large");
  return n.get_si();
}

Real real_of(const Expr& e, const Rational& tol) {
  const auto& a = e->args;
  switch (e->kind) {
    case Kind::Number: return Real(e->value);
    case Kind::Var: throw std::logic_error("free variable in a closed expression");
    case Kind::Add: return real_of(a[0], tol) + real_of(a[1], tol);
    case Kind::Sub: return real_of(a[0], tol) - real_of(a[1], tol);
    case Kind::Mul: return real_of(a[0], tol) * real_of(a[1], tol);
    case Kind::Neg: return -real_of(a[0], tol);
    case Kind::Div: {
      const Real den = real_of(a[1], tol);
      if (den.exact()) {
        if (den.exact()->is_zero()) throw NotSeparatedFromZero("division by zero");
        return real_of(a[0], tol) * Real(Rational(1) / *den.exact());
      }
      return real_of(a[0], tol) * recip(den, certify_real(den, tol, false, "divisor"));
    }
    case Kind::Pow: {
      const Real base = real_of(a[0], tol);
      const Real ex = real_of(a[1], tol);
      if (auto n = integer_exponent(ex)) {
        const Real p = pow_int(base, static_cast<unsigned>(*n < 0 ? -*n : *n));
        if (*n >= 0) return p;
        if (p.exact()) {
          if (p.exact()->is_zero()) throw NotSeparatedFromZero("zero to a negative power");
          return Real(Rational(1) / *p.exact());
        }
        return recip(p, certify_real(p, tol, false, "base of a negative power"));
      }
      return pow_real(base, ex, certify_real(base, tol, true, "base of a real power"));
    }
    case Kind::Ln: {
      const Real x = real_of(a[0], tol);
      return ln_real(x, certify_real(x, tol, true, "argument of ln"));
    }
    case Kind::Exp: return exp_real(real_of(a[0], tol));
    case Kind::Min: return min(real_of(a[0], tol), real_of(a[1], tol));
    case Kind::Max: return max(real_of(a[0], tol), real_of(a[1], tol));
    case Kind::Log: {
      const Real gamma = real_of(a[0], tol);
      const Real x = real_of(a[1], tol);
      const Rational sep = min(certify_real(gamma, tol, true, "base of log"),
                               certify_real(x, tol, true, "argument of log"));
      return log_base_real(gamma, x, sep, certify_not_one(gamma, tol));
    }
  }
  throw std::logic_error("unknown expression kind");
}

RealFunc func_of(const Expr& e, const Ctx& c) {
  if (is_closed(e)) return RealFunc::constant(real_of(e, c.tol));
  const auto& a = e->args;
  switch (e->kind) {
    case Kind::Var: return RealFunc::identity();
    case Kind::Add: return func_of(a[0], c) + func_of(a[1], c);
    case Kind::Sub: return func_of(a[0], c) - func_of(a[1], c);
    case Kind::Mul: return func_of(a[0], c) * func_of(a[1], c);
    case Kind::Neg: return -func_of(a[0], c);
    case Kind::Div: {
      const RealFunc den = func_of(a[1], c);
      return func_of(a[0], c) * recip(den, certify(den, c, false, "divisor"));
    }
    case Kind::Pow: {
      const RealFunc base = func_of(a[0], c);
      if (is_closed(a[1])) {
        const Real ex = real_of(a[1], c.tol);
        if (auto n = integer_exponent(ex)) {
          const RealFunc p = pow_int(base, static_cast<unsigned>(*n < 0 ? -*n : *n));
          if (*n >= 0) return p;
          return recip(p, certify(p, c, false, "base of a negative power"));
        }
        return dedekind::apply(pow_op(ex, certify(base, c, true, "base of a real power")), base);
      }
      const RealFunc ex = func_of(a[1], c);
      if (is_closed(a[0])) {
        const Real gamma = real_of(a[0], c.tol);
        return dedekind::apply(exp_base_op(gamma, certify_real(gamma, c.tol, true, "base of a power")),
                               ex);
      }
      const Rational sep = certify(base, c, true, "base of a real power");
      return dedekind::apply(exp_op(), ex * dedekind::apply(ln_op(sep), base));
    }
    case Kind::Ln: {
      const RealFunc g = func_of(a[0], c);
      return dedekind::apply(ln_op(certify(g, c, true, "argument of ln")), g);
    }
    case Kind::Exp: return dedekind::apply(exp_op(), func_of(a[0], c));
    case Kind::Min: return min(func_of(a[0], c), func_of(a[1], c));
    case Kind::Max: return max(func_of(a[0], c), func_of(a[1], c));
    case Kind::Log: {
      const RealFunc x = func_of(a[1], c);
      const Rational sep_x = certify(x, c, true, "argument of log");
      if (is_closed(a[0])) {
        const Real gamma = real_of(a[0], c.tol);
        const Rational sep = min(sep_x, certify_real(gamma, c.tol, true, "base of log"));
        return dedekind::apply(log_base_op(gamma, sep, certify_not_one(gamma, c.tol)), x);
      }
      const RealFunc b = func_of(a[0], c);
      const RealFunc ln_b = dedekind::apply(ln_op(certify(b, c, true, "base of log")), b);
      return dedekind::apply(ln_op(sep_x), x) * recip(ln_b, certify(ln_b, c, false, "ln of the base"));
    }
    case Kind::Number: break;
  }
  throw std::logic_error("unknown expression kind");
}

// Interval [lower, range.hi] for a function certified positive on the domain.
RatInterval positive_box(const RealFunc& g, const Ctx& c, const std::string& what) {
  const Rational lo = certify(g, c, true, what);
  const Rational hi = g.range(c.domain, c.tol).hi();
  return {lo, max(lo, hi)};
}

Slope slope_of_expr(const Expr& e, const Ctx& c) {
  if (is_closed(e)) return slope_const(real_of(e, c.tol));
  const auto& a = e->args;
  switch (e->kind) {
    case Kind::Var: return slope_id();
    case Kind::Add: return slope_add(slope_of_expr(a[0], c), slope_of_expr(a[1], c));
    case Kind::Sub: return slope_sub(slope_of_expr(a[0], c), slope_of_expr(a[1], c));
    case Kind::Mul: return slope_mul(slope_of_expr(a[0], c), slope_of_expr(a[1], c));
    case Kind::Neg: return slope_neg(slope_of_expr(a[0], c));
    case Kind::Div: {
      const Slope den = slope_of_expr(a[1], c);
      const Rational sep = certify(den.for_func(), c, false, "divisor");
      return slope_mul(slope_of_expr(a[0], c), slope_recip(den, sep));
    }
    case Kind::Pow: {
      const Slope base = slope_of_expr(a[0], c);
      if (is_closed(a[1])) {
        const Real ex = real_of(a[1], c.tol);
        if (auto n = integer_exponent(ex)) {
          const long m = *n < 0 ? -*n : *n;
          Slope p = slope_const(Real(Rational(1)));
          for (long i = 0; i < m; ++i) p = i == 0 ? base : slope_mul(p, base);
          if (*n >= 0) return p;
          return slope_recip(p, certify(p.for_func(), c, false, "base of a negative power"));
        }
        const RatInterval box = positive_box(base.for_func(), c, "base of a real power");
        return slope_chain(slope_of(ElementaryFunc::power(ex, box)), base);
      }
      if (is_closed(a[0])) {
        const Real gamma = real_of(a[0], c.tol);
        if (gamma.exact() && *gamma.exact() == Rational(1)) return slope_const(Real(Rational(1)));
        const Slope ex = slope_of_expr(a[1], c);
        const RatInterval box = ex.for_func().range(c.domain, c.tol);
        return slope_chain(slope_of(ElementaryFunc::exp_base(gamma, certify_not_one(gamma, c.tol), box)), ex);
      }
      // f^g = exp(g ln f)
      return slope_of_expr(make(Kind::Exp, {make(Kind::Mul, {a[1], make(Kind::Ln, {a[0]})})}), c);
    }
    case Kind::Ln: {
      const Slope g = slope_of_expr(a[0], c);
      const RatInterval box = positive_box(g.for_func(), c, "argument of ln");
      return slope_chain(slope_of(ElementaryFunc::ln(box)), g);
    }
    case Kind::Exp: {
      const Slope g = slope_of_expr(a[0], c);
      return slope_chain(slope_of(ElementaryFunc::exp(g.for_func().range(c.domain, c.tol))), g);
    }
    case Kind::Log: {
      if (!is_closed(a[0])) {
        return slope_of_expr(make(Kind::Div, {make(Kind::Ln, {a[1]}), make(Kind::Ln, {a[0]})}), c);
      }
      const Real gamma = real_of(a[0], c.tol);
      certify_real(gamma, c.tol, true, "base of log");
      const Slope g = slope_of_expr(a[1], c);
      const RatInterval box = positive_box(g.for_func(), c, "argument of log");
      return slope_chain(slope_of(ElementaryFunc::log_base(gamma, certify_not_one(gamma, c.tol), box)), g);
    }
    case Kind::Min:
    case Kind::Max: throw DomainError("min and max have no slope");
    case Kind::Number: break;
  }
  throw std::logic_error("unknown expression kind");
}

}  // namespace

Expr parse_expression(std::string_view text) { return Parser(text).run(); }

std::string unparse(const Expr& e) {
  const auto& a = e->args;
  switch (e->kind) {
    case Kind::Number: return number_text(e->value);
    case Kind::Var: return std::string(1, e->var);
    case Kind::Add: return wrap(a[0], 1) + " + " + wrap(a[1], 2);
    case Kind::Sub: return wrap(a[0], 1) + " - " + wrap(a[1], 2);
    case Kind::Mul: return wrap(a[0], 2) + " * " + wrap(a[1], 3);
    case Kind::Div: return wrap(a[0], 2) + " / " + wrap(a[1], 3);
    case Kind::Neg: return "-" + wrap(a[0], 3);
    case Kind::Pow: return wrap(a[0], 5) + "^" + wrap(a[1], 3);
    case Kind::Ln: return "ln(" + unparse(a[0]) + ")";
    case Kind::Exp: return "exp(" + unparse(a[0]) + ")";
    case Kind::Min: return "min(" + unparse(a[0]) + ", " + unparse(a[1]) + ")";
    case Kind::Max: return "max(" + unparse(a[0]) + ", " + unparse(a[1]) + ")";
    case Kind::Log: return "log(" + unparse(a[0]) + "; " + unparse(a[1]) + ")";
  }
  throw std::logic_error("unknown expression kind");
}

bool is_closed(const Expr& e) {
  if (e->kind == Kind::Var) return false;
  for (const Expr& a : e->args) {
    if (!is_closed(a)) return false;
  }
  return true;
}

RealFunc to_func(const Expr& e, const RatInterval& domain, const Rational& tol) {
  return func_of(e, Ctx{domain, tol});
}

Real to_real(const Expr& e, const Rational& tol) {
  if (!is_closed(e)) throw DomainError("expression has a free variable");
  return real_of(e, tol);
}

Slope to_slope(const Expr& e, const RatInterval& domain, const Rational& tol) {
  return slope_of_expr(e, Ctx{domain, tol});
}

}  // namespace dedekind
