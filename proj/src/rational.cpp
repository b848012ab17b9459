#include "dedekind/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace dedekind {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
}

}  // namespace

Rational::Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

Rational operator/(const Rational& a, const Rational& b) {
  Rational r = a;
  r /= b;
  return r;
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad_literal(text);

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_literal(text);
    const Integer d(std::string(den), 10);
    if (d == 0) throw std::domain_error("rational with zero denominator");
    value = Rational(Integer(std::string(num), 10), d);
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_part = s.substr(e + 1);
      s = s.substr(0, e);
      bool exp_negative = false;
      if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
        exp_negative = exp_part.front() == '-';
        exp_part.remove_prefix(1);
      }
      if (!all_digits(exp_part) || exp_part.size() > 6) bad_literal(text);
      exponent = std::stol(std::string(exp_part));
      if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    auto dot = s.find('.');
    if (dot == std::string_view::npos) {
      if (!all_digits(s)) bad_literal(text);
      digits = std::string(s);
    } else {
      auto whole = s.substr(0, dot);
      auto frac = s.substr(dot + 1);
      if (whole.empty() && frac.empty()) bad_literal(text);
      if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) {
        bad_literal(text);
      }
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    }
    if (digits.empty()) digits = "0";
    value = Rational(Integer(digits, 10)) * pow10(exponent);
  }
  return negative ? -value : value;
}

Integer Rational::floor() const {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

Integer Rational::ceil() const {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::fraction_str() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

Rational pow2(long k) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k >= 0 ? Rational(p) : Rational(Integer(1), p);
}

Rational pow10(long k) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
  return k >= 0 ? Rational(p) : Rational(Integer(1), p);
}

long bits_for(const Rational& grain) {
  if (grain.sign() <= 0) throw std::invalid_argument("bits_for: grain must be positive");
  // 2^-k <= grain  <=>  2^k >= 1/grain
  const Rational inv = Rational(1) / grain;
  const Integer c = inv.ceil();
  if (c <= 1) return 0;
  Integer cm1 = c - 1;
  return static_cast<long>(mpz_sizeinbase(cm1.get_mpz_t(), 2));
}

Rational round_down(const Rational& q, long bits) {
  const Rational scale = pow2(bits);
  return Rational((q * scale).floor()) / scale;
}

Rational round_up(const Rational& q, long bits) {
  const Rational scale = pow2(bits);
  return Rational((q * scale).ceil()) / scale;
}

namespace {

Integer clamp_count(const Integer& top, const Integer& first, const Integer& last) {
  Integer hi = top < last ? top : last;
  Integer c = hi - first + 1;
  if (c < 0) return 0;
  return c;
}

}  // namespace

Integer count_below(const Rational& bound, const Rational& step, const Integer& first,
                    const Integer& last) {
  if (first > last) return 0;
  return clamp_count((bound / step).ceil() - 1, first, last);
}

Integer count_at_most(const Rational& bound, const Rational& step, const Integer& first,
                      const Integer& last) {
  if (first > last) return 0;
  return clamp_count((bound / step).floor(), first, last);
}

}  // namespace dedekind

std::size_t std::hash<dedekind::Rational>::operator()(const dedekind::Rational& q) const noexcept {
  const mpq_class& v = q.get();
  std::size_t h = mpz_fdiv_ui(v.get_num_mpz_t(), 1000000007UL);
  h = h * 1315423911u + mpz_fdiv_ui(v.get_den_mpz_t(), 998244353UL);
  return h ^ static_cast<std::size_t>(sgn(v) + 1);
}
