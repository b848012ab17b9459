#include "dedekind/interval.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dedekind/errors.hpp"

namespace dedekind {

RatInterval::RatInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) {
    throw std::invalid_argument("interval with lo > hi: [" + lo_.str() + ", " + hi_.str() + "]");
  }
}

Rational RatInterval::mid() const { return (lo_ + hi_) / Rational(2); }

Rational RatInterval::magnitude() const { return max(lo_.abs(), hi_.abs()); }

Rational RatInterval::mignitude() const {
  if (contains_zero()) return 0;
  return min(lo_.abs(), hi_.abs());
}

std::ostream& operator<<(std::ostream& os, const RatInterval& iv) {
  return os << '[' << iv.lo() << ", " << iv.hi() << ']';
}

std::string to_string(const RatInterval& iv) {
  std::ostringstream os;
  os << iv;
  return os.str();
}

RatInterval hull(const RatInterval& a, const RatInterval& b) {
  return {min(a.lo(), b.lo()), max(a.hi(), b.hi())};
}

RatInterval intersect(const RatInterval& a, const RatInterval& b) {
  if (!a.overlaps(b)) throw std::invalid_argument("intersect: disjoint intervals");
  return {max(a.lo(), b.lo()), min(a.hi(), b.hi())};
}

RatInterval operator+(const RatInterval& a, const RatInterval& b) {
  return {a.lo() + b.lo(), a.hi() + b.hi()};
}

RatInterval operator-(const RatInterval& a, const RatInterval& b) {
  return {a.lo() - b.hi(), a.hi() - b.lo()};
}

RatInterval operator-(const RatInterval& a) { return {-a.hi(), -a.lo()}; }

RatInterval operator*(const RatInterval& a, const RatInterval& b) {
  if (a.is_point() && b.is_point()) return RatInterval(a.lo() * b.lo());
  if (a.lo().sign() >= 0 && b.lo().sign() >= 0) return {a.lo() * b.lo(), a.hi() * b.hi()};
  const Rational p1 = a.lo() * b.lo();
  const Rational p2 = a.lo() * b.hi();
  const Rational p3 = a.hi() * b.lo();
  const Rational p4 = a.hi() * b.hi();
  return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
}

RatInterval operator*(const Rational& k, const RatInterval& a) {
  if (k.sign() >= 0) return {k * a.lo(), k * a.hi()};
  return {k * a.hi(), k * a.lo()};
}

RatInterval recip(const RatInterval& a) {
  if (a.contains_zero()) {
    throw NotSeparatedFromZero("reciprocal of an interval containing zero: " + to_string(a));
  }
  return {Rational(1) / a.hi(), Rational(1) / a.lo()};
}

RatInterval pow_int(const RatInterval& a, unsigned n) {
  if (n == 0) return RatInterval(Rational(1));
  auto power = [](const Rational& q, unsigned k) {
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get().get_num_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), q.get().get_den_mpz_t(), k);
    return Rational(num, den);
  };
  const Rational l = power(a.lo(), n);
  const Rational h = power(a.hi(), n);
  if (n % 2 == 1 || a.lo().sign() >= 0) return {l, h};
  if (a.hi().sign() <= 0) return {h, l};
  return {Rational(0), max(l, h)};
}

RatInterval min(const RatInterval& a, const RatInterval& b) {
  return {min(a.lo(), b.lo()), min(a.hi(), b.hi())};
}

RatInterval max(const RatInterval& a, const RatInterval& b) {
  return {max(a.lo(), b.lo()), max(a.hi(), b.hi())};
}

RatInterval tminus(const RatInterval& a, const RatInterval& b) {
  return max(RatInterval(Rational(0)), a - b);
}

RatInterval round_outward(const RatInterval& a, long bits) {
  return {round_down(a.lo(), bits), round_up(a.hi(), bits)};
}

}  // namespace dedekind
