#pragma once

#include <iosfwd>
#include <string>

#include "dedekind/rational.hpp"

namespace dedekind {

// Closed rational interval [lo, hi] with lo <= hi. Used both as an enclosure
// of a real and, with lo < hi, as a rational open interval (a, b).
class RatInterval {
 public:
  RatInterval() = default;
  RatInterval(const Rational& point) : lo_(point), hi_(point) {}  // NOLINT(google-explicit-constructor)
  RatInterval(Rational lo, Rational hi);  // throws std::invalid_argument if lo > hi

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }

  Rational width() const { return hi_ - lo_; }
  Rational mid() const;
  bool is_point() const { return lo_ == hi_; }

  bool contains(const Rational& q) const { return lo_ <= q && q <= hi_; }
  bool contains(const RatInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool overlaps(const RatInterval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

  // max |t| over the interval.
  Rational magnitude() const;
  // min |t| over the interval; 0 when it contains zero.
  Rational mignitude() const;

  friend bool operator==(const RatInterval&, const RatInterval&) = default;

 private:
  Rational lo_;
  Rational hi_;
};

std::ostream& operator<<(std::ostream& os, const RatInterval& iv);
std::string to_string(const RatInterval& iv);

RatInterval hull(const RatInterval& a, const RatInterval& b);
// Throws std::invalid_argument when the intervals are disjoint.
RatInterval intersect(const RatInterval& a, const RatInterval& b);

RatInterval operator+(const RatInterval& a, const RatInterval& b);
RatInterval operator-(const RatInterval& a, const RatInterval& b);
RatInterval operator-(const RatInterval& a);
RatInterval operator*(const RatInterval& a, const RatInterval& b);
RatInterval operator*(const Rational& k, const RatInterval& a);

// Throws NotSeparatedFromZero when a contains 0.
RatInterval recip(const RatInterval& a);
RatInterval pow_int(const RatInterval& a, unsigned n);

RatInterval min(const RatInterval& a, const RatInterval& b);
RatInterval max(const RatInterval& a, const RatInterval& b);
// max(0, a - b)
RatInterval tminus(const RatInterval& a, const RatInterval& b);

// Widen to the dyadic grid 2^-bits.
RatInterval round_outward(const RatInterval& a, long bits);

}  // namespace dedekind
