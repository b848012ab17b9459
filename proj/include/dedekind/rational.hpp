#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dedekind {

using Integer = mpz_class;

// Arbitrary-precision fraction, always kept in lowest terms with a positive
// denominator. Thin value wrapper over GMP's mpq_class.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  Rational(const Integer& num, const Integer& den);
  explicit Rational(const Integer& value) : q_(value) {}
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  // Accepts "p", "p/q", "-1.25", "1e-6", "2.5E+3".
  static Rational parse(std::string_view text);

  const mpq_class& get() const { return q_; }
  Integer numerator() const { return q_.get_num(); }
  Integer denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  Integer floor() const;
  Integer ceil() const;
  double to_double() const { return q_.get_d(); }

  // "p" for integers, "p/q" otherwise.
  std::string str() const;
  // Always "p/q", also for integers ("3/1").
  std::string fraction_str() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// 2^k for any integer k.
Rational pow2(long k);
// 10^k for any integer k.
Rational pow10(long k);

// Smallest k >= 0 with 2^-k <= grain (grain > 0).
long bits_for(const Rational& grain);

// Round to the grid 2^-bits, downwards / upwards.
Rational round_down(const Rational& q, long bits);
Rational round_up(const Rational& q, long bits);

// Number of i in [first, last] with i * step < bound (step > 0).
Integer count_below(const Rational& bound, const Rational& step, const Integer& first,
                    const Integer& last);
// Number of i in [first, last] with i * step <= bound (step > 0).
Integer count_at_most(const Rational& bound, const Rational& step, const Integer& first,
                      const Integer& last);

}  // namespace dedekind

template <>
struct std::hash<dedekind::Rational> {
  std::size_t operator()(const dedekind::Rational& q) const noexcept;
};
