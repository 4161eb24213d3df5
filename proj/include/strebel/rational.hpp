#pragma once

#include <gmp.h>

#include <iosfwd>
#include <string>

namespace strebel {

/// Arbitrary-size integer (GMP mpz wrapper). Arithmetic is exact.
class Integer {
 public:
  Integer() { mpz_init(z_); }
  Integer(long v) { mpz_init_set_si(z_, v); }  // NOLINT: implicit by design
  explicit Integer(const std::string& s);
  Integer(const Integer& o) { mpz_init_set(z_, o.z_); }
  Integer(Integer&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  Integer& operator=(const Integer& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  Integer& operator=(Integer&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~Integer() { mpz_clear(z_); }

  friend Integer operator+(const Integer& a, const Integer& b);
  friend Integer operator-(const Integer& a, const Integer& b);
  friend Integer operator*(const Integer& a, const Integer& b);
  Integer operator-() const;

  friend bool operator==(const Integer& a, const Integer& b) { return mpz_cmp(a.z_, b.z_) == 0; }
  friend bool operator!=(const Integer& a, const Integer& b) { return !(a == b); }
  friend bool operator<(const Integer& a, const Integer& b) { return mpz_cmp(a.z_, b.z_) < 0; }
  friend bool operator<=(const Integer& a, const Integer& b) { return mpz_cmp(a.z_, b.z_) <= 0; }
  friend bool operator>(const Integer& a, const Integer& b) { return mpz_cmp(a.z_, b.z_) > 0; }

  bool is_odd() const { return mpz_odd_p(z_) != 0; }
  bool is_one() const { return mpz_cmp_si(z_, 1) == 0; }
  bool is_zero() const { return mpz_sgn(z_) == 0; }
  int sign() const { return mpz_sgn(z_); }

  /// Floor division by 2 (used for the n = 2k case; n is even there).
  Integer half() const;
  static Integer gcd(const Integer& a, const Integer& b);

  std::string to_string() const;
  double to_double() const { return mpz_get_d(z_); }
  long to_long() const { return mpz_get_si(z_); }
  bool fits_long() const { return mpz_fits_slong_p(z_) != 0; }

  mpz_srcptr raw() const { return z_; }

 private:
  mpz_t z_;
};

/// Exact rational number, always in lowest terms with positive denominator.
class Rational {
 public:
  Rational() { mpq_init(q_); }
  Rational(long v) {  // NOLINT: implicit by design
    mpq_init(q_);
    mpq_set_si(q_, v, 1);
  }
  Rational(long num, long den);
  Rational(const Integer& num, const Integer& den);
  /// Parses "p/q" or "p" (base 10). Throws RangeError on malformed input
  /// or zero denominator.
  explicit Rational(const std::string& s);
  Rational(const Rational& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rational(Rational&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  Rational& operator=(const Rational& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    mpq_swap(q_, o.q_);
    return *this;
  }
  ~Rational() { mpq_clear(q_); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  /// Throws RangeError on division by zero.
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) != 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) >= 0; }

  Integer numerator() const;
  Integer denominator() const;
  int sign() const { return mpq_sgn(q_); }
  Rational abs() const;

  std::string to_string() const;
  double to_double() const { return mpq_get_d(q_); }

  mpq_srcptr raw() const { return q_; }

 private:
  mpq_t q_;

  void canonicalize() { mpq_canonicalize(q_); }
};

std::ostream& operator<<(std::ostream& os, const Rational& r);
std::ostream& operator<<(std::ostream& os, const Integer& z);

}  // namespace strebel
