#include "strebel/rational.hpp"

#include <ostream>

#include "strebel/errors.hpp"

namespace strebel {

Integer::Integer(const std::string& s) {
  if (mpz_init_set_str(z_, s.c_str(), 10) != 0) {
    mpz_clear(z_);
    throw RangeError("Integer: malformed literal '" + s + "'");
  }
}

Integer operator+(const Integer& a, const Integer& b) {
  Integer r;
  mpz_add(r.z_, a.z_, b.z_);
  return r;
}

Integer operator-(const Integer& a, const Integer& b) {
  Integer r;
  mpz_sub(r.z_, a.z_, b.z_);
  return r;
}

Integer operator*(const Integer& a, const Integer& b) {
  Integer r;
  mpz_mul(r.z_, a.z_, b.z_);
  return r;
}

Integer Integer::operator-() const {
  Integer r;
  mpz_neg(r.z_, z_);
  return r;
}

Integer Integer::half() const {
  Integer r;
  mpz_fdiv_q_2exp(r.z_, z_, 1);
  return r;
}

Integer Integer::gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.z_, a.z_, b.z_);
  return r;
}

std::string Integer::to_string() const {
  char* s = mpz_get_str(nullptr, 10, z_);
  std::string out(s);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(s, out.size() + 1);
  return out;
}

Rational::Rational(long num, long den) {
  if (den == 0) throw RangeError("Rational: zero denominator");
  mpq_init(q_);
  mpq_set_si(q_, num, 1);
  Rational d;
  mpq_set_si(d.q_, den, 1);
  mpq_div(q_, q_, d.q_);
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (den.is_zero()) throw RangeError("Rational: zero denominator");
  mpq_init(q_);
  mpz_set(mpq_numref(q_), num.raw());
  mpz_set(mpq_denref(q_), den.raw());
  if (mpz_sgn(mpq_denref(q_)) < 0) {
    mpz_neg(mpq_numref(q_), mpq_numref(q_));
    mpz_neg(mpq_denref(q_), mpq_denref(q_));
  }
  canonicalize();
}

Rational::Rational(const std::string& s) {
  mpq_init(q_);
  if (mpq_set_str(q_, s.c_str(), 10) != 0 || mpz_sgn(mpq_denref(q_)) == 0) {
    mpq_clear(q_);
    throw RangeError("Rational: malformed literal '" + s + "'");
  }
  if (mpz_sgn(mpq_denref(q_)) < 0) {
    mpz_neg(mpq_numref(q_), mpq_numref(q_));
    mpz_neg(mpq_denref(q_), mpq_denref(q_));
  }
  canonicalize();
}

Rational operator+(const Rational& a, const Rational& b) {
  Rational r;
  mpq_add(r.q_, a.q_, b.q_);
  return r;
}

Rational operator-(const Rational& a, const Rational& b) {
  Rational r;
  mpq_sub(r.q_, a.q_, b.q_);
  return r;
}

Rational operator*(const Rational& a, const Rational& b) {
  Rational r;
  mpq_mul(r.q_, a.q_, b.q_);
  return r;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.sign() == 0) throw RangeError("Rational: division by zero");
  Rational r;
  mpq_div(r.q_, a.q_, b.q_);
  return r;
}

Rational Rational::operator-() const {
  Rational r;
  mpq_neg(r.q_, q_);
  return r;
}

Integer Rational::numerator() const {
  Integer n;
  mpz_set(const_cast<mpz_ptr>(n.raw()), mpq_numref(q_));
  return n;
}

Integer Rational::denominator() const {
  Integer d;
  mpz_set(const_cast<mpz_ptr>(d.raw()), mpq_denref(q_));
  return d;
}

Rational Rational::abs() const {
  Rational r;
  mpq_abs(r.q_, q_);
  return r;
}

std::string Rational::to_string() const {
  char* s = mpq_get_str(nullptr, 10, q_);
  std::string out(s);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(s, out.size() + 1);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }
std::ostream& operator<<(std::ostream& os, const Integer& z) { return os << z.to_string(); }

}  // namespace strebel
