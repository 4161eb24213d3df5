#pragma once

#include <utility>
#include <vector>

#include "strebel/ball.hpp"

namespace strebel {

/// Polynomial with ComplexBall coefficients, lowest degree first.
/// An empty coefficient list (or all exact-zero coefficients) is the zero
/// polynomial. Immutable after construction.
class Polynomial {
 public:
  explicit Polynomial(const PrecisionContext& ctx) : prec_(ctx.mantissa_bits) {}
  explicit Polynomial(std::vector<ComplexBall> coeffs);

  static Polynomial from_int_coeffs(const std::vector<long>& coeffs, const PrecisionContext& ctx);
  static Polynomial constant(const ComplexBall& a);
  /// x^k with ball coefficient a.
  static Polynomial monomial(const ComplexBall& a, size_t k);

  long prec() const { return prec_; }
  PrecisionContext context() const { return PrecisionContext{prec_}; }

  size_t size() const { return c_.size(); }
  /// Coefficient of z^k (exact zero ball if k is past the stored length).
  ComplexBall coeff(size_t k) const;
  const std::vector<ComplexBall>& coeffs() const { return c_; }

  /// True iff every coefficient is the exact zero ball.
  bool is_zero() const;
  /// Degree after trimming *exact-zero* leading coefficients; requires the
  /// remaining leading coefficient to be certified nonzero, else throws
  /// PrecisionExhaustedError. Returns -1 for the zero polynomial.
  long certified_degree() const;
  ComplexBall leading_coeff() const;  // coefficient at certified_degree()

  ComplexBall eval(const ComplexBall& z) const;
  MpComplex eval_mid(const MpComplex& z) const;  // midpoint-only Horner

  Polynomial derivative() const;
  Polynomial reversed() const;  // coefficient reversal z^n p(1/z), n = size-1

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  Polynomial scale(const ComplexBall& s) const;

  /// Synthetic division by (z - a): p = q * (z - a) + rem.
  std::pair<Polynomial, ComplexBall> divide_linear(const ComplexBall& a) const;
  /// Coefficients of p(z + a).
  Polynomial taylor_shift(const ComplexBall& a) const;

  std::string to_string() const;

 private:
  std::vector<ComplexBall> c_;
  long prec_;

  void trim_exact_zeros();
};

/// A certified root cluster: the ball contains exactly `multiplicity`
/// roots (counted with multiplicity) of every polynomial within the
/// coefficient balls.
struct RootCluster {
  ComplexBall point;
  int multiplicity;
};

/// Certified root clustering. Clusters are pairwise disjoint, sorted by
/// midpoint (re, then im), and their multiplicities sum to the degree.
/// Throws PrecisionExhaustedError when disjoint certified clusters cannot
/// be produced at the context precision.
std::vector<RootCluster> poly_roots(const Polynomial& p, const PrecisionContext& ctx);

}  // namespace strebel
