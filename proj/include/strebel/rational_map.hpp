#pragma once

#include <optional>
#include <string>

#include "strebel/polynomial.hpp"

namespace strebel {

/// A point of the Riemann sphere: either a finite complex ball or the
/// distinguished point at infinity.
class SpherePoint {
 public:
  static SpherePoint infinity() { return SpherePoint(); }
  static SpherePoint finite(ComplexBall z) { return SpherePoint(std::move(z)); }

  bool is_infinity() const { return !z_.has_value(); }
  const ComplexBall& z() const;

  std::string to_string() const;

 private:
  SpherePoint() = default;
  explicit SpherePoint(ComplexBall z) : z_(std::move(z)) {}
  std::optional<ComplexBall> z_;
};

/// Ratio of two ball-coefficient polynomials, representing a map P1 -> P1
/// or the coefficient of a quadratic differential. Stored with certified
/// common factors cancelled (see reduce()).
class RationalMap {
 public:
  /// Builds num/den. The denominator must not be identically zero.
  /// When `reduce_factors` is set, overlapping root clusters of numerator
  /// and denominator are cancelled (validated by remainder containment
  /// and sample-point agreement).
  RationalMap(Polynomial num, Polynomial den, bool reduce_factors = true);

  static RationalMap identity(const PrecisionContext& ctx);
  static RationalMap from_polynomial(Polynomial p);
  static RationalMap constant(const ComplexBall& a);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  long prec() const { return num_.prec(); }
  PrecisionContext context() const { return num_.context(); }

  /// Evaluation on the sphere; the w = 1/z chart handles p = infinity.
  /// A finite point with a denominator ball containing zero and a
  /// numerator certified nonzero evaluates to infinity. That verdict is
  /// strictly certified only when the denominator value is the exact zero
  /// ball; for inexact points it asserts the caller presented a genuine
  /// pole (divisor points and exact rationals always do here).
  /// Throws IndeterminateError when numerator and denominator both may
  /// vanish.
  SpherePoint eval(const SpherePoint& p) const;

  /// Quotient-rule derivative with certified common factors cancelled.
  RationalMap derivative() const;

  /// this(other(z)) as a reduced rational map.
  RationalMap compose(const RationalMap& other) const;

  friend RationalMap operator*(const RationalMap& a, const RationalMap& b);

  RationalMap scale(const ComplexBall& s) const;

  /// max(deg num, deg den).
  long degree() const;

  std::string to_string() const;

 private:
  Polynomial num_, den_;

  void reduce();
};

/// Spec-level free functions (aliases over the member operations).
inline SpherePoint rmap_eval(const RationalMap& f, const SpherePoint& p, const PrecisionContext&) {
  return f.eval(p);
}
inline RationalMap rmap_derivative(const RationalMap& f) { return f.derivative(); }
inline RationalMap rmap_compose(const RationalMap& f, const RationalMap& g) { return f.compose(g); }

}  // namespace strebel
