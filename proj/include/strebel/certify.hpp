#pragma once

#include <optional>
#include <string>

#include "strebel/rational.hpp"

namespace strebel {

/// Primitive integer quadratic A x^2 + B x + C (gcd(A,B,C) = 1, A > 0).
struct PrimitiveQuadratic {
  Integer a, b, c;

  bool is_monic() const { return a.is_one(); }
  std::string to_string() const;
};

enum class CertificateCase { kTranscendental, kExcludedHalf, kOutOfRange };

std::string to_string(CertificateCase c);

/// Exact-arithmetic verdict on the transcendence of ell, where
/// sin(pi ell) = a. No floating arithmetic enters this module.
struct Certificate {
  std::optional<Rational> r;  // set when entered through certify_transcendental
  Rational a;                 // sin(pi ell); meaningless for OUT_OF_RANGE
  CertificateCase verdict = CertificateCase::kOutOfRange;
  std::optional<PrimitiveQuadratic> evidence;
  std::string reasoning;
};

/// sin(pi ell(r sqrt 3)) = 2r(3 + 4r^2) / (1 + 12r^2), in lowest terms.
/// Requires 0 < r < 1/2 (RangeError otherwise); the result lies in (0, 1).
Rational sin_pi_ell_exact(const Rational& r);

/// The primitive integer quadratic with root b = -a + i sqrt(1 - a^2):
/// (n, 2m, n) when n is odd, (k, m, k) when n = 2k, for a = m/n in lowest
/// terms with 0 < a < 1.
PrimitiveQuadratic primitive_quadratic(const Rational& a);

/// Decision procedure at the a = sin(pi ell) level. Exists chiefly so the
/// EXCLUDED_HALF branch is reachable: no rational r in (0, 1/2) attains
/// a = 1/2.
Certificate certify_from_a(const Rational& a);

/// Full decision procedure for ell(r sqrt 3) following the proof: were
/// ell rational, b would be a root of unity, hence an algebraic integer,
/// hence its primitive quadratic monic — which forces a >= 1 (n odd) or
/// a = 1/2 (n even), both excluded. b being algebraic also rules out
/// irrational algebraic ell.
Certificate certify_transcendental(const Rational& r);

}  // namespace strebel
