#include "strebel/certify.hpp"

#include "strebel/errors.hpp"

namespace strebel {

std::string PrimitiveQuadratic::to_string() const {
  return a.to_string() + " x^2 + " + b.to_string() + " x + " + c.to_string();
}

std::string to_string(CertificateCase c) {
  switch (c) {
    case CertificateCase::kTranscendental:
      return "TRANSCENDENTAL";
    case CertificateCase::kExcludedHalf:
      return "EXCLUDED_HALF";
    case CertificateCase::kOutOfRange:
      return "OUT_OF_RANGE";
  }
  return "?";
}

Rational sin_pi_ell_exact(const Rational& r) {
  if (!(Rational(0) < r && r < Rational(1, 2)))
    throw RangeError("sin_pi_ell_exact: r must satisfy 0 < r < 1/2");
  Rational r2 = r * r;
  Rational a = (Rational(2) * r * (Rational(3) + Rational(4) * r2)) / (Rational(1) + Rational(12) * r2);
  // 2r(3+4r^2)/(1+12r^2) is strictly increasing on (0, 1/2) with limits 0, 1.
  if (!(Rational(0) < a && a < Rational(1)))
    throw RangeError("sin_pi_ell_exact: internal range violation");
  return a;
}

PrimitiveQuadratic primitive_quadratic(const Rational& a) {
  if (!(Rational(0) < a && a < Rational(1)))
    throw RangeError("primitive_quadratic: a must satisfy 0 < a < 1");
  Integer m = a.numerator();
  Integer n = a.denominator();
  if (n.is_odd()) {
    return PrimitiveQuadratic{n, Integer(2) * m, n};
  }
  Integer k = n.half();
  return PrimitiveQuadratic{k, m, k};
}

Certificate certify_from_a(const Rational& a) {
  Certificate cert;
  cert.a = a;
  if (!(Rational(0) < a && a < Rational(1))) {
    cert.verdict = CertificateCase::kOutOfRange;
    cert.reasoning = "a = " + a.to_string() + " is outside (0, 1); no ell in (0, 1/2) has this sine";
    return cert;
  }
  PrimitiveQuadratic pq = primitive_quadratic(a);
  cert.evidence = pq;
  if (a == Rational(1, 2)) {
    cert.verdict = CertificateCase::kExcludedHalf;
    cert.reasoning =
        "a = 1/2: b = -1/2 + i sqrt(3)/2 is a primitive cube root of unity (root of " + pq.to_string() +
        "), and ell = 1/6 is rational";
    return cert;
  }
  cert.verdict = CertificateCase::kTranscendental;
  Integer n = a.denominator();
  if (n.is_odd()) {
    cert.reasoning = "primitive quadratic of b is " + pq.to_string() + " with leading coefficient " +
                     n.to_string() +
                     " != 1, so b is no algebraic integer and divides no x^N - 1; ell is not rational, "
                     "and b algebraic excludes irrational algebraic ell";
  } else {
    cert.reasoning = "primitive quadratic of b is " + pq.to_string() + " with leading coefficient " +
                     n.half().to_string() +
                     " != 1 (k = 1 would force a = 1/2), so b divides no x^N - 1; ell is not rational, "
                     "and b algebraic excludes irrational algebraic ell";
  }
  return cert;
}

Certificate certify_transcendental(const Rational& r) {
  if (!(Rational(0) < r && r < Rational(1, 2))) {
    Certificate cert;
    cert.r = r;
    cert.a = Rational(0);
    cert.verdict = CertificateCase::kOutOfRange;
    cert.reasoning = "r = " + r.to_string() + " is outside (0, 1/2)";
    return cert;
  }
  Certificate cert = certify_from_a(sin_pi_ell_exact(r));
  cert.r = r;
  return cert;
}

}  // namespace strebel
