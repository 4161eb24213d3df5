#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "strebel/ball.hpp"
#include "strebel/certify.hpp"

using namespace strebel;

TEST_CASE("sin(pi ell) exact values") {
  CHECK(sin_pi_ell_exact(Rational(5, 11)) == Rational(4630, 4631));
  CHECK(sin_pi_ell_exact(Rational(1, 4)) == Rational(13, 14));
  CHECK_THROWS_AS(sin_pi_ell_exact(Rational(3, 4)), RangeError);
  CHECK_THROWS_AS(sin_pi_ell_exact(Rational(0)), RangeError);
}

TEST_CASE("primitive quadratic construction") {
  PrimitiveQuadratic p1 = primitive_quadratic(Rational(3, 5));
  CHECK(p1.a == Integer(5));
  CHECK(p1.b == Integer(6));
  CHECK(p1.c == Integer(5));

  PrimitiveQuadratic p2 = primitive_quadratic(Rational(1, 2));
  CHECK(p2.a == Integer(1));
  CHECK(p2.b == Integer(1));
  CHECK(p2.c == Integer(1));

  PrimitiveQuadratic p3 = primitive_quadratic(Rational(4630, 4631));
  CHECK(p3.a == Integer(4631));
  CHECK(p3.b == Integer(9260));
  CHECK(p3.c == Integer(4631));

  // Primitivity: content is always 1.
  for (auto [num, den] : {std::pair<long, long>{3, 5}, {7, 12}, {1, 2}, {999, 1000}}) {
    PrimitiveQuadratic p = primitive_quadratic(Rational(num, den));
    CHECK(Integer::gcd(Integer::gcd(p.a, p.b), p.c).is_one());
    CHECK(p.a.sign() > 0);
    CHECK(p.a == p.c);  // conjugate roots on the unit circle
  }
}

TEST_CASE("certificates: the paper's r = 5/11 and the excluded case") {
  Certificate c = certify_transcendental(Rational(5, 11));
  CHECK(c.verdict == CertificateCase::kTranscendental);
  CHECK(c.a == Rational(4630, 4631));
  REQUIRE(c.evidence.has_value());
  CHECK(c.evidence->a == Integer(4631));
  CHECK(c.evidence->b == Integer(9260));
  CHECK(c.evidence->c == Integer(4631));
  CHECK(!c.evidence->is_monic());

  Certificate h = certify_from_a(Rational(1, 2));
  CHECK(h.verdict == CertificateCase::kExcludedHalf);
  REQUIRE(h.evidence.has_value());
  CHECK(h.evidence->to_string() == "1 x^2 + 1 x + 1");

  CHECK(certify_transcendental(Rational(3, 4)).verdict == CertificateCase::kOutOfRange);
  CHECK(certify_from_a(Rational(2)).verdict == CertificateCase::kOutOfRange);
}

TEST_CASE("no rational r in (0,1/2) attains a = 1/2") {
  // a = 1/2 would need 16r^3 - 12r^2 + 12r - 1 = 0; by the rational root
  // theorem only 1/2^k for k <= 4 could qualify, and none does.
  for (long den : {1L, 2L, 4L, 8L, 16L}) {
    Rational r(1, den);
    Rational v = Rational(16) * r * r * r - Rational(12) * r * r + Rational(12) * r - Rational(1);
    CHECK(v != Rational(0));
  }
  // Property sweep: 200 random rationals, all transcendental verdicts.
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> den(3, 100000);
  int count = 0;
  while (count < 200) {
    long d = den(rng);
    std::uniform_int_distribution<long> num(1, (d - 1) / 2);
    Rational r(num(rng), d);
    if (!(Rational(0) < r && r < Rational(1, 2))) continue;
    Certificate c = certify_transcendental(r);
    CHECK(c.verdict == CertificateCase::kTranscendental);
    CHECK(c.a != Rational(1, 2));
    ++count;
  }
}

TEST_CASE("monotonicity of a(r) on a rational grid") {
  Rational prev(0);
  for (long k = 1; k < 40; ++k) {
    Rational r(k, 80);
    Rational a = sin_pi_ell_exact(r);
    CHECK(prev < a);
    prev = a;
  }
  CHECK(prev < Rational(1));
}

TEST_CASE("bridge: the primitive quadratic annihilates the ball value of b") {
  const PrecisionContext ctx{256};
  for (auto rr : {Rational(5, 11), Rational(1, 4), Rational(2, 5)}) {
    Rational a = sin_pi_ell_exact(rr);
    PrimitiveQuadratic pq = primitive_quadratic(a);
    RealBall ab = RealBall::from_rational(a, ctx);
    RealBall one = RealBall::from_int(1, ctx);
    ComplexBall b = ComplexBall::make(-ab, (one - ab * ab).sqrt());
    ComplexBall acoef = ComplexBall::from_rational(Rational(pq.a, Integer(1)), Rational(0), ctx);
    ComplexBall bcoef = ComplexBall::from_rational(Rational(pq.b, Integer(1)), Rational(0), ctx);
    ComplexBall ccoef = ComplexBall::from_rational(Rational(pq.c, Integer(1)), Rational(0), ctx);
    ComplexBall val = (acoef * b + bcoef) * b + ccoef;
    CHECK(val.contains_zero());
    // And b has unit modulus: b = e^{i pi (ell + 1/2)}.
    CHECK((b * b.conj()).contains(Rational(1), Rational(0)));
  }
}
