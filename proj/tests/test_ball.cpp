#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "strebel/ball.hpp"

using namespace strebel;

namespace {
const PrecisionContext ctx{256};
}

TEST_CASE("exact integer paths carry zero radius") {
  RealBall a = RealBall::from_int(3, ctx);
  RealBall b = RealBall::from_int(-7, ctx);
  CHECK((a * b).radius() == 0.0);
  CHECK((a + b).radius() == 0.0);
  CHECK((a - b).contains(Rational(10)));
  ComplexBall z = ComplexBall::from_int(2, 5, ctx);
  CHECK((z * z).radius() == 0.0);
  CHECK((z * z).contains(Rational(-21), Rational(20)));
}

TEST_CASE("pi ball contains pi to working precision") {
  RealBall pi = RealBall::pi(ctx);
  CHECK(pi.radius() > 0);
  CHECK(pi.radius() < 1e-70);
  // 355/113 brackets pi from above, 333/106 from below.
  CHECK(RealBall::certified_lt(pi, RealBall::from_rational(Rational(355, 113), ctx)));
  CHECK(RealBall::certified_lt(RealBall::from_rational(Rational(333, 106), ctx), pi));
}

TEST_CASE("inclusion: ball arithmetic contains the exact rational result") {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<long> num(-50, 50);
  std::uniform_int_distribution<long> den(1, 50);
  std::uniform_int_distribution<int> opd(0, 3);
  for (int rep = 0; rep < 200; ++rep) {
    Rational qa(num(rng), den(rng)), qb(num(rng), den(rng)), qc(num(rng), den(rng));
    RealBall a = RealBall::from_rational(qa, ctx);
    RealBall b = RealBall::from_rational(qb, ctx);
    RealBall c = RealBall::from_rational(qc, ctx);
    // (a*b + c)^2 - a
    Rational qe = (qa * qb + qc) * (qa * qb + qc) - qa;
    RealBall e = (a * b + c) * (a * b + c) - a;
    CHECK(e.contains(qe));
    if (qb != Rational(0) && b.is_nonzero()) {
      CHECK((a / b).contains(qa / qb));
    }
  }
}

TEST_CASE("inclusion: complex ball expressions") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<long> v(-20, 20);
  std::uniform_int_distribution<long> d(1, 20);
  for (int rep = 0; rep < 120; ++rep) {
    Rational ar(v(rng), d(rng)), ai(v(rng), d(rng)), br(v(rng), d(rng)), bi(v(rng), d(rng));
    ComplexBall a = ComplexBall::from_rational(ar, ai, ctx);
    ComplexBall b = ComplexBall::from_rational(br, bi, ctx);
    // w = a*b + conj(a) - b^2, exact arithmetic done by hand:
    Rational wre = ar * br - ai * bi + ar - (br * br - bi * bi);
    Rational wim = ar * bi + ai * br - ai - (Rational(2) * br * bi);
    ComplexBall w = a * b + a.conj() - b * b;
    CHECK(w.contains(wre, wim));
  }
}

TEST_CASE("division and sqrt propagate soundly") {
  ComplexBall z = ComplexBall::from_int(3, 4, ctx);
  RealBall m = z.abs();
  CHECK(m.contains(Rational(5)));
  ComplexBall w = z / ComplexBall::from_int(0, 1, ctx);  // (3+4i)/i = 4 - 3i
  CHECK(w.contains(Rational(4), Rational(-3)));
  ComplexBall s = ComplexBall::from_int(-2, 0, ctx);
  ComplexBall r = s.sqrt();  // principal: i*sqrt(2)
  CHECK(r.real().contains_zero());
  CHECK((r * r).contains(Rational(-2), Rational(0)));
  CHECK_THROWS_AS(ComplexBall(ctx).sqrt(), IndeterminateError);
  CHECK_THROWS_AS(z / ComplexBall(ctx), IndeterminateError);
}

TEST_CASE("sqrt of real balls") {
  RealBall x = RealBall::from_int(2, ctx);
  RealBall s = x.sqrt();
  CHECK((s * s).contains(Rational(2)));
  CHECK_THROWS_AS(RealBall::from_int(-1, ctx).sqrt(), RangeError);
  // ball containing 0
  RealBall tiny = RealBall::from_interval(-1e-30, 1e-30, ctx);
  RealBall st = tiny.sqrt();
  CHECK(st.lower() <= 0.0);
  CHECK(st.upper() >= 0.0);
}

TEST_CASE("asin, sin, arg") {
  RealBall half = RealBall::from_rational(Rational(1, 2), ctx);
  RealBall a = half.asin();  // pi/6
  RealBall pi6 = RealBall::pi(ctx) / RealBall::from_int(6, ctx);
  CHECK(RealBall::overlaps(a, pi6));
  CHECK(a.sin().contains(Rational(1, 2)));

  ComplexBall z = ComplexBall::from_int(0, 2, ctx);
  RealBall th = z.arg();
  RealBall pi2 = RealBall::pi(ctx).mul_2si(-1);
  CHECK(RealBall::overlaps(th, pi2));
  // Ball near the negative real axis: rotation keeps the bound valid.
  ComplexBall zn = ComplexBall::from_rational(Rational(-3), Rational(1, 1000000), ctx);
  RealBall thn = zn.arg();
  CHECK(thn.radius() < 1e-5);
  double mid = thn.midpoint_double();
  CHECK(std::fabs(std::fabs(mid) - 3.14159265) < 1e-3);
}

TEST_CASE("precision monotonicity: radii shrink when bits double") {
  PrecisionContext lo{256}, hi{512};
  Rational q(22, 7);
  for (const auto& c : {lo, hi}) (void)c;
  RealBall a256 = RealBall::from_rational(q, lo) * RealBall::pi(lo) + RealBall::from_int(1, lo);
  RealBall a512 = RealBall::from_rational(q, hi) * RealBall::pi(hi) + RealBall::from_int(1, hi);
  CHECK(a512.radius() < a256.radius());
  ComplexBall c256 = ComplexBall::from_rational(Rational(1, 3), Rational(2, 7), lo).sqrt();
  ComplexBall c512 = ComplexBall::from_rational(Rational(1, 3), Rational(2, 7), hi).sqrt();
  CHECK(c512.radius() < c256.radius());
}

TEST_CASE("certified predicates") {
  RealBall x = RealBall::from_rational(Rational(1, 3), ctx);
  CHECK(x.is_positive());
  CHECK((-x).is_negative());
  CHECK((x - x).contains_zero());
  CHECK(!x.contains_zero());
  RealBall y = RealBall::from_rational(Rational(1, 3) + Rational(1, 1000000), ctx);
  CHECK(RealBall::certified_lt(x, y));
  CHECK(!RealBall::certified_lt(y, x));
  CHECK(!RealBall::overlaps(x, y));
  RealBall ix = RealBall::intersect(x, RealBall::from_interval(0.0, 1.0, ctx));
  CHECK(ix.contains(Rational(1, 3)));
  CHECK_THROWS_AS(RealBall::intersect(x, y), MismatchError);
}

TEST_CASE("interval endpoints and bounds") {
  RealBall b = RealBall::from_interval(1.0, 2.0, ctx);
  CHECK(b.lower() <= 1.0);
  CHECK(b.upper() >= 2.0);
  CHECK(b.contains(Rational(3, 2)));
  CHECK(b.contains(Rational(1)));
  CHECK(b.contains(Rational(2)));
  CHECK(!b.contains(Rational(5, 2)));
}
