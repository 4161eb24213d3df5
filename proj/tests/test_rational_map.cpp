#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "strebel/rational.hpp"
#include "strebel/rational_map.hpp"

using namespace strebel;

namespace {
const PrecisionContext ctx{256};

Polynomial from_ints(std::initializer_list<long> cs) {
  return Polynomial::from_int_coeffs(std::vector<long>(cs), ctx);
}

// The paper's map f for a given c: f(x) = (x-c)^2 / ((1-c)^2 x).
RationalMap make_f(const ComplexBall& c) {
  ComplexBall one = ComplexBall::from_int(1, 0, ctx);
  Polynomial num({c * c, (-c).scale_int(2), one});
  ComplexBall s = (one - c) * (one - c);
  Polynomial den({ComplexBall(ctx), s});
  return RationalMap(std::move(num), std::move(den));
}

// g(y) = 4 (y^2 - y + 1)^3 / (27 y^2 (1-y)^2).
RationalMap make_g() {
  return RationalMap(from_ints({4, -12, 24, -28, 24, -12, 4}), from_ints({0, 0, 27, -54, 27}));
}

// Exact polynomial helpers for the symbolic differentiation oracle.
using QPoly = std::vector<Rational>;
QPoly qmul(const QPoly& a, const QPoly& b) {
  QPoly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  return r;
}
QPoly qsub(QPoly a, const QPoly& b) {
  a.resize(std::max(a.size(), b.size()), Rational(0));
  for (size_t i = 0; i < b.size(); ++i) a[i] = a[i] - b[i];
  return a;
}
QPoly qder(const QPoly& a) {
  QPoly r;
  for (size_t k = 1; k < a.size(); ++k) r.push_back(Rational(static_cast<long>(k)) * a[k]);
  return r;
}
Polynomial to_ball(const QPoly& a) {
  std::vector<ComplexBall> cs;
  for (const auto& q : a) cs.push_back(ComplexBall::from_rational(q, Rational(0), ctx));
  return Polynomial(cs);
}

// Checks N1*D2 == N2*D1 coefficient-wise (maps equal as functions).
void check_same_map(const RationalMap& a, const Polynomial& n2, const Polynomial& d2) {
  Polynomial lhs = a.num() * d2;
  Polynomial rhs = n2 * a.den();
  Polynomial diff = lhs - rhs;
  for (size_t k = 0; k < diff.size(); ++k) {
    CHECK(diff.coeff(k).contains_zero());
  }
}
}  // namespace

TEST_CASE("paper value table for f") {
  // Any certified c distinct from 0 and 1 works here.
  ComplexBall c = ComplexBall::from_rational(Rational(-1, 5), Rational(-1, 4), ctx);
  RationalMap f = make_f(c);

  SpherePoint at1 = f.eval(SpherePoint::finite(ComplexBall::from_int(1, 0, ctx)));
  REQUIRE(!at1.is_infinity());
  CHECK(at1.z().contains(Rational(1), Rational(0)));

  SpherePoint atc = f.eval(SpherePoint::finite(c));
  REQUIRE(!atc.is_infinity());
  CHECK(atc.z().contains_zero());

  SpherePoint atc2 = f.eval(SpherePoint::finite(c * c));
  REQUIRE(!atc2.is_infinity());
  CHECK(atc2.z().contains(Rational(1), Rational(0)));

  CHECK(f.eval(SpherePoint::finite(ComplexBall(ctx))).is_infinity());  // f(0)
  CHECK(f.eval(SpherePoint::infinity()).is_infinity());                // f(inf)
}

TEST_CASE("g evaluates exactly at rational points") {
  RationalMap g = make_g();
  SpherePoint v = g.eval(SpherePoint::finite(ComplexBall::from_int(-1, 0, ctx)));
  REQUIRE(!v.is_infinity());
  CHECK(v.z().contains(Rational(1), Rational(0)));
  CHECK(v.z().radius() == 0.0);  // exact path

  SpherePoint w = g.eval(SpherePoint::finite(ComplexBall::from_int(3, 0, ctx)));
  REQUIRE(!w.is_infinity());
  CHECK(w.z().contains(Rational(343, 243), Rational(0)));

  CHECK(g.eval(SpherePoint::finite(ComplexBall::from_int(1, 0, ctx))).is_infinity());
  CHECK(g.eval(SpherePoint::finite(ComplexBall(ctx))).is_infinity());
  CHECK(g.eval(SpherePoint::infinity()).is_infinity());
}

TEST_CASE("derivative: f' matches the paper's displayed formula") {
  ComplexBall c = ComplexBall::from_rational(Rational(-1, 5), Rational(-1, 4), ctx);
  RationalMap f = make_f(c);
  RationalMap fp = f.derivative();
  // Expected (x^2 - c^2) / ((1-c)^2 x^2), compared as maps.
  ComplexBall one = ComplexBall::from_int(1, 0, ctx);
  Polynomial n2({-(c * c), ComplexBall(ctx), one});
  ComplexBall s = (one - c) * (one - c);
  Polynomial d2({ComplexBall(ctx), ComplexBall(ctx), s});
  check_same_map(fp, n2, d2);
}

TEST_CASE("derivative of a constant is the zero map") {
  RationalMap k = RationalMap::constant(ComplexBall::from_int(7, 3, ctx));
  RationalMap kd = k.derivative();
  CHECK(kd.num().is_zero());
  CHECK(!kd.den().is_zero());
}

TEST_CASE("derivative: g' against the exact symbolic oracle") {
  RationalMap g = make_g();
  RationalMap gp = g.derivative();

  QPoly N = {Rational(4), Rational(-12), Rational(24), Rational(-28), Rational(24), Rational(-12), Rational(4)};
  QPoly D = {Rational(0), Rational(0), Rational(27), Rational(-54), Rational(27)};
  QPoly oracle_num = qsub(qmul(qder(N), D), qmul(N, qder(D)));
  QPoly oracle_den = qmul(D, D);
  check_same_map(gp, to_ball(oracle_num), to_ball(oracle_den));

  // g' vanishes at the simple zeros of q1: (1 +/- i sqrt(3))/2.
  auto roots = poly_roots(gp.num(), ctx);
  RealBall s3 = RealBall::from_int(3, ctx).sqrt();
  RealBall half = RealBall::from_rational(Rational(1, 2), ctx);
  ComplexBall hi = ComplexBall::make(half, s3.mul_2si(-1));
  ComplexBall lo = ComplexBall::make(half, -(s3.mul_2si(-1)));
  bool saw_hi = false, saw_lo = false;
  for (const auto& r : roots) {
    if (ComplexBall::overlaps(r.point, hi)) saw_hi = true;
    if (ComplexBall::overlaps(r.point, lo)) saw_lo = true;
  }
  CHECK(saw_hi);
  CHECK(saw_lo);
}

TEST_CASE("compose: (z^2) o (z+1) = (z+1)^2") {
  RationalMap F = RationalMap::from_polynomial(from_ints({0, 0, 1}));
  RationalMap G = RationalMap::from_polynomial(from_ints({1, 1}));
  RationalMap C = F.compose(G);
  check_same_map(C, from_ints({1, 2, 1}), from_ints({1}));
}

TEST_CASE("compose: g o f maps 1 and c to infinity") {
  ComplexBall c = ComplexBall::from_rational(Rational(-1, 5), Rational(-1, 4), ctx);
  RationalMap gf = make_g().compose(make_f(c));
  CHECK(gf.eval(SpherePoint::finite(ComplexBall::from_int(1, 0, ctx))).is_infinity());
  CHECK(gf.eval(SpherePoint::finite(c)).is_infinity());
  // A generic point stays finite.
  SpherePoint v = gf.eval(SpherePoint::finite(ComplexBall::from_int(4, 4, ctx)));
  CHECK(!v.is_infinity());
}

TEST_CASE("reduction cancels certified common factors") {
  RationalMap r(from_ints({-1, 0, 1}), from_ints({-1, 1}));  // (z^2-1)/(z-1) -> z+1
  CHECK(r.num().certified_degree() == 1);
  CHECK(r.den().certified_degree() == 0);
  SpherePoint v = r.eval(SpherePoint::finite(ComplexBall::from_int(5, 0, ctx)));
  CHECK(v.z().contains(Rational(6), Rational(0)));
}

TEST_CASE("indeterminate evaluation raises") {
  // 0/0 at z = 1 for (z-1)/(z-1) with reduction disabled.
  RationalMap r(from_ints({-1, 1}), from_ints({-1, 1}), false);
  CHECK_THROWS_AS(r.eval(SpherePoint::finite(ComplexBall::from_int(1, 0, ctx))), IndeterminateError);
}
