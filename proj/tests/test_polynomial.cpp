#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "strebel/polynomial.hpp"

using namespace strebel;

namespace {
const PrecisionContext ctx{256};

Polynomial from_ints(std::initializer_list<long> cs) {
  return Polynomial::from_int_coeffs(std::vector<long>(cs), ctx);
}
}  // namespace

TEST_CASE("evaluation and arithmetic") {
  Polynomial p = from_ints({1, -2, 3});  // 3z^2 - 2z + 1
  ComplexBall two = ComplexBall::from_int(2, 0, ctx);
  CHECK(p.eval(two).contains(Rational(9), Rational(0)));
  Polynomial q = from_ints({0, 1});
  CHECK((p * q).certified_degree() == 3);
  CHECK((p + q).coeff(1).contains(Rational(-1), Rational(0)));
  CHECK((p - p).is_zero());
}

TEST_CASE("derivative of z^n is exact for n <= 20") {
  for (long n = 1; n <= 20; ++n) {
    std::vector<long> cs(static_cast<size_t>(n) + 1, 0);
    cs.back() = 1;
    Polynomial p = Polynomial::from_int_coeffs(cs, ctx);
    Polynomial d = p.derivative();
    CHECK(d.certified_degree() == n - 1);
    CHECK(d.leading_coeff().radius() == 0.0);
    CHECK(d.leading_coeff().contains(Rational(n), Rational(0)));
  }
  CHECK(from_ints({5}).derivative().is_zero());
}

TEST_CASE("synthetic division and taylor shift") {
  Polynomial p = from_ints({-6, 11, -6, 1});  // (z-1)(z-2)(z-3)
  auto [q, rem] = p.divide_linear(ComplexBall::from_int(2, 0, ctx));
  CHECK(rem.contains_zero());
  CHECK(q.certified_degree() == 2);
  Polynomial sh = p.taylor_shift(ComplexBall::from_int(2, 0, ctx));  // roots -1, 0, 1
  CHECK(sh.coeff(0).contains_zero());
  CHECK(sh.coeff(1).contains(Rational(-1), Rational(0)));
}

TEST_CASE("roots: y^2 - y + 1 has simple roots (1 +/- i sqrt(3))/2") {
  Polynomial p = from_ints({1, -1, 1});
  auto roots = poly_roots(p, ctx);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].multiplicity == 1);
  CHECK(roots[1].multiplicity == 1);
  RealBall s3 = RealBall::from_int(3, ctx).sqrt();
  RealBall half = RealBall::from_rational(Rational(1, 2), ctx);
  ComplexBall lo = ComplexBall::make(half, -(s3.mul_2si(-1)));
  ComplexBall hi = ComplexBall::make(half, s3.mul_2si(-1));
  CHECK(ComplexBall::overlaps(roots[0].point, lo));
  CHECK(ComplexBall::overlaps(roots[1].point, hi));
  CHECK(roots[0].point.radius() < 1e-60);
}

TEST_CASE("roots: x^2 has a double root at 0") {
  auto roots = poly_roots(from_ints({0, 0, 1}), ctx);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].multiplicity == 2);
  CHECK(roots[0].point.contains(Rational(0), Rational(0)));
}

TEST_CASE("roots: mixed multiplicities certified") {
  // (z-1)^3 (z+2)^2 (z-5) = expand via ball arithmetic
  Polynomial p = from_ints({-1, 1});
  Polynomial f1 = p * p * p;  // (z-1)^3
  Polynomial f2 = from_ints({2, 1}) * from_ints({2, 1});
  Polynomial f3 = from_ints({-5, 1});
  Polynomial full = f1 * f2 * f3;
  auto roots = poly_roots(full, ctx);
  REQUIRE(roots.size() == 3);
  int total = 0;
  for (const auto& r : roots) total += r.multiplicity;
  CHECK(total == 6);
  bool saw1 = false, saw2 = false, saw5 = false;
  for (const auto& r : roots) {
    if (r.point.contains(Rational(1), Rational(0))) {
      saw1 = true;
      CHECK(r.multiplicity == 3);
    }
    if (r.point.contains(Rational(-2), Rational(0))) {
      saw2 = true;
      CHECK(r.multiplicity == 2);
    }
    if (r.point.contains(Rational(5), Rational(0))) {
      saw5 = true;
      CHECK(r.multiplicity == 1);
    }
  }
  CHECK(saw1);
  CHECK(saw2);
  CHECK(saw5);
}

TEST_CASE("roots: product over clusters re-expands to the input") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> v(-8, 8);
  for (int rep = 0; rep < 6; ++rep) {
    // Random monic degree-5 integer polynomial.
    std::vector<long> cs;
    for (int k = 0; k < 5; ++k) cs.push_back(v(rng));
    cs.push_back(1);
    Polynomial p = Polynomial::from_int_coeffs(cs, ctx);
    auto roots = poly_roots(p, ctx);
    Polynomial prod = from_ints({1});
    for (const auto& r : roots)
      for (int m = 0; m < r.multiplicity; ++m)
        prod = prod * Polynomial({-r.point, ComplexBall::from_int(1, 0, ctx)});
    REQUIRE(prod.size() == p.size());
    for (size_t k = 0; k < p.size(); ++k) {
      CHECK(ComplexBall::overlaps(prod.coeff(k), p.coeff(k)));
    }
  }
}

TEST_CASE("roots: degree certification errors") {
  CHECK_THROWS_AS(poly_roots(from_ints({3}), ctx), RangeError);
  // Leading coefficient a wide ball containing 0: degree not certified.
  std::vector<ComplexBall> cs = {ComplexBall::from_int(1, 0, ctx),
                                 ComplexBall::from_int(0, 0, ctx).inflate(1e-3)};
  CHECK_THROWS_AS(poly_roots(Polynomial(cs), ctx), PrecisionExhaustedError);
}
