#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "strebel/errors.hpp"
#include "strebel/rational.hpp"

using namespace strebel;

TEST_CASE("rationals are canonical") {
  Rational a(6, -4);
  CHECK(a.numerator().to_long() == -3);
  CHECK(a.denominator().to_long() == 2);
  CHECK(a == Rational(-3, 2));
  CHECK(Rational(0, 7) == Rational(0));
}

TEST_CASE("parsing") {
  CHECK(Rational("5/11") == Rational(5, 11));
  CHECK(Rational("-12/8") == Rational(-3, 2));
  CHECK(Rational("7") == Rational(7));
  CHECK_THROWS_AS(Rational("1/0"), RangeError);
  CHECK_THROWS_AS(Rational("abc"), RangeError);
}

TEST_CASE("field operations are exact") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK_THROWS_AS(a / Rational(0), RangeError);
}

TEST_CASE("random field axioms") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> num(-1000, 1000);
  std::uniform_int_distribution<long> den(1, 1000);
  for (int i = 0; i < 300; ++i) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) - b == a);
    if (b.sign() != 0) CHECK((a / b) * b == a);
    // Canonical form invariants.
    Rational s = a * b + c;
    CHECK(Integer::gcd(s.numerator(), s.denominator()).is_one());
    CHECK(s.denominator() > Integer(0));
  }
}

TEST_CASE("integer helpers") {
  CHECK(Integer(12).half() == Integer(6));
  CHECK(Integer::gcd(Integer(12), Integer(18)) == Integer(6));
  CHECK(Integer(7).is_odd());
  CHECK(!Integer(8).is_odd());
  CHECK((Integer("123456789012345678901234567890") * Integer(10)).to_string() ==
        "1234567890123456789012345678900");
}
