#include <doctest.h>

#include "generators.hpp"
#include "ptdirac/exact_scalar.hpp"

using namespace ptdirac;

TEST_SUITE("exact") {
  TEST_CASE("Gaussian rationals") {
    const GaussianRational a(Rational(1, 2), Rational(3));
    const GaussianRational b(Rational(-2), Rational(1, 3));
    const auto q = a / b;
    CHECK(q * b == a);
    CHECK(a.conj().im == Rational(-3));
    CHECK_THROWS(a / GaussianRational(0));
  }

  TEST_CASE("perfect squares collapse") {
    CHECK(ExactScalar::sqrt_of(Rational(9, 4)) == ExactScalar(Rational(3, 2)));
    CHECK(ExactScalar::sqrt_of(Rational(-4)) == ExactScalar(GaussianRational(0, 2)));
    CHECK(ExactScalar::sqrt_of(Rational(0)).is_zero());
    const auto r2 = ExactScalar::sqrt_of(Rational(2));
    CHECK(r2.radicand() == Rational(2));
    CHECK(r2 * r2 == ExactScalar(2L));
  }

  TEST_CASE("negative radicand is the +i branch") {
    const auto s = ExactScalar::sqrt_of(Rational(-3));
    CHECK(s * s == ExactScalar(-3L));
    CHECK(s.to_complex().imag() > 0.0);
    CHECK(s.conj() == -s);
    CHECK(std::abs(s.to_complex() - std::complex<double>(0, std::sqrt(3.0))) < 1e-15);
  }

  TEST_CASE("field arithmetic round trips") {
    ptdirac::testing::Gen g(3);
    const auto root = ExactScalar::sqrt_of(Rational(7, 3));
    for (int i = 0; i < 200; ++i) {
      const ExactScalar x = ExactScalar(g.rational(-9, 9, 7)) +
                            ExactScalar(GaussianRational(0, g.rational(-9, 9, 5))) * root;
      const ExactScalar y = ExactScalar(g.rational(-9, 9, 7)) + ExactScalar(g.rational(-9, 9, 3)) * root;
      CHECK((x + y) - y == x);
      CHECK((x * y) / y == x);
      CHECK(x.conj().conj() == x);
      CHECK(std::abs((x * y).to_complex() - x.to_complex() * y.to_complex()) <=
            1e-12 * (1 + std::abs(x.to_complex() * y.to_complex())));
    }
  }

  TEST_CASE("mixing radicands is rejected") {
    const auto a = ExactScalar::sqrt_of(Rational(2));
    const auto b = ExactScalar::sqrt_of(Rational(3));
    CHECK_THROWS(a + b);
    CHECK_THROWS(a * b);
  }

  TEST_CASE("division by zero is rejected") {
    CHECK_THROWS(ExactScalar(1L) / ExactScalar(0L));
  }

  TEST_CASE("rational square roots") {
    Rational root;
    CHECK(rational_sqrt(Rational(49, 25), root));
    CHECK(root == Rational(7, 5));
    CHECK_FALSE(rational_sqrt(Rational(2), root));
    CHECK_FALSE(rational_sqrt(Rational(-4), root));
  }

  TEST_CASE("text form") {
    std::ostringstream os;
    os << ExactScalar(Rational(1, 2));
    CHECK(os.str().find("1/2") != std::string::npos);
  }
}
