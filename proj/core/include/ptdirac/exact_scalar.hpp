#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <iosfwd>
#include <string>

namespace ptdirac {

using Rational = boost::multiprecision::cpp_rational;

// Element of Q(i).
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianRational conj() const { return {re, -im}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  std::complex<double> to_complex() const;
};

// Exact scalar a + b*sqrt(m) with a, b in Q(i) and a rational radicand m that
// is not a (signed) perfect square. sqrt(m) for m < 0 is the +i branch.
// Values carrying different radicands cannot be combined; this field is
// enough to hold E_n = sqrt((n+1) K) next to rational coefficients.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(long v) : a_(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(const Rational& r) : a_(r) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(const GaussianRational& g) : a_(g) {}  // NOLINT(google-explicit-constructor)

  static ExactScalar imag_unit() { return ExactScalar(GaussianRational(0, 1)); }

  // Principal square root of a rational. Perfect squares collapse to Q(i).
  static ExactScalar sqrt_of(const Rational& m);

  const GaussianRational& rational_part() const { return a_; }
  const GaussianRational& root_part() const { return b_; }
  const Rational& radicand() const { return m_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  ExactScalar conj() const;
  std::complex<double> to_complex() const;
  std::string to_string() const;

  friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator-(const ExactScalar& x);
  friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator/(const ExactScalar& x, const ExactScalar& y);
  friend bool operator==(const ExactScalar& x, const ExactScalar& y);

  ExactScalar& operator+=(const ExactScalar& y) { return *this = *this + y; }
  ExactScalar& operator-=(const ExactScalar& y) { return *this = *this - y; }
  ExactScalar& operator*=(const ExactScalar& y) { return *this = *this * y; }

 private:
  ExactScalar(GaussianRational a, GaussianRational b, Rational m)
      : a_(std::move(a)), b_(std::move(b)), m_(std::move(m)) {
    normalize();
  }
  void normalize();
  static Rational common_radicand(const ExactScalar& x, const ExactScalar& y);

  GaussianRational a_;
  GaussianRational b_;
  Rational m_ = 0;
};

std::ostream& operator<<(std::ostream& os, const ExactScalar& x);

// Rational with exact square root when both numerator and denominator are
// perfect squares.
bool rational_sqrt(const Rational& x, Rational& root);

}  // namespace ptdirac
