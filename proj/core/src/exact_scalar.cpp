#include "ptdirac/exact_scalar.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ptdirac {

namespace {

using boost::multiprecision::cpp_int;

bool integer_sqrt(const cpp_int& v, cpp_int& root) {
  if (v < 0) return false;
  root = boost::multiprecision::sqrt(v);
  return root * root == v;
}

}  // namespace

bool rational_sqrt(const Rational& x, Rational& root) {
  if (x < 0) return false;
  cpp_int num_root;
  cpp_int den_root;
  if (!integer_sqrt(boost::multiprecision::numerator(x), num_root)) return false;
  if (!integer_sqrt(boost::multiprecision::denominator(x), den_root)) return false;
  root = Rational(num_root, den_root);
  return true;
}

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  const Rational norm = b.re * b.re + b.im * b.im;
  if (norm == 0) throw std::domain_error("division by zero in Q(i)");
  const GaussianRational num = a * b.conj();
  return {num.re / norm, num.im / norm};
}

std::complex<double> GaussianRational::to_complex() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

ExactScalar ExactScalar::sqrt_of(const Rational& m) {
  Rational root;
  if (rational_sqrt(m, root)) return ExactScalar(root);
  if (rational_sqrt(-m, root)) return ExactScalar(GaussianRational(0, root));
  return ExactScalar(GaussianRational{}, GaussianRational(1), m);
}

void ExactScalar::normalize() {
  if (b_.is_zero()) m_ = 0;
}

Rational ExactScalar::common_radicand(const ExactScalar& x, const ExactScalar& y) {
  if (x.b_.is_zero()) return y.m_;
  if (y.b_.is_zero()) return x.m_;
  if (x.m_ != y.m_) throw std::domain_error("exact scalars carry different radicands");
  return x.m_;
}

ExactScalar ExactScalar::conj() const {
  // conj(sqrt(m)) = sqrt(m) for m > 0 and -sqrt(m) for m < 0.
  const GaussianRational b = m_ < 0 ? -b_.conj() : b_.conj();
  return ExactScalar(a_.conj(), b, m_);
}

std::complex<double> ExactScalar::to_complex() const {
  std::complex<double> out = a_.to_complex();
  if (!b_.is_zero()) {
    const double m = m_.convert_to<double>();
    const std::complex<double> root =
        m >= 0 ? std::complex<double>(std::sqrt(m), 0) : std::complex<double>(0, std::sqrt(-m));
    out += b_.to_complex() * root;
  }
  return out;
}

std::string ExactScalar::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
  const Rational m = ExactScalar::common_radicand(x, y);
  return ExactScalar(x.a_ + y.a_, x.b_ + y.b_, m);
}

ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) {
  const Rational m = ExactScalar::common_radicand(x, y);
  return ExactScalar(x.a_ - y.a_, x.b_ - y.b_, m);
}

ExactScalar operator-(const ExactScalar& x) { return ExactScalar(-x.a_, -x.b_, x.m_); }

ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
  const Rational m = ExactScalar::common_radicand(x, y);
  return ExactScalar(x.a_ * y.a_ + x.b_ * y.b_ * GaussianRational(m),
                     x.a_ * y.b_ + x.b_ * y.a_, m);
}

ExactScalar operator/(const ExactScalar& x, const ExactScalar& y) {
  if (y.is_zero()) throw std::domain_error("division by exact zero");
  if (y.b_.is_zero()) {
    return ExactScalar(x.a_ / y.a_, x.b_ / y.a_, x.m_);
  }
  // (a + b r)^-1 = (a - b r) / (a^2 - b^2 m); the norm is nonzero because m is
  // not a square in Q(i).
  const GaussianRational norm = y.a_ * y.a_ - y.b_ * y.b_ * GaussianRational(y.m_);
  const ExactScalar conj_root(y.a_ / norm, -(y.b_ / norm), y.m_);
  return x * conj_root;
}

bool operator==(const ExactScalar& x, const ExactScalar& y) { return (x - y).is_zero(); }

std::ostream& operator<<(std::ostream& os, const ExactScalar& x) {
  const auto& a = x.rational_part();
  os << "(" << a.re << ")+(" << a.im << ")i";
  if (!x.root_part().is_zero()) {
    const auto& b = x.root_part();
    os << "+[(" << b.re << ")+(" << b.im << ")i]sqrt(" << x.radicand() << ")";
  }
  return os;
}

}  // namespace ptdirac
