#pragma once

#include <cmath>
#include <complex>

#include "ptdirac/exact_scalar.hpp"
#include "ptdirac/params.hpp"

namespace ptdirac {

// Uniform surface over the two coefficient fields used by the operator
// algebra: floating std::complex<double> and the exact ExactScalar.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static Complex i() { return {0.0, 1.0}; }
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static bool is_zero(const Complex& x) { return x.real() == 0.0 && x.imag() == 0.0; }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex to_complex(const Complex& x) { return x; }
  // Principal root of a real-valued scalar (imaginary part ignored).
  static Complex sqrt_real(const Complex& x) { return principal_sqrt(x.real()); }
  static bool is_negative_real(const Complex& x) { return x.real() < 0.0; }
};

template <>
struct ScalarTraits<ExactScalar> {
  static constexpr bool exact = true;
  static ExactScalar i() { return ExactScalar::imag_unit(); }
  static ExactScalar from_int(long v) { return ExactScalar(v); }
  static ExactScalar conj(const ExactScalar& x) { return x.conj(); }
  static bool is_zero(const ExactScalar& x) { return x.is_zero(); }
  static double magnitude(const ExactScalar& x) { return std::abs(x.to_complex()); }
  static Complex to_complex(const ExactScalar& x) { return x.to_complex(); }
  static ExactScalar sqrt_real(const ExactScalar& x) {
    if (!x.root_part().is_zero() || x.rational_part().im != 0) {
      throw std::domain_error("exact square root needs a rational argument");
    }
    return ExactScalar::sqrt_of(x.rational_part().re);
  }
  static bool is_negative_real(const ExactScalar& x) {
    return x.root_part().is_zero() && x.rational_part().re < 0;
  }
};

}  // namespace ptdirac
