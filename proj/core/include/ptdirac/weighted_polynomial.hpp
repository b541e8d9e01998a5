#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "ptdirac/scalar.hpp"

namespace ptdirac {

// Exponent pair of the monomial z^z_pow * zbar^zbar_pow.
struct Monomial {
  int z_pow = 0;
  int zbar_pow = 0;

  int degree() const { return z_pow + zbar_pow; }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

// p(z, zbar) * exp(d z zbar) with a finite sparse coefficient table. Exact
// zeros are never stored; values with different envelopes do not add.
template <class S>
class WeightedPolynomial {
 public:
  using Traits = ScalarTraits<S>;
  using Terms = std::map<Monomial, S>;

  WeightedPolynomial() = default;
  explicit WeightedPolynomial(S envelope) : d_(std::move(envelope)) {}

  static WeightedPolynomial monomial(int z_pow, int zbar_pow, S coeff, S envelope) {
    WeightedPolynomial p(std::move(envelope));
    p.add_term({z_pow, zbar_pow}, std::move(coeff));
    return p;
  }

  const S& envelope() const { return d_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? S{} : it->second;
  }

  void add_term(Monomial m, const S& c) {
    if (m.z_pow < 0 || m.zbar_pow < 0) throw std::invalid_argument("negative exponent");
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  int total_degree() const {
    int deg = 0;
    for (const auto& [m, c] : terms_) deg = std::max(deg, m.degree());
    return deg;
  }

  double max_abs() const {
    double out = 0.0;
    for (const auto& [m, c] : terms_) out = std::max(out, Traits::magnitude(c));
    return out;
  }

  WeightedPolynomial& operator+=(const WeightedPolynomial& o) {
    require_same_envelope(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  WeightedPolynomial& operator-=(const WeightedPolynomial& o) {
    require_same_envelope(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  WeightedPolynomial& operator*=(const S& s) {
    if (Traits::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second = it->second * s;
      it = Traits::is_zero(it->second) ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }

  friend WeightedPolynomial operator+(WeightedPolynomial a, const WeightedPolynomial& b) {
    return a += b;
  }
  friend WeightedPolynomial operator-(WeightedPolynomial a, const WeightedPolynomial& b) {
    return a -= b;
  }
  friend WeightedPolynomial operator*(const S& s, WeightedPolynomial a) { return a *= s; }

  friend bool operator==(const WeightedPolynomial& a, const WeightedPolynomial& b) {
    return a.d_ == b.d_ && a.terms_ == b.terms_;
  }

 private:
  void require_same_envelope(const WeightedPolynomial& o) const {
    if (!(d_ == o.d_)) throw std::invalid_argument("envelope exponents differ");
  }

  Terms terms_;
  S d_{};
};

// Two-component spinor (phi, chi') of weighted polynomials sharing one
// envelope. The lower slot holds i*chi as a whole, so any i prefactor lives in
// the coefficients. `energy` is stationary-state metadata only.
template <class S>
struct SpinorFunction {
  WeightedPolynomial<S> upper;
  WeightedPolynomial<S> lower;
  std::optional<S> energy;

  SpinorFunction() = default;
  SpinorFunction(WeightedPolynomial<S> up, WeightedPolynomial<S> low,
                 std::optional<S> e = std::nullopt)
      : upper(std::move(up)), lower(std::move(low)), energy(std::move(e)) {
    if (!(upper.envelope() == lower.envelope())) {
      throw std::invalid_argument("spinor components must share an envelope");
    }
  }

  static SpinorFunction zero(const S& envelope) {
    return SpinorFunction(WeightedPolynomial<S>(envelope), WeightedPolynomial<S>(envelope));
  }

  const S& envelope() const { return upper.envelope(); }
  bool is_zero() const { return upper.is_zero() && lower.is_zero(); }
  double max_abs() const { return std::max(upper.max_abs(), lower.max_abs()); }
  int total_degree() const { return std::max(upper.total_degree(), lower.total_degree()); }

  // Linear combinations drop the energy tag.
  SpinorFunction& operator+=(const SpinorFunction& o) {
    upper += o.upper;
    lower += o.lower;
    energy.reset();
    return *this;
  }
  SpinorFunction& operator-=(const SpinorFunction& o) {
    upper -= o.upper;
    lower -= o.lower;
    energy.reset();
    return *this;
  }
  SpinorFunction& operator*=(const S& s) {
    upper *= s;
    lower *= s;
    return *this;
  }
  friend SpinorFunction operator+(SpinorFunction a, const SpinorFunction& b) { return a += b; }
  friend SpinorFunction operator-(SpinorFunction a, const SpinorFunction& b) { return a -= b; }
  friend SpinorFunction operator*(const S& s, SpinorFunction a) { return a *= s; }

  // Compares spatial content only.
  friend bool same_function(const SpinorFunction& a, const SpinorFunction& b) {
    return a.upper == b.upper && a.lower == b.lower;
  }
};

using Polynomial = WeightedPolynomial<Complex>;
using Spinor = SpinorFunction<Complex>;

}  // namespace ptdirac
