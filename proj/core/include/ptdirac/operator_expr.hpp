#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ptdirac/weighted_polynomial.hpp"

namespace ptdirac {

enum class Primitive { DZ, DZbar, MulZ, MulZbar };

// Product of primitives in written order; the rightmost acts first.
using Word = std::vector<Primitive>;

// Row-major 2x2 spin matrix {m00, m01, m10, m11}.
template <class S>
struct Mat2 {
  std::array<S, 4> m{};

  S& operator()(int r, int c) { return m[2 * r + c]; }
  const S& operator()(int r, int c) const { return m[2 * r + c]; }

  static Mat2 identity() { return {{S(1L), S{}, S{}, S(1L)}}; }
  static Mat2 zero() { return {}; }
  // E12 routes the lower component into the upper slot, E21 the reverse.
  static Mat2 upper_right() { return {{S{}, S(1L), S{}, S{}}}; }
  static Mat2 lower_left() { return {{S{}, S{}, S(1L), S{}}}; }
  static Mat2 sigma_x() { return {{S{}, S(1L), S(1L), S{}}}; }
  static Mat2 sigma_y() {
    const S i = ScalarTraits<S>::i();
    return {{S{}, -i, i, S{}}};
  }
  static Mat2 sigma_z() { return {{S(1L), S{}, S{}, S(-1L)}}; }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
  }
  friend Mat2 operator*(const S& s, Mat2 a) {
    for (auto& x : a.m) x = s * x;
    return a;
  }
  friend Mat2 operator+(Mat2 a, const Mat2& b) {
    for (int k = 0; k < 4; ++k) a.m[k] += b.m[k];
    return a;
  }
  friend Mat2 operator-(Mat2 a, const Mat2& b) {
    for (int k = 0; k < 4; ++k) a.m[k] -= b.m[k];
    return a;
  }
  friend bool operator==(const Mat2& a, const Mat2& b) { return a.m == b.m; }

  Mat2 conj() const {
    Mat2 r;
    for (int k = 0; k < 4; ++k) r.m[k] = ScalarTraits<S>::conj(m[k]);
    return r;
  }
  Mat2 dagger() const {
    Mat2 r = conj();
    std::swap(r.m[1], r.m[2]);
    return r;
  }
  Mat2 inverse() const {
    const S det = m[0] * m[3] - m[1] * m[2];
    if (ScalarTraits<S>::is_zero(det)) throw std::domain_error("singular spin matrix");
    return {{m[3] / det, -m[1] / det, -m[2] / det, m[0] / det}};
  }
  bool is_zero() const {
    for (const auto& x : m)
      if (!ScalarTraits<S>::is_zero(x)) return false;
    return true;
  }
  double max_abs() const {
    double out = 0.0;
    for (const auto& x : m) out = std::max(out, ScalarTraits<S>::magnitude(x));
    return out;
  }
};

template <class S>
struct OperatorTerm {
  Mat2<S> spin;
  Word word;
};

// Finite sum of (spin matrix) x (primitive word). Scalars live in the spin
// matrix, so a scalar-function operator is one whose matrices are c * I.
template <class S>
class OperatorExpr {
 public:
  OperatorExpr() = default;

  static OperatorExpr scalar(const S& c) { return term(c * Mat2<S>::identity(), {}); }
  static OperatorExpr primitive(Primitive p) { return term(Mat2<S>::identity(), {p}); }
  static OperatorExpr spin(const Mat2<S>& m) { return term(m, {}); }
  static OperatorExpr term(const Mat2<S>& m, Word w) {
    OperatorExpr e;
    e.terms_.push_back({m, std::move(w)});
    return e;
  }
  // Pi_z = -i hbar d/dz and Pi_zbar = -i hbar d/dzbar.
  static OperatorExpr momentum_z(const S& hbar) {
    return scalar(-ScalarTraits<S>::i() * hbar) * primitive(Primitive::DZ);
  }
  static OperatorExpr momentum_zbar(const S& hbar) {
    return scalar(-ScalarTraits<S>::i() * hbar) * primitive(Primitive::DZbar);
  }
  static OperatorExpr mul_z() { return primitive(Primitive::MulZ); }
  static OperatorExpr mul_zbar() { return primitive(Primitive::MulZbar); }

  const std::vector<OperatorTerm<S>>& terms() const { return terms_; }

  OperatorExpr& operator+=(const OperatorExpr& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
  friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) {
    return a += S(-1L) * b;
  }
  friend OperatorExpr operator*(const S& s, OperatorExpr a) {
    for (auto& t : a.terms_) t.spin = s * t.spin;
    return a;
  }
  // Left-multiplies every term by a spin matrix (block embedding).
  friend OperatorExpr operator*(const Mat2<S>& m, OperatorExpr a) {
    for (auto& t : a.terms_) t.spin = m * t.spin;
    return a;
  }
  // Composition: (a * b)(f) = a(b(f)).
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
    OperatorExpr out;
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        Word w = ta.word;
        w.insert(w.end(), tb.word.begin(), tb.word.end());
        out.terms_.push_back({ta.spin * tb.spin, std::move(w)});
      }
    }
    return out;
  }

 private:
  std::vector<OperatorTerm<S>> terms_;
};

// d/dz (z^m zbar^n e^{d z zbar}) = (m z^{m-1} zbar^n + d z^m zbar^{n+1}) e^{d z zbar}.
template <class S>
WeightedPolynomial<S> apply_primitive(Primitive p, const WeightedPolynomial<S>& f) {
  WeightedPolynomial<S> out(f.envelope());
  const S& d = f.envelope();
  for (const auto& [mono, c] : f.terms()) {
    const int m = mono.z_pow;
    const int n = mono.zbar_pow;
    switch (p) {
      case Primitive::MulZ: out.add_term({m + 1, n}, c); break;
      case Primitive::MulZbar: out.add_term({m, n + 1}, c); break;
      case Primitive::DZ:
        if (m > 0) out.add_term({m - 1, n}, ScalarTraits<S>::from_int(m) * c);
        out.add_term({m, n + 1}, d * c);
        break;
      case Primitive::DZbar:
        if (n > 0) out.add_term({m, n - 1}, ScalarTraits<S>::from_int(n) * c);
        out.add_term({m + 1, n}, d * c);
        break;
    }
  }
  return out;
}

template <class S>
WeightedPolynomial<S> apply_word(const Word& w, WeightedPolynomial<S> f) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) f = apply_primitive(*it, f);
  return f;
}

template <class S>
SpinorFunction<S> act(const OperatorExpr<S>& expr, const SpinorFunction<S>& s) {
  auto out = SpinorFunction<S>::zero(s.envelope());
  for (const auto& t : expr.terms()) {
    if (t.spin.is_zero()) continue;
    const auto up = apply_word(t.word, s.upper);
    const auto low = apply_word(t.word, s.lower);
    out.upper += t.spin(0, 0) * up;
    out.upper += t.spin(0, 1) * low;
    out.lower += t.spin(1, 0) * up;
    out.lower += t.spin(1, 1) * low;
  }
  return out;
}

// Applies an operator whose spin factors are all multiples of the identity to
// a single scalar function.
template <class S>
WeightedPolynomial<S> apply_scalar(const OperatorExpr<S>& expr, const WeightedPolynomial<S>& f) {
  using T = ScalarTraits<S>;
  WeightedPolynomial<S> out(f.envelope());
  for (const auto& t : expr.terms()) {
    if (!T::is_zero(t.spin(0, 1)) || !T::is_zero(t.spin(1, 0)) ||
        !(t.spin(0, 0) == t.spin(1, 1))) {
      throw std::invalid_argument("operator is not scalar in spin space");
    }
    if (T::is_zero(t.spin(0, 0))) continue;
    out += t.spin(0, 0) * apply_word(t.word, f);
  }
  return out;
}

// Normal-ordered key z^a zbar^b (d/dz)^c (d/dzbar)^e.
struct NormalKey {
  int z = 0;
  int zbar = 0;
  int dz = 0;
  int dzbar = 0;
  friend auto operator<=>(const NormalKey&, const NormalKey&) = default;
};

template <class S>
using NormalForm = std::map<NormalKey, Mat2<S>>;

namespace detail {

template <class S>
void accumulate(NormalForm<S>& nf, const NormalKey& k, const Mat2<S>& m) {
  auto [it, inserted] = nf.try_emplace(k, m);
  if (!inserted) it->second = it->second + m;
}

// Right-multiplies a normal-ordered sum by one primitive, using
// d^c z = z d^c + c d^{c-1}.
template <class S>
NormalForm<S> times_primitive(const NormalForm<S>& in, Primitive p) {
  NormalForm<S> out;
  for (const auto& [k, m] : in) {
    NormalKey next = k;
    switch (p) {
      case Primitive::DZ: ++next.dz; accumulate(out, next, m); break;
      case Primitive::DZbar: ++next.dzbar; accumulate(out, next, m); break;
      case Primitive::MulZ:
        ++next.z;
        accumulate(out, next, m);
        if (k.dz > 0) {
          NormalKey lower = k;
          --lower.dz;
          accumulate(out, lower, ScalarTraits<S>::from_int(k.dz) * m);
        }
        break;
      case Primitive::MulZbar:
        ++next.zbar;
        accumulate(out, next, m);
        if (k.dzbar > 0) {
          NormalKey lower = k;
          --lower.dzbar;
          accumulate(out, lower, ScalarTraits<S>::from_int(k.dzbar) * m);
        }
        break;
    }
  }
  return out;
}

}  // namespace detail

template <class S>
NormalForm<S> normal_form(const OperatorExpr<S>& expr) {
  NormalForm<S> total;
  for (const auto& t : expr.terms()) {
    NormalForm<S> nf;
    nf.emplace(NormalKey{}, t.spin);
    for (Primitive p : t.word) nf = detail::times_primitive(nf, p);
    for (const auto& [k, m] : nf) detail::accumulate(total, k, m);
  }
  std::erase_if(total, [](const auto& kv) { return kv.second.is_zero(); });
  return total;
}

// Largest coefficient magnitude of the normal form of a - b; exactly 0 when
// the two operators coincide in an exact field.
template <class S>
double operator_distance(const OperatorExpr<S>& a, const OperatorExpr<S>& b) {
  double out = 0.0;
  for (const auto& [k, m] : normal_form(a - b)) out = std::max(out, m.max_abs());
  return out;
}

// Adjoint under the flat measure: (d/dz)^+ = -d/dzbar, (z)^+ = zbar, spin
// factor daggered, word reversed.
template <class S>
OperatorExpr<S> formal_adjoint(const OperatorExpr<S>& expr) {
  OperatorExpr<S> out;
  for (const auto& t : expr.terms()) {
    Word w;
    w.reserve(t.word.size());
    long sign = 1;
    for (auto it = t.word.rbegin(); it != t.word.rend(); ++it) {
      switch (*it) {
        case Primitive::DZ: w.push_back(Primitive::DZbar); sign = -sign; break;
        case Primitive::DZbar: w.push_back(Primitive::DZ); sign = -sign; break;
        case Primitive::MulZ: w.push_back(Primitive::MulZbar); break;
        case Primitive::MulZbar: w.push_back(Primitive::MulZ); break;
      }
    }
    out += OperatorExpr<S>::term(S(sign) * t.spin.dagger(), std::move(w));
  }
  return out;
}

}  // namespace ptdirac
