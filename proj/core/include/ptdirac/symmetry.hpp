#pragma once

#include <string_view>

#include "ptdirac/operator_expr.hpp"

namespace ptdirac {

// psi -> spin * Map(psi), where Map optionally conjugates coefficients
// (antilinear), optionally exchanges z <-> zbar, and multiplies the monomial
// z^m zbar^n by parity_sign^(m+n). Covers P1, P2, T and their products.
template <class S>
struct SymmetryOp {
  Mat2<S> spin = Mat2<S>::identity();
  bool swap = false;
  int parity_sign = 1;
  bool antilinear = false;

  // P1: psi(x, y) -> sigma_y psi(-x, y); z -> -zbar.
  static SymmetryOp parity_x() { return {Mat2<S>::sigma_y(), true, -1, false}; }
  // P2: psi(x, y) -> sigma_x psi(x, -y); z -> zbar.
  static SymmetryOp parity_y() { return {Mat2<S>::sigma_x(), true, 1, false}; }
  // T = i sigma_y K.
  static SymmetryOp time_reversal() {
    return {ScalarTraits<S>::i() * Mat2<S>::sigma_y(), true, 1, true};
  }
  static SymmetryOp p1t() { return compose(parity_x(), time_reversal()); }
  static SymmetryOp p2t() { return compose(parity_y(), time_reversal()); }

  // (x o y)(psi) = x(y(psi)).
  static SymmetryOp compose(const SymmetryOp& x, const SymmetryOp& y) {
    return {x.spin * (x.antilinear ? y.spin.conj() : y.spin), x.swap != y.swap,
            x.parity_sign * y.parity_sign, x.antilinear != y.antilinear};
  }

  SymmetryOp inverse() const {
    const Mat2<S> inv = spin.inverse();
    return {antilinear ? inv.conj() : inv, swap, parity_sign, antilinear};
  }

  S map_scalar(const S& c) const { return antilinear ? ScalarTraits<S>::conj(c) : c; }

  WeightedPolynomial<S> map_function(const WeightedPolynomial<S>& f) const {
    WeightedPolynomial<S> out(map_scalar(f.envelope()));
    for (const auto& [mono, c] : f.terms()) {
      const Monomial target = swap ? Monomial{mono.zbar_pow, mono.z_pow} : mono;
      const bool flip = parity_sign < 0 && (mono.degree() % 2 != 0);
      const S mapped = map_scalar(c);
      out.add_term(target, flip ? -mapped : mapped);
    }
    return out;
  }

  Primitive map_primitive(Primitive p) const {
    if (!swap) return p;
    switch (p) {
      case Primitive::DZ: return Primitive::DZbar;
      case Primitive::DZbar: return Primitive::DZ;
      case Primitive::MulZ: return Primitive::MulZbar;
      case Primitive::MulZbar: return Primitive::MulZ;
    }
    return p;
  }
};

// Energy metadata maps E -> E* under antilinear operators.
template <class S>
SpinorFunction<S> act(const SymmetryOp<S>& op, const SpinorFunction<S>& s) {
  const auto up = op.map_function(s.upper);
  const auto low = op.map_function(s.lower);
  SpinorFunction<S> out(op.spin(0, 0) * up + op.spin(0, 1) * low,
                        op.spin(1, 0) * up + op.spin(1, 1) * low);
  if (s.energy) out.energy = op.map_scalar(*s.energy);
  return out;
}

// op * expr * op^-1 as an operator expression.
template <class S>
OperatorExpr<S> conjugate(const SymmetryOp<S>& op, const OperatorExpr<S>& expr) {
  const Mat2<S> inv = op.spin.inverse();
  OperatorExpr<S> out;
  for (const auto& t : expr.terms()) {
    Word w;
    w.reserve(t.word.size());
    long sign = 1;
    for (Primitive p : t.word) {
      w.push_back(op.map_primitive(p));
      if (op.parity_sign < 0) sign = -sign;
    }
    const Mat2<S> spin = op.spin * (op.antilinear ? t.spin.conj() : t.spin) * inv;
    out += OperatorExpr<S>::term(S(sign) * spin, std::move(w));
  }
  return out;
}

enum class PtKind { P1T, P2T, T };

std::string_view to_string(PtKind k);
PtKind parse_pt_kind(std::string_view s);

template <class S>
SymmetryOp<S> make_symmetry(PtKind k) {
  switch (k) {
    case PtKind::P1T: return SymmetryOp<S>::p1t();
    case PtKind::P2T: return SymmetryOp<S>::p2t();
    case PtKind::T: return SymmetryOp<S>::time_reversal();
  }
  return SymmetryOp<S>::time_reversal();
}

template <class S>
SpinorFunction<S> pt_transform(PtKind k, const SpinorFunction<S>& s) {
  return act(make_symmetry<S>(k), s);
}

}  // namespace ptdirac
