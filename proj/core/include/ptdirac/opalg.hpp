#pragma once

#include <optional>
#include <vector>

#include "ptdirac/operator_expr.hpp"
#include "ptdirac/params.hpp"
#include "ptdirac/symmetry.hpp"

namespace ptdirac {

// A, B, C1, C2, K and hbar carried in the scalar field of the algebra.
template <class S>
struct CoeffSet {
  S a;
  S b;
  S c1;
  S c2;
  S k;
  S hbar;

  bool has_d1(Branch br) const {
    return !ScalarTraits<S>::is_zero(br == Branch::I ? a : b);
  }
  // Branch I: C1 / (A hbar). Branch II: C2 / (B hbar).
  S d1(Branch br) const {
    if (!has_d1(br)) {
      throw DegenerateCoefficients(br == Branch::I ? "degenerate A=0: d1 = C1/(A hbar) undefined"
                                                   : "degenerate B=0: d1 = C2/(B hbar) undefined");
    }
    return br == Branch::I ? c1 / (a * hbar) : c2 / (b * hbar);
  }
  // A <-> B, C1 <-> C2 relabeling that maps H onto the other valley; K -> -K.
  CoeffSet swapped() const { return {b, a, c2, c1, -k, hbar}; }
};

inline CoeffSet<Complex> complex_coeffs(const DerivedCoeffs& d) {
  return {d.a_coef, d.b_coef, d.c1, d.c2, d.k_coef, d.hbar};
}
inline CoeffSet<Complex> complex_coeffs(const PhysParams& p) {
  return complex_coeffs(derive_coeffs(p));
}

struct RationalParams {
  Rational v_f;
  Rational lambda;
  Rational k1;
  Rational b0;
  Rational e = 1;
  Rational c = 137;
  Rational hbar = 1;
};

CoeffSet<ExactScalar> exact_coeffs(const RationalParams& p);

// Off-diagonal blocks of the compact Hamiltonian.
//   primary:        (A Pi_z + i C1 zbar,  B Pi_zbar + i C2 z)
//   time-reversed:  (B Pi_z + i C2 zbar,  A Pi_zbar + i C1 z)
template <class S>
OperatorExpr<S> upper_block(const CoeffSet<S>& c, Valley v) {
  using Op = OperatorExpr<S>;
  const S i = ScalarTraits<S>::i();
  const S& lead = v == Valley::Primary ? c.a : c.b;
  const S& shift = v == Valley::Primary ? c.c1 : c.c2;
  return lead * Op::momentum_z(c.hbar) + (i * shift) * Op::mul_zbar();
}

template <class S>
OperatorExpr<S> lower_block(const CoeffSet<S>& c, Valley v) {
  using Op = OperatorExpr<S>;
  const S i = ScalarTraits<S>::i();
  const S& lead = v == Valley::Primary ? c.b : c.a;
  const S& shift = v == Valley::Primary ? c.c2 : c.c1;
  return lead * Op::momentum_zbar(c.hbar) + (i * shift) * Op::mul_z();
}

template <class S>
OperatorExpr<S> build_hamiltonian(const CoeffSet<S>& c, Valley v) {
  return Mat2<S>::upper_right() * upper_block(c, v) + Mat2<S>::lower_left() * lower_block(c, v);
}

// Positive energy of the (branch, valley) family at level n:
// sqrt((n+1) K) for branch I and sqrt(-(n+1) K) for branch II in both valleys.
template <class S>
S analytic_energy(const CoeffSet<S>& c, Branch br, int n) {
  const S radicand = ScalarTraits<S>::from_int(n + 1) * c.k;
  return ScalarTraits<S>::sqrt_real(br == Branch::I ? radicand : -radicand);
}

// Exact eigenstate of level n. The upper component is a_n times the branch
// monomial; the lower weight is fixed by the first-order equations
// (for primary branch I it is i a_n E / (A hbar (n+1))). Where that weight
// would divide by E = 0 the coalesced zero-energy state (0, i a_n mono) is
// returned instead.
//   primary I:        (z^n,        z^{n+1})    e^{C1/(A hbar) z zbar}
//   primary II:       (zbar^{n+1}, zbar^n)     e^{C2/(B hbar) z zbar}
//   time-reversed I:  (zbar^{n+1}, zbar^n)     e^{C1/(A hbar) z zbar}
//   time-reversed II: (z^n,        z^{n+1})    e^{C2/(B hbar) z zbar}
template <class S>
SpinorFunction<S> analytic_state(Branch br, Valley v, int n, const CoeffSet<S>& c,
                                 const S& a_n = S(1L)) {
  using T = ScalarTraits<S>;
  if (n < 0) throw std::invalid_argument("level index must be non-negative");
  const S d = c.d1(br);
  const S energy = analytic_energy(c, br, n);
  const S i = T::i();
  const S n1 = T::from_int(n + 1);
  // Pattern A: (z^n, z^{n+1}); pattern B: (zbar^{n+1}, zbar^n).
  const bool holomorphic = (br == Branch::I) == (v == Valley::Primary);
  const Monomial up = holomorphic ? Monomial{n, 0} : Monomial{0, n + 1};
  const Monomial low = holomorphic ? Monomial{n + 1, 0} : Monomial{0, n};
  // The block that lowers the degree carries lead * hbar * (n+1).
  const S& lead = (br == Branch::I) ? c.a : c.b;
  const S lowering = lead * c.hbar * n1;

  WeightedPolynomial<S> upper(d), lower(d);
  if (holomorphic) {
    // Upper row: lowering * w_low = E; lower weight w_low = E / lowering.
    upper.add_term(up, a_n);
    lower.add_term(low, i * a_n * (energy / lowering));
  } else {
    // Lower row: -lowering * u = i E w; w = -lowering / E.
    if (T::is_zero(energy)) {
      lower.add_term(low, i * a_n);
    } else {
      upper.add_term(up, a_n);
      lower.add_term(low, i * a_n * (-lowering / energy));
    }
  }
  return SpinorFunction<S>(std::move(upper), std::move(lower), energy);
}

// max |coefficient| of H s - E s.
template <class S>
double eigen_residual(const OperatorExpr<S>& h, const SpinorFunction<S>& s, const S& energy) {
  return (act(h, s) - energy * s).max_abs();
}

template <class S>
double eigen_residual(const OperatorExpr<S>& h, const SpinorFunction<S>& s) {
  if (!s.energy) throw std::invalid_argument("spinor carries no energy");
  return eigen_residual(h, s, *s.energy);
}

// Returns c with pt(s) = c s, or nothing when s is not an eigenstate. The
// comparison is exact for exact scalars and relative (rel_tol * |s|) otherwise.
template <class S>
std::optional<S> pt_eigenfactor(PtKind kind, const SpinorFunction<S>& s, double rel_tol = 1e-10) {
  using T = ScalarTraits<S>;
  if (s.is_zero()) throw std::invalid_argument("pt_eigenfactor of the zero spinor");
  const auto image = pt_transform(kind, s);
  // Reference coefficient: largest magnitude entry of s.
  const WeightedPolynomial<S>* ref_poly = nullptr;
  Monomial ref{};
  double best = -1.0;
  for (const auto* poly : {&s.upper, &s.lower}) {
    for (const auto& [m, c] : poly->terms()) {
      if (T::magnitude(c) > best) {
        best = T::magnitude(c);
        ref_poly = poly;
        ref = m;
      }
    }
  }
  const auto& image_poly = ref_poly == &s.upper ? image.upper : image.lower;
  const S factor = image_poly.coefficient(ref) / ref_poly->coefficient(ref);
  const auto diff = SpinorFunction<S>(image.upper, image.lower) - factor * s;
  if constexpr (T::exact) {
    if (!diff.is_zero()) return std::nullopt;
  } else {
    if (diff.max_abs() > rel_tol * s.max_abs()) return std::nullopt;
  }
  return factor;
}

// max over probes of |PT(H p) - H(PT p)|.
template <class S>
double pt_commutator_residual(const OperatorExpr<S>& h, PtKind kind,
                              const std::vector<SpinorFunction<S>>& probes) {
  if (probes.empty()) throw std::invalid_argument("at least one probe required");
  const auto op = make_symmetry<S>(kind);
  double out = 0.0;
  for (const auto& p : probes) {
    const auto lhs = act(op, act(h, p));
    const auto rhs = act(h, act(op, p));
    out = std::max(out, (SpinorFunction<S>(lhs.upper, lhs.lower) - rhs).max_abs());
  }
  return out;
}

template <class S>
OperatorExpr<S> time_reversal_conjugate(const OperatorExpr<S>& h) {
  return conjugate(SymmetryOp<S>::time_reversal(), h);
}

// max over probes of |T(H(T^-1 p)) - H~ p|, evaluated on functions.
template <class S>
double valley_relation_residual(const OperatorExpr<S>& h, const OperatorExpr<S>& h_tilde,
                                const std::vector<SpinorFunction<S>>& probes) {
  const auto t = SymmetryOp<S>::time_reversal();
  const auto t_inv = t.inverse();
  double out = 0.0;
  for (const auto& p : probes) {
    const auto lhs = act(t, act(h, act(t_inv, p)));
    const auto rhs = act(h_tilde, p);
    out = std::max(out, (SpinorFunction<S>(lhs.upper, lhs.lower) - rhs).max_abs());
  }
  return out;
}

// Lowest-Landau-level state zbar^l exp(d z zbar), annihilated by the upper
// block of the valley's Hamiltonian.
template <class S>
WeightedPolynomial<S> lll_state(int l, const CoeffSet<S>& c, Valley v) {
  if (l < 0) throw std::invalid_argument("LLL label must be non-negative");
  const S d = c.d1(v == Valley::Primary ? Branch::I : Branch::II);
  return WeightedPolynomial<S>::monomial(0, l, S(1L), d);
}

// Q1 = (A Pi_z + i C1 zbar) / sqrt(K) and Q2^+ = (B Pi_zbar + i C2 z) / sqrt(K).
template <class S>
S sqrt_k(const CoeffSet<S>& c) {
  if (ScalarTraits<S>::is_zero(c.k)) throw std::domain_error("K = 0: sqrt(K) normalization undefined");
  return ScalarTraits<S>::sqrt_real(c.k);
}

template <class S>
OperatorExpr<S> lowering_q1(const CoeffSet<S>& c) {
  return (S(1L) / sqrt_k(c)) * upper_block(c, Valley::Primary);
}

template <class S>
OperatorExpr<S> raising_q2_dagger(const CoeffSet<S>& c) {
  return (S(1L) / sqrt_k(c)) * lower_block(c, Valley::Primary);
}

template <class S>
WeightedPolynomial<S> ladder_raise(const WeightedPolynomial<S>& f, int k, const CoeffSet<S>& c) {
  if (k < 1) throw std::invalid_argument("raise count must be at least 1");
  const auto q2 = raising_q2_dagger(c);
  WeightedPolynomial<S> out = f;
  for (int step = 0; step < k; ++step) out = apply_scalar(q2, out);
  return out;
}

// Monomials z^m zbar^n with m + n <= max_degree.
template <class S>
std::vector<WeightedPolynomial<S>> monomial_probes(int max_degree, const S& envelope) {
  std::vector<WeightedPolynomial<S>> out;
  for (int deg = 0; deg <= max_degree; ++deg)
    for (int m = 0; m <= deg; ++m)
      out.push_back(WeightedPolynomial<S>::monomial(m, deg - m, S(1L), envelope));
  return out;
}

// Each monomial probe placed in the upper and in the lower slot.
template <class S>
std::vector<SpinorFunction<S>> monomial_spinor_probes(int max_degree, const S& envelope) {
  std::vector<SpinorFunction<S>> out;
  for (const auto& f : monomial_probes(max_degree, envelope)) {
    out.emplace_back(f, WeightedPolynomial<S>(envelope));
    out.emplace_back(WeightedPolynomial<S>(envelope), f);
  }
  return out;
}

struct JcReport {
  double commutator_residual = 0.0;
  double factorization_residual = 0.0;
};

// sigma_+ Q1 + sigma_- Q2^+ with sigma_+ = E12 and sigma_- = E21, i.e.
// sigma_{+-} = (sigma_x +- i sigma_y) / 2; with the 1/sqrt(2) normalization
// the right-hand side would exceed H by sqrt(2).
template <class S>
OperatorExpr<S> jc_form(const CoeffSet<S>& c) {
  return sqrt_k(c) *
         (Mat2<S>::upper_right() * lowering_q1(c) + Mat2<S>::lower_left() * raising_q2_dagger(c));
}

// Residuals are relative to max(1, largest intermediate coefficient).
template <class S>
JcReport jc_verify(const CoeffSet<S>& c, int degree) {
  if (degree < 2) throw std::invalid_argument("probe degree must be at least 2");
  const auto q1 = lowering_q1(c);
  const auto q2 = raising_q2_dagger(c);
  const S envelope = c.has_d1(Branch::I) ? c.d1(Branch::I) : S{};
  JcReport report;
  for (const auto& f : monomial_probes(degree, envelope)) {
    const auto ab = apply_scalar(q1, apply_scalar(q2, f));
    const auto ba = apply_scalar(q2, apply_scalar(q1, f));
    const double scale = std::max({1.0, ab.max_abs(), ba.max_abs()});
    report.commutator_residual =
        std::max(report.commutator_residual, (ab - ba - f).max_abs() / scale);
  }
  const auto h = build_hamiltonian(c, Valley::Primary);
  const auto jc = jc_form(c);
  for (const auto& p : monomial_spinor_probes(degree, envelope)) {
    const auto hp = act(h, p);
    const double scale = std::max(1.0, hp.max_abs());
    report.factorization_residual =
        std::max(report.factorization_residual, (hp - act(jc, p)).max_abs() / scale);
  }
  return report;
}

// Probe set for operator identities: every monomial spinor up to degree 6
// plus `random_count` seeded random-coefficient spinors of degree <= 6.
std::vector<Spinor> random_spinor_probes(int count, int max_degree, double envelope,
                                         unsigned long long seed);
std::vector<Spinor> standard_probes(double envelope, unsigned long long seed = 20240611,
                                    int random_count = 50);

}  // namespace ptdirac
