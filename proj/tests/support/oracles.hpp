#pragma once

// Independent reference computations. Nothing here goes through the operator
// algebra: functions are sampled at points, derivatives taken by finite
// differences, determinants expanded by cofactors, and coefficients evaluated
// from the expanded textbook formulas.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ptdirac/weighted_polynomial.hpp"

namespace ptdirac::oracle {

using C = std::complex<double>;
using Field = std::function<std::array<C, 2>(double, double)>;

inline C eval(const Polynomial& p, double x, double y) {
  const C z(x, y), zb(x, -y);
  C sum = 0.0;
  for (const auto& [m, c] : p.terms()) sum += c * std::pow(z, m.z_pow) * std::pow(zb, m.zbar_pow);
  return sum * std::exp(p.envelope() * (x * x + y * y));
}

inline std::array<C, 2> eval(const Spinor& s, double x, double y) {
  return {eval(s.upper, x, y), eval(s.lower, x, y)};
}

inline Field field(const Spinor& s) {
  return [s](double x, double y) { return eval(s, x, y); };
}

// Wirtinger derivatives by fourth-order central differences.
inline std::array<C, 2> d_dx(const Field& f, double x, double y, double h = 1e-3) {
  std::array<C, 2> out{};
  const auto a = f(x - 2 * h, y), b = f(x - h, y), c = f(x + h, y), d = f(x + 2 * h, y);
  for (int k = 0; k < 2; ++k) out[k] = (a[k] - 8.0 * b[k] + 8.0 * c[k] - d[k]) / (12.0 * h);
  return out;
}
inline std::array<C, 2> d_dy(const Field& f, double x, double y, double h = 1e-3) {
  std::array<C, 2> out{};
  const auto a = f(x, y - 2 * h), b = f(x, y - h), c = f(x, y + h), d = f(x, y + 2 * h);
  for (int k = 0; k < 2; ++k) out[k] = (a[k] - 8.0 * b[k] + 8.0 * c[k] - d[k]) / (12.0 * h);
  return out;
}

struct Blocks {
  double a, b, c1, c2, hbar;
};

// H psi at a point for the primary valley, written from the block form with
// Pi_z = -i hbar (d/dx - i d/dy)/2 and Pi_zbar = -i hbar (d/dx + i d/dy)/2.
// The time-reversed valley exchanges (a, c1) with (b, c2).
inline std::array<C, 2> apply_h(const Blocks& k, bool time_reversed, const Field& f, double x,
                                double y) {
  const C i(0, 1);
  const auto fx = d_dx(f, x, y), fy = d_dy(f, x, y);
  const auto v = f(x, y);
  const C z(x, y), zb(x, -y);
  auto pi_z = [&](int s) { return -i * k.hbar * 0.5 * (fx[s] - i * fy[s]); };
  auto pi_zb = [&](int s) { return -i * k.hbar * 0.5 * (fx[s] + i * fy[s]); };
  const double a = time_reversed ? k.b : k.a, b = time_reversed ? k.a : k.b;
  const double c1 = time_reversed ? k.c2 : k.c1, c2 = time_reversed ? k.c1 : k.c2;
  return {a * pi_z(1) + i * c1 * zb * v[1], b * pi_zb(0) + i * c2 * z * v[0]};
}

// Pointwise parity-time maps from their defining actions:
//   T   psi(x,y) = i sigma_y conj(psi(x,y))
//   P1T psi(x,y) = sigma_y i sigma_y conj(psi(-x,y))
//   P2T psi(x,y) = sigma_x i sigma_y conj(psi(x,-y))
enum class Map { T, P1T, P2T };
inline std::array<C, 2> apply_map(Map m, const Field& f, double x, double y) {
  const double sx = m == Map::P1T ? -x : x;
  const double sy = m == Map::P2T ? -y : y;
  const auto v = f(sx, sy);
  const C u = std::conj(v[0]), l = std::conj(v[1]);
  // i sigma_y = [[0, 1], [-1, 0]]
  const C tu = l, tl = -u;
  const C i(0, 1);
  switch (m) {
    case Map::T: return {tu, tl};
    case Map::P1T: return {-i * tl, i * tu};  // sigma_y = [[0,-i],[i,0]]
    case Map::P2T: return {tl, tu};           // sigma_x
  }
  return {};
}

// Determinant by cofactor expansion along the first row.
inline C det(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return m(0, 0);
  C sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (m(0, j) == C(0.0)) continue;
    Eigen::MatrixXcd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    sum += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * det(minor);
  }
  return sum;
}

// Coefficients from the expanded definitions in long double.
struct Coeffs {
  long double a, b, c1, c2, k;
};
inline Coeffs coeffs(long double v, long double lam, long double k1, long double b0, long double e,
                     long double c, long double hbar) {
  Coeffs o;
  o.a = 2 * v - 2 * lam;
  o.b = 2 * v + 2 * lam;
  o.c1 = k1 * v - v * b0 * e / (2 * c) + lam * b0 * e / (2 * c);
  o.c2 = -k1 * v + v * b0 * e / (2 * c) + lam * b0 * e / (2 * c);
  o.k = hbar * (2 * (v * v - lam * lam) * b0 * e / c - 4 * k1 * v * v);
  return o;
}

}  // namespace ptdirac::oracle
