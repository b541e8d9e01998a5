#include "ptdirac/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>

#include "ptdirac/opalg.hpp"
#include "ptdirac/serialize.hpp"

namespace ptdirac {

namespace {

constexpr double kBuildTolerance = 1e-14;

Monomial basis_monomial(bool holomorphic, int j) {
  return holomorphic ? Monomial{j, 0} : Monomial{0, j};
}

// Index of the ladder monomial, or -1 when m is outside the ladder pattern.
int ladder_index(bool holomorphic, const Monomial& m) {
  if (holomorphic) return m.zbar_pow == 0 ? m.z_pow : -1;
  return m.z_pow == 0 ? m.zbar_pow : -1;
}

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

bool basis_is_holomorphic(Branch b, Valley v) {
  return (b == Branch::I) == (v == Valley::Primary);
}

ComplexMatrix closed_form_matrix(const DerivedCoeffs& c, int n_tr, Branch branch, Valley valley) {
  const int n = n_tr;
  ComplexMatrix m = ComplexMatrix::Zero(2 * n, 2 * n);
  const Complex i(0.0, 1.0);
  const double a = c.a_coef;
  const double b = c.b_coef;
  const double k = c.k_coef;
  const double h = c.hbar;
  if (valley == Valley::Primary && branch == Branch::I) {
    for (int j = 1; j < n; ++j) m(j - 1, n + j) = -i * a * h * double(j);
    for (int j = 0; j + 1 < n; ++j) m(n + j + 1, j) = i * k / (a * h);
  } else if (valley == Valley::Primary && branch == Branch::II) {
    for (int j = 0; j + 1 < n; ++j) m(j + 1, n + j) = -i * k / (b * h);
    for (int j = 1; j < n; ++j) m(n + j - 1, j) = -i * b * h * double(j);
  } else if (valley == Valley::TimeReversed && branch == Branch::I) {
    for (int j = 0; j + 1 < n; ++j) m(j + 1, n + j) = i * k / (a * h);
    for (int j = 1; j < n; ++j) m(n + j - 1, j) = -i * a * h * double(j);
  } else {
    for (int j = 1; j < n; ++j) m(j - 1, n + j) = -i * b * h * double(j);
    for (int j = 0; j + 1 < n; ++j) m(n + j + 1, j) = -i * k / (b * h);
  }
  return m;
}

TruncatedRep build_truncated(const DerivedCoeffs& coeffs, int n_tr, Branch branch,
                             Valley valley) {
  if (n_tr < 2) throw std::invalid_argument("truncation level must be at least 2");
  const auto d1 = coeffs.d1(branch);
  if (!d1) {
    throw DegenerateCoefficients(branch == Branch::I ? "degenerate A=0: branch I basis undefined"
                                                     : "degenerate B=0: branch II basis undefined");
  }
  const auto set = complex_coeffs(coeffs);
  const auto h = build_hamiltonian(set, valley);
  const bool holo = basis_is_holomorphic(branch, valley);

  TruncatedRep rep;
  rep.n_tr = n_tr;
  rep.branch = branch;
  rep.valley = valley;
  rep.coeffs = coeffs;
  rep.matrix = ComplexMatrix::Zero(2 * n_tr, 2 * n_tr);

  for (int col = 0; col < 2 * n_tr; ++col) {
    const int j = col % n_tr;
    const bool in_upper = col < n_tr;
    const auto f = Polynomial::monomial(basis_monomial(holo, j).z_pow,
                                        basis_monomial(holo, j).zbar_pow, 1.0, *d1);
    const Spinor basis = in_upper ? Spinor(f, Polynomial(*d1)) : Spinor(Polynomial(*d1), f);
    const Spinor image = act(h, basis);
    for (int slot = 0; slot < 2; ++slot) {
      const auto& poly = slot == 0 ? image.upper : image.lower;
      for (const auto& [mono, value] : poly.terms()) {
        const int idx = ladder_index(holo, mono);
        if (idx < 0) {
          rep.leakage = std::max(rep.leakage, std::abs(value));
        } else if (idx >= n_tr) {
          rep.dropped_entry = std::max(rep.dropped_entry, std::abs(value));
        } else {
          rep.matrix(slot * n_tr + idx, col) = value;
        }
      }
    }
  }

  rep.scale = max_abs_entry(rep.matrix);
  const double tol = kBuildTolerance * std::max(1.0, rep.scale);
  rep.closed_form_mismatch =
      max_abs_entry(rep.matrix - closed_form_matrix(coeffs, n_tr, branch, valley));
  if (rep.closed_form_mismatch > tol || rep.leakage > tol) {
    throw std::logic_error("truncated matrix disagrees with closed-form ladder entries");
  }
  return rep;
}

TruncatedRep scramble(const TruncatedRep& rep, unsigned long long seed) {
  const Eigen::Index n = rep.matrix.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 10; ++attempt) {
    ComplexMatrix g(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
    const Eigen::BDCSVD<ComplexMatrix> g_svd(g);
    const double g_norm = g_svd.singularValues()(0);
    const ComplexMatrix s = ComplexMatrix::Identity(n, n) + (0.5 / g_norm) * g;
    const Eigen::BDCSVD<ComplexMatrix> s_svd(s);
    const auto& sv = s_svd.singularValues();
    const double cond = sv(0) / sv(n - 1);
    if (!(cond <= 100.0)) continue;
    TruncatedRep out = rep;
    out.matrix = s.partialPivLu().solve(rep.matrix * s);
    out.scrambled = true;
    return out;
  }
  throw std::runtime_error("could not draw a well-conditioned similarity transform");
}

EigenResult eigensolve(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigensolve needs a square matrix");
  if (m.rows() > 2000) throw std::invalid_argument("dense eigensolve limited to dimension 2000");
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  EigenResult out;
  if (m.rows() == 0) return out;

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
  const auto& values = solver.eigenvalues();
  if (solver.info() != Eigen::Success) {
    for (Eigen::Index k = 0; k < values.size(); ++k) out.values.push_back(values(k));
    throw EigensolveError("complex Schur iteration did not converge", out);
  }
  const double norm = std::max(m.norm(), std::numeric_limits<double>::min());
  std::vector<std::pair<Complex, double>> rows;
  rows.reserve(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    Eigen::VectorXcd v = solver.eigenvectors().col(k);
    v /= v.norm();
    const double cert = (m * v - values(k) * v).norm() / norm;
    rows.emplace_back(values(k), cert);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    if (x.first.real() != y.first.real()) return x.first.real() < y.first.real();
    return x.first.imag() < y.first.imag();
  });
  for (const auto& [v, c] : rows) {
    out.values.push_back(v);
    out.certificates.push_back(c);
  }
  const double worst = *std::max_element(out.certificates.begin(), out.certificates.end());
  if (worst > tol) {
    throw EigensolveError("eigenvalue certificate exceeds tolerance", out);
  }
  return out;
}

SpectrumReport classify_spectrum(std::span<const Complex> eigs, double tol, double scale,
                                 int discard_edge) {
  if (eigs.empty()) throw std::invalid_argument("empty eigenvalue list");
  if (discard_edge < 0 || discard_edge >= static_cast<int>(eigs.size())) {
    throw std::invalid_argument("edge discard count out of range");
  }
  SpectrumReport r;
  std::vector<Complex> sorted(eigs.begin(), eigs.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  r.discarded.assign(sorted.begin(), sorted.begin() + discard_edge);
  r.discarded_edge_levels = discard_edge;
  std::vector<Complex> kept(sorted.begin() + discard_edge, sorted.end());

  if (scale <= 0.0) {
    for (const auto& e : eigs) scale = std::max(scale, std::abs(e));
    if (scale == 0.0) scale = 1.0;
  }
  r.scale = scale;
  const double band = tol * scale;

  // Greedy +-E matching in order of increasing modulus.
  std::vector<bool> used(kept.size(), false);
  for (std::size_t a = 0; a < kept.size(); ++a) {
    if (used[a]) continue;
    std::size_t best = kept.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      if (used[b]) continue;
      const double dist = std::abs(kept[a] + kept[b]);
      if (dist < best_dist) {
        best_dist = dist;
        best = b;
      }
    }
    if (best < kept.size() && best_dist <= band) {
      used[a] = used[best] = true;
      Complex plus = kept[a];
      Complex minus = kept[best];
      const bool swap_order = std::abs(plus.real()) > band ? plus.real() < 0.0 : plus.imag() < 0.0;
      if (swap_order) std::swap(plus, minus);
      r.pairs.emplace_back(plus, minus);
      r.pairing_residual = std::max(r.pairing_residual, best_dist);
    }
  }
  for (std::size_t a = 0; a < kept.size(); ++a)
    if (!used[a]) r.unpaired.push_back(kept[a]);

  bool near_zero = false;
  bool complex_found = false;
  for (const auto& e : kept) {
    if (std::abs(e) <= band) near_zero = true;
    if (std::abs(e.imag()) <= band) {
      ++r.n_real;
    } else {
      complex_found = true;
    }
  }
  for (const auto& [p, m] : r.pairs) {
    if (std::abs(p.imag()) > band || std::abs(m.imag()) > band) ++r.n_complex_pairs;
  }
  r.verdict = near_zero       ? PhaseVerdict::Critical
              : complex_found ? PhaseVerdict::Broken
                              : PhaseVerdict::Unbroken;

  std::sort(kept.begin(), kept.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  r.eigenvalues = std::move(kept);
  return r;
}

SpectrumReport truncated_spectrum(const PhysParams& p, Branch branch, Valley valley,
                                  const SpectrumOptions& opts) {
  TruncatedRep rep = build_truncated(derive_coeffs(p), opts.n_tr, branch, valley);
  const double scale = rep.scale;
  if (opts.scramble) rep = scramble(rep, opts.seed);
  const EigenResult eig = eigensolve(rep.matrix, opts.eig_tol);
  SpectrumReport report = classify_spectrum(eig.values, opts.tol, scale, opts.discard_edge);
  report.max_residual = *std::max_element(eig.certificates.begin(), eig.certificates.end());
  return report;
}

double oracle_agreement(const SpectrumReport& report, const DerivedCoeffs& coeffs, Branch branch,
                        int max_level) {
  if (report.eigenvalues.empty()) throw std::invalid_argument("report has no eigenvalues");
  double worst = 0.0;
  for (int n = 0; n <= max_level; ++n) {
    const EnergyPair e = level_energy(coeffs, n, branch);
    for (const Complex target : {e.plus, e.minus}) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& v : report.eigenvalues) best = std::min(best, std::abs(v - target));
      worst = std::max(worst, best / std::max(std::abs(target), std::numeric_limits<double>::min()));
    }
  }
  return worst;
}

double find_exceptional_point(const PhysParams& p, Vary vary, double lo, double hi, double tol,
                              const SpectrumOptions& opts, Branch branch, Valley valley) {
  if (!(lo < hi)) throw std::invalid_argument("bracket must satisfy lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
  // A probe landing exactly on v_f = +-lambda has no ladder basis; step off it.
  auto verdict_at = [&](double x) {
    try {
      return truncated_spectrum(with_value(p, vary, x), branch, valley, opts).verdict;
    } catch (const DegenerateCoefficients&) {
      const double y = x + 1e-12 * std::max(1.0, std::abs(x));
      return truncated_spectrum(with_value(p, vary, y), branch, valley, opts).verdict;
    }
  };
  const PhaseVerdict v_lo = verdict_at(lo);
  const PhaseVerdict v_hi = verdict_at(hi);
  if (v_lo == PhaseVerdict::Critical) return lo;
  if (v_hi == PhaseVerdict::Critical) return hi;
  if (v_lo == v_hi) throw NoTransitionBracketed("no transition bracketed");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const PhaseVerdict v = verdict_at(mid);
    if (v == PhaseVerdict::Critical) return mid;
    (v == v_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) os << ' ';
      os << format_double(m(r, c).real()) << ' ' << format_double(m(r, c).imag());
    }
    os << '\n';
  }
}

ComplexMatrix read_matrix(std::istream& is) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) {
    throw std::invalid_argument("bad matrix dump header");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::string re, im;
      if (!(is >> re >> im)) throw std::invalid_argument("truncated matrix dump");
      m(r, c) = Complex(parse_double(re), parse_double(im));
    }
  }
  return m;
}

}  // namespace ptdirac
