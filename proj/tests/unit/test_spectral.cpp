#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "ptdirac/spectral.hpp"

using namespace ptdirac;
using ptdirac::testing::fig1;
using ptdirac::testing::Gen;

namespace {

const Complex I(0.0, 1.0);

const Branch kBranches[] = {Branch::I, Branch::II};
const Valley kValleys[] = {Valley::Primary, Valley::TimeReversed};

int count_nonzero(const ComplexMatrix& m) {
  int n = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) n += m(r, c) != Complex(0.0);
  return n;
}

// Eigenvalues as a multiset, matched greedily to the nearest partner.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return 1e300;
  double worst = 0.0;
  for (const Complex& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](Complex p, Complex q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("closed-form ladder entries") {
    const auto p = fig1(0.5);
    const auto d = derive_coeffs(p);
    const int n = 6;
    const auto rep = build_truncated(d, n, Branch::I, Valley::Primary);
    for (int j = 1; j < n; ++j) {
      const Complex want = -I * d.a_coef * d.hbar * double(j);
      CHECK(std::abs(rep.matrix(j - 1, n + j) - want) <= 1e-14 * std::abs(want));
    }
    for (int j = 0; j + 1 < n; ++j) {
      const Complex want = I * d.k_coef / (d.a_coef * d.hbar);
      CHECK(std::abs(rep.matrix(n + j + 1, j) - want) <= 1e-14 * std::abs(want));
    }
    CHECK(count_nonzero(rep.matrix) == 2 * (n - 1));
    CHECK(rep.dropped_entry == doctest::Approx(std::abs(d.k_coef / (d.a_coef * d.hbar))));
    CHECK(rep.leakage <= 1e-14 * rep.scale);
    CHECK_FALSE(rep.scrambled);
  }

  TEST_CASE("operator algebra agrees with the closed form for every family") {
    Gen g(61);
    for (int draw = 0; draw < 20; ++draw) {
      const auto d = derive_coeffs(g.params());
      for (Branch b : kBranches)
        for (Valley v : kValleys) {
          const auto rep = build_truncated(d, 12, b, v);
          CHECK(rep.closed_form_mismatch <= 1e-14 * std::max(1.0, rep.scale));
          CHECK(basis_is_holomorphic(b, v) == ((b == Branch::I) == (v == Valley::Primary)));
        }
    }
  }

  TEST_CASE("n_tr = 2 keeps one entry per block") {
    const auto d = derive_coeffs(fig1(0.5));
    for (Branch b : kBranches)
      for (Valley v : kValleys) {
        const auto rep = build_truncated(d, 2, b, v);
        CHECK(count_nonzero(rep.matrix.topRightCorner(2, 2)) == 1);
        CHECK(count_nonzero(rep.matrix.bottomLeftCorner(2, 2)) == 1);
        CHECK(count_nonzero(rep.matrix) == 2);
      }
    CHECK_THROWS(build_truncated(d, 1, Branch::I, Valley::Primary));
  }

  TEST_CASE("characteristic polynomial by cofactor expansion") {
    // det(x - M) = x^2 prod_{n < n_tr - 1} (x^2 - (n+1) K_b) with K_I = K, K_II = -K.
    Gen g(62);
    for (int draw = 0; draw < 10; ++draw) {
      const auto d = derive_coeffs(g.params());
      const int n = g.integer(2, 4);
      for (Branch b : kBranches)
        for (Valley v : kValleys) {
          const auto m = closed_form_matrix(d, n, b, v);
          const double kb = b == Branch::I ? d.k_coef : -d.k_coef;
          for (int t = 0; t < 3; ++t) {
            const Complex x = std::sqrt(std::abs(d.k_coef)) * g.complex();
            const ComplexMatrix shifted = x * ComplexMatrix::Identity(2 * n, 2 * n) - m;
            Complex want = x * x;
            for (int k = 0; k + 1 < n; ++k) want *= x * x - double(k + 1) * kb;
            const Complex got = oracle::det(shifted);
            CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
          }
        }
    }
  }

  TEST_CASE("degenerate basis is an error") {
    const auto d = derive_coeffs(fig1(1.37));
    CHECK_THROWS_AS(build_truncated(d, 10, Branch::I, Valley::Primary), DegenerateCoefficients);
    CHECK_THROWS_AS(build_truncated(d, 10, Branch::I, Valley::TimeReversed), DegenerateCoefficients);
    CHECK_NOTHROW(build_truncated(d, 10, Branch::II, Valley::Primary));
  }

  TEST_CASE("eigensolve examples") {
    ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
    diag(0, 0) = 3.0;
    diag(1, 1) = 1.0;
    diag(2, 2) = 2.0;
    const auto r = eigensolve(diag);
    REQUIRE(r.values.size() == 3);
    CHECK(r.values[0] == Complex(1.0));
    CHECK(r.values[2] == Complex(3.0));
    ComplexMatrix rot(2, 2);
    rot << 0.0, 1.0, -1.0, 0.0;
    const auto s = eigensolve(rot);
    CHECK(std::abs(s.values[0] + I) <= 1e-14);
    CHECK(std::abs(s.values[1] - I) <= 1e-14);
    for (double c : s.certificates) CHECK(c <= 1e-14);
    CHECK_THROWS_AS(eigensolve(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
  }

  TEST_CASE("scrambling preserves the spectrum") {
    const auto d = derive_coeffs(fig1(0.5));
    const auto rep = build_truncated(d, 20, Branch::I, Valley::Primary);
    const auto a = scramble(rep, 7), b = scramble(rep, 7), c = scramble(rep, 8);
    CHECK(a.scrambled);
    CHECK(a.matrix == b.matrix);
    CHECK(a.matrix != c.matrix);
    CHECK(count_nonzero(a.matrix) >= 0.9 * a.matrix.size());
    const auto plain = eigensolve(rep.matrix).values;
    const auto mixed = eigensolve(a.matrix).values;
    const auto report = classify_spectrum(mixed, 1e-8);
    const auto ref = classify_spectrum(plain, 1e-8);
    CHECK(multiset_distance(report.eigenvalues, ref.eigenvalues) <= 1e-9 * rep.scale);
  }

  TEST_CASE("classification examples") {
    const std::vector<Complex> real{0.0, 0.0, 1.0, -1.0, 2.0, -2.0};
    const auto r = classify_spectrum(real, 1e-8);
    CHECK(r.verdict == PhaseVerdict::Unbroken);
    CHECK(r.n_real == 4);
    CHECK(r.pairs.size() == 2);
    CHECK(r.unpaired.empty());
    CHECK(r.discarded.size() == 2);
    CHECK(r.pairs[0].first == Complex(1.0));

    const std::vector<Complex> imag{0.0, 0.0, I, -I, 2.0 * I, -2.0 * I};
    const auto b = classify_spectrum(imag, 1e-8);
    CHECK(b.verdict == PhaseVerdict::Broken);
    CHECK(b.n_complex_pairs == 2);
    CHECK(b.pairs[0].first.imag() > 0.0);

    const std::vector<Complex> crit{0.0, 0.0, 1e-12, -1e-12, 1.0, -1.0};
    CHECK(classify_spectrum(crit, 1e-8).verdict == PhaseVerdict::Critical);

    const std::vector<Complex> lonely{0.0, 0.0, 1.0, 3.0};
    const auto u = classify_spectrum(lonely, 1e-8);
    CHECK(u.unpaired.size() == 2);

    CHECK_THROWS(classify_spectrum(std::vector<Complex>{}, 1e-8));
    CHECK_THROWS(classify_spectrum(std::vector<Complex>{0.0, 0.0}, 1e-8));
  }

  TEST_CASE("truncated spectrum matches the analytic ladder") {
    const auto p = fig1(0.5);
    const auto d = derive_coeffs(p);
    const auto r = truncated_spectrum(p, Branch::I, Valley::Primary);
    CHECK(r.verdict == PhaseVerdict::Unbroken);
    CHECK(r.discarded_edge_levels == 2);
    CHECK(oracle_agreement(r, d, Branch::I, 10) <= 1e-8);
    CHECK(r.max_residual <= 1e-10);
    const auto r2 = truncated_spectrum(p, Branch::II, Valley::Primary);
    CHECK(r2.verdict == PhaseVerdict::Broken);
    CHECK(oracle_agreement(r2, d, Branch::II, 10) <= 1e-8);
  }

  TEST_CASE("beyond lambda_c the ladder is imaginary") {
    const auto p = fig1(1.8);
    const auto r = truncated_spectrum(p, Branch::I, Valley::Primary);
    CHECK(r.verdict == PhaseVerdict::Broken);
    CHECK(r.n_real == 0);
    for (const auto& [e, f] : r.pairs) CHECK(std::abs(e.real()) <= 1e-8 * r.scale);
  }

  TEST_CASE("oracle agreement over 100 random parameter sets") {
    Gen g(63);
    for (int draw = 0; draw < 100; ++draw) {
      const auto p = g.params_away_from_critical();
      const auto d = derive_coeffs(p);
      const Branch b = kBranches[draw % 2];
      const Valley v = kValleys[(draw / 2) % 2];
      SpectrumOptions o;
      o.n_tr = 30;
      o.seed = 1000 + draw;
      const auto r = truncated_spectrum(p, b, v, o);
      CHECK(oracle_agreement(r, d, b, 10) <= 1e-8);
      CHECK(r.verdict == classify_phase(p, b));
      CHECK(r.eigenvalues.size() == 2 * 30 - 2);
    }
  }

  TEST_CASE("edge modes sit at the round-off floor for every truncation") {
    const auto p = fig1(0.5);
    for (int n : {10, 20, 40, 80}) {
      SpectrumOptions o;
      o.n_tr = n;
      const auto r = truncated_spectrum(p, Branch::I, Valley::Primary, o);
      REQUIRE(r.discarded.size() == 2);
      const double smallest_kept = std::abs(r.eigenvalues.front()) < std::abs(r.eigenvalues.back())
                                       ? std::abs(r.eigenvalues.front())
                                       : std::abs(r.eigenvalues.back());
      for (const Complex& z : r.discarded) {
        CHECK(std::abs(z) <= 1e-6 * r.scale);
        CHECK(std::abs(z) < 1e-3 * smallest_kept);
      }
      CHECK(oracle_agreement(r, derive_coeffs(p), Branch::I, std::min(10, n - 3)) <= 1e-8);
    }
  }

  TEST_CASE("exceptional point by bisection") {
    const double tol = 1e-9;
    const double lc = find_exceptional_point(fig1(0.5), Vary::Lambda, 1.0, 1.5, tol);
    CHECK(lc == doctest::Approx(1.33193).epsilon(1e-5));
    const double bc = find_exceptional_point(fig1(0.5), Vary::B0, 1.0, 20.0, tol);
    CHECK(bc == doctest::Approx(6.32209).epsilon(1e-5));
    const double b0c = find_exceptional_point(fig1(0.0), Vary::B0, 1.0, 20.0, tol);
    CHECK(b0c == doctest::Approx(5.48).epsilon(1e-5));
    CHECK_THROWS_AS(find_exceptional_point(fig1(0.5), Vary::Lambda, 0.0, 0.5, tol), NoTransitionBracketed);
  }

  TEST_CASE("bisection tracks the analytic critical point") {
    Gen g(64);
    int tried = 0;
    while (tried < 20) {
      const auto p = g.params();
      const auto lc = critical_point(p, Vary::Lambda);
      if (!lc || *lc < 0.1) continue;
      ++tried;
      SpectrumOptions o;
      o.n_tr = 20;
      const double found = find_exceptional_point(p, Vary::Lambda, 0.8 * *lc, 1.2 * *lc, 1e-9, o);
      CHECK(std::abs(found - *lc) <= 1e-6 * std::max(1.0, *lc));
    }
  }

  TEST_CASE("matrix text round trip") {
    const auto rep = scramble(build_truncated(derive_coeffs(fig1(0.5)), 6, Branch::I, Valley::Primary), 3);
    std::stringstream ss;
    write_matrix(ss, rep.matrix);
    CHECK(read_matrix(ss) == rep.matrix);
    std::istringstream bad("2 2\n1 0 2 0\n3 0\n");
    CHECK_THROWS(read_matrix(bad));
  }
}
