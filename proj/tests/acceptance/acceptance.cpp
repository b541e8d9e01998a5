// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Tolerances and runtime limits are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "ptdirac/opalg.hpp"
#include "ptdirac/spectral.hpp"

using namespace ptdirac;
using ptdirac::testing::fig1;
using ptdirac::testing::Gen;

namespace {

const Complex kI(0.0, 1.0);

struct Outcome {
  bool ok = true;
  std::ostringstream log;

  // Marks the criterion failed and names the check.
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << " [fail: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds; <= 0 means none
  std::function<void(Outcome&)> body;
};

// Criterion 1: lambda_c from the closed form and by bisection.
void critical_coupling(Outcome& o) {
  const auto p = fig1(0.5);
  const auto analytic = critical_point(p, Vary::Lambda);
  o.expect(analytic && std::abs(*analytic - 1.33193) <= 1e-4, "analytic lambda_c");
  const double found = find_exceptional_point(p, Vary::Lambda, 1.0, 1.5, 1e-9);
  o.expect(std::abs(found - 1.33193) <= 1e-4, "bisection lambda_c");
  o.log << " analytic=" << (analytic ? *analytic : NAN) << " bisection=" << found;
}

// Criterion 2: B0_c at lambda = 0.5.
void critical_field(Outcome& o) {
  const auto p = fig1(0.5);
  const auto analytic = critical_point(p, Vary::B0);
  o.expect(analytic && std::abs(*analytic - 6.32209) <= 1e-4, "analytic B0_c");
  const double found = find_exceptional_point(p, Vary::B0, 1.0, 20.0, 1e-9);
  o.expect(std::abs(found - 6.32209) <= 1e-4, "bisection B0_c");
  o.log << " analytic=" << (analytic ? *analytic : NAN) << " bisection=" << found;
}

// Criterion 3: closed-form states solve H psi = E psi.
void exact_solutions(Outcome& o) {
  Gen g(20240611);
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const auto c = complex_coeffs(g.params());
    for (Valley v : {Valley::Primary, Valley::TimeReversed}) {
      const auto h = build_hamiltonian(c, v);
      for (Branch b : {Branch::I, Branch::II})
        for (int n = 0; n <= 10; ++n) {
          const auto s = analytic_state(b, v, n, c);
          const auto hs = act(h, s);
          const double scale = std::max({1.0, hs.max_abs(), std::abs(*s.energy) * s.max_abs()});
          worst = std::max(worst, eigen_residual(h, s) / scale);
        }
    }
  }
  o.expect(worst <= 1e-12, "double residual");
  double exact_worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const auto c = exact_coeffs(g.rational_params());
    for (Valley v : {Valley::Primary, Valley::TimeReversed}) {
      const auto h = build_hamiltonian(c, v);
      for (Branch b : {Branch::I, Branch::II})
        for (int n = 0; n <= 10; ++n) exact_worst = std::max(exact_worst, eigen_residual(h, analytic_state(b, v, n, c)));
    }
  }
  o.expect(exact_worst == 0.0, "rational residual");
  o.log << " max_rel_residual=" << worst << " rational=" << exact_worst;
}

// Criterion 4: PT eigenfactors and commutators.
void pt_structure(Outcome& o) {
  const auto c = complex_coeffs(fig1(0.5));
  double worst_factor = 0.0;
  for (int n = 0; n <= 10; ++n) {
    const auto s = analytic_state(Branch::I, Valley::Primary, n, c);
    const auto f1 = pt_eigenfactor(PtKind::P1T, s);
    const auto f2 = pt_eigenfactor(PtKind::P2T, s);
    o.expect(f1 && f2, "factor present for n=" + std::to_string(n));
    if (!f1 || !f2) continue;
    const Complex want1 = (n % 2 == 0 ? 1.0 : -1.0) * kI;
    worst_factor = std::max({worst_factor, std::abs(*f1 - want1), std::abs(*f2 + 1.0)});
    for (Valley v : {Valley::Primary, Valley::TimeReversed}) {
      const auto broken = analytic_state(Branch::II, v, n, c);
      o.expect(!pt_eigenfactor(PtKind::P1T, broken) && !pt_eigenfactor(PtKind::P2T, broken),
               "broken state has no factor");
    }
  }
  o.expect(worst_factor <= 1e-12, "eigenfactor values");
  Gen g(7);
  double worst_comm = 0.0;
  for (int draw = 0; draw < 5; ++draw) {
    const auto cc = complex_coeffs(draw == 0 ? fig1(0.5) : g.params());
    const auto probes = standard_probes(cc.d1(Branch::I).real(), 100 + draw);
    for (Valley v : {Valley::Primary, Valley::TimeReversed})
      for (PtKind k : {PtKind::P1T, PtKind::P2T})
        worst_comm = std::max(worst_comm, pt_commutator_residual(build_hamiltonian(cc, v), k, probes));
  }
  o.expect(worst_comm <= 1e-12, "PT commutator");
  o.log << " factor_err=" << worst_factor << " commutator=" << worst_comm;
}

// Criterion 5: scrambled truncated matrices against the analytic ladder.
void oracle_agreement_check(Outcome& o) {
  SpectrumOptions opts;
  opts.n_tr = 40;
  double worst = 0.0;
  const auto unbroken = fig1(0.5), broken = fig1(1.8);
  for (Valley v : {Valley::Primary, Valley::TimeReversed}) {
    const auto ru = truncated_spectrum(unbroken, Branch::I, v, opts);
    o.expect(ru.verdict == PhaseVerdict::Unbroken && ru.n_complex_pairs == 0, "unbroken all real");
    worst = std::max(worst, oracle_agreement(ru, derive_coeffs(unbroken), Branch::I, 10));
    const auto rb = truncated_spectrum(broken, Branch::I, v, opts);
    o.expect(rb.verdict == PhaseVerdict::Broken && rb.n_real == 0, "broken imaginary pairs");
    worst = std::max(worst, oracle_agreement(rb, derive_coeffs(broken), Branch::I, 10));
  }
  Gen g(555);
  int mismatched = 0;
  for (int draw = 0; draw < 100; ++draw) {
    const auto p = g.params_away_from_critical();
    const Branch b = draw % 2 == 0 ? Branch::I : Branch::II;
    const Valley v = (draw / 2) % 2 == 0 ? Valley::Primary : Valley::TimeReversed;
    opts.seed = 9000 + draw;
    const auto r = truncated_spectrum(p, b, v, opts);
    mismatched += r.verdict != classify_phase(p, b);
    worst = std::max(worst, oracle_agreement(r, derive_coeffs(p), b, 10));
  }
  o.expect(worst <= 1e-8, "relative error");
  o.expect(mismatched == 0, "verdicts");
  o.log << " max_rel_err=" << worst << " verdict_mismatches=" << mismatched << "/100";
}

// Criterion 6: least-squares slope of log gap against log B0.
void mass_gap_scaling(Outcome& o) {
  for (double lambda : {0.0, 0.5}) {
    const int n = 41;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      auto p = fig1(lambda);
      p.b0 = std::pow(10.0, 3.0 + 2.0 * i / (n - 1));
      const double x = std::log(p.b0), y = std::log(std::abs(mass_gap(p)));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    o.expect(std::abs(slope - 0.5) <= 0.01, "slope at lambda=" + std::to_string(lambda));
    o.log << " slope(lambda=" << lambda << ")=" << slope;
  }
}

// Criterion 7: K1 = 0 and lambda = 0 special cases.
void special_cases(Outcome& o) {
  auto p = fig1(0.5);
  p.k1 = 0.0;
  const auto lc = critical_point(p, Vary::Lambda);
  o.expect(lc && *lc == p.v_f, "lambda_c == v_f");
  auto q = fig1(0.0);
  const auto bc = critical_point(q, Vary::B0);
  const double expect = 2 * q.k1 * q.c / q.e;
  o.expect(bc && std::abs(*bc - expect) <= 1e-12 * expect && std::abs(expect - 5.48) <= 1e-12, "B0_c = 2 K1 c / e");
  q.b0 = 6.0;
  const Complex above = mass_gap(q);
  o.expect(above.imag() == 0.0 && above.real() > 0.0, "gap real above");
  o.expect(classify_phase(q, Branch::I) == PhaseVerdict::Unbroken, "unbroken above");
  q.b0 = 5.0;
  o.expect(mass_gap(q).real() == 0.0, "gap imaginary below");
  o.expect(classify_phase(q, Branch::I) == PhaseVerdict::Broken, "broken below");
  const double found = find_exceptional_point(fig1(0.0), Vary::B0, 1.0, 20.0, 1e-9);
  o.expect(std::abs(found - 5.48) <= 1e-4, "bisection B0_c at lambda=0");
  o.log << " lambda_c(K1=0)=" << (lc ? *lc : NAN) << " B0_c(lambda=0)=" << (bc ? *bc : NAN);
}

// Criterion 8: ladder algebra, LLL annihilation and JC factorization.
void ladder(Outcome& o) {
  double comm = 0.0, fact = 0.0, lll = 0.0;
  Gen g(88);
  for (int draw = 0; draw < 5; ++draw) {
    const auto c = complex_coeffs(draw == 0 ? fig1(0.5) : g.params_away_from_critical());
    const auto r = jc_verify(c, 30);
    comm = std::max(comm, r.commutator_residual);
    fact = std::max(fact, r.factorization_residual);
    for (int l = 0; l <= 20; ++l)
      lll = std::max(lll, apply_scalar(lowering_q1(c), lll_state(l, c, Valley::Primary)).max_abs());
  }
  o.expect(comm <= 1e-12, "commutator");
  o.expect(fact <= 1e-12, "factorization");
  o.expect(lll <= 1e-12, "LLL double");
  bool exact_zero = true;
  for (int draw = 0; draw < 5; ++draw) {
    const auto c = exact_coeffs(g.rational_params());
    for (int l = 0; l <= 20; ++l) exact_zero &= apply_scalar(lowering_q1(c), lll_state(l, c, Valley::Primary)).is_zero();
  }
  o.expect(exact_zero, "LLL exactly zero in rational mode");
  o.log << " commutator=" << comm << " factorization=" << fact << " lll=" << lll;
}

// Criterion 9: T H T^-1 = H~ and the valley relabeling of states.
void valley_consistency(Outcome& o) {
  Gen g(99);
  double worst = 0.0, states = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const auto c = complex_coeffs(g.params());
    const auto probes = random_spinor_probes(50, 6, c.d1(Branch::I).real(), 300 + draw);
    worst = std::max(worst, valley_relation_residual(build_hamiltonian(c, Valley::Primary),
                                                     build_hamiltonian(c, Valley::TimeReversed), probes));
    const auto sw = c.swapped();
    for (int n = 0; n <= 10; ++n) {
      const auto a = analytic_state(Branch::I, Valley::TimeReversed, n, c);
      const auto b = analytic_state(Branch::II, Valley::Primary, n, sw);
      states = std::max(states, (a - b).max_abs() / a.max_abs());
      const auto a2 = analytic_state(Branch::II, Valley::TimeReversed, n, c);
      const auto b2 = analytic_state(Branch::I, Valley::Primary, n, sw);
      states = std::max(states, (a2 - b2).max_abs() / a2.max_abs());
    }
  }
  o.expect(worst <= 1e-12, "valley relation");
  o.expect(states <= 1e-12, "state relabeling");
  o.log << " THT^-1 residual=" << worst << " relabel=" << states;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "critical coupling lambda_c = 1.33193", 5.0, critical_coupling},
      {2, "critical field B0_c = 6.32209", 5.0, critical_field},
      {3, "closed-form eigen-solutions", 10.0, exact_solutions},
      {4, "PT eigenfactors and commutators", 0.0, pt_structure},
      {5, "truncated-matrix oracle agreement", 60.0, oracle_agreement_check},
      {6, "mass gap ~ sqrt(B0)", 0.0, mass_gap_scaling},
      {7, "special cases K1 = 0 and lambda = 0", 0.0, special_cases},
      {8, "ladder, LLL and JC factorization", 0.0, ladder},
      {9, "valley consistency", 0.0, valley_consistency},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.log << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0 && secs >= c.time_limit) {
      o.ok = false;
      o.log << " [over time limit " << c.time_limit << " s]";
    }
    failures += !o.ok;
    std::printf("%s criterion %d: %s (%.3f s)%s\n", o.ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                o.log.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
