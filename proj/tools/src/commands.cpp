#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "ptdirac/cli.hpp"
#include "ptdirac/opalg.hpp"
#include "ptdirac/serialize.hpp"
#include "ptdirac/symmetry.hpp"

namespace ptdirac::cli {

using nlohmann::json;

namespace {

std::string num(double x) { return format_double(x); }

json complex_json(Complex z) { return json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

Complex complex_from(const json& j) {
  return {parse_double(j.at("re").get<std::string>()), parse_double(j.at("im").get<std::string>())};
}

json opt_json(const std::optional<double>& x) { return x ? json(num(*x)) : json(nullptr); }
json opt_json(const std::optional<bool>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> opt_double(const json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_double(j.get<std::string>());
}

std::optional<bool> opt_bool(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<bool>();
}

PhaseVerdict parse_verdict(const std::string& s) {
  for (auto v : {PhaseVerdict::Unbroken, PhaseVerdict::Broken, PhaseVerdict::Critical})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown verdict: " + s);
}

Format resolve(Format f, Format fallback) { return f == Format::Default ? fallback : f; }

std::string degenerate_note(Branch b) {
  return b == Branch::I ? "degenerate A=0: branch I skipped" : "degenerate B=0: branch II skipped";
}

}  // namespace

std::vector<Branch> branches(BranchSel sel) {
  switch (sel) {
    case BranchSel::I: return {Branch::I};
    case BranchSel::II: return {Branch::II};
    case BranchSel::Both: break;
  }
  return {Branch::I, Branch::II};
}

void validate(const RunConfig& cfg) {
  validate(cfg.phys);
  if (cfg.n_max < 1) throw UsageError("n_max must be at least 1");
  if (cfg.n_tr < 2 || cfg.n_tr > 1000) throw UsageError("n_tr must lie in [2, 1000]");
  if (!(cfg.tol >= 0.0) || !std::isfinite(cfg.tol)) throw UsageError("tol must be finite and >= 0");
  if (!std::isfinite(cfg.perturb)) throw UsageError("perturb must be finite");
  if (cfg.degree < 2) throw UsageError("degree must be at least 2");
}

void validate(const SweepRange& s) {
  if (!std::isfinite(s.from) || !std::isfinite(s.to)) throw UsageError("sweep bounds must be finite");
  if (!(s.from < s.to)) throw UsageError("sweep requires from < to");
  if (s.steps < 2) throw UsageError("sweep requires steps >= 2");
  if (s.log && !(s.from > 0.0)) throw UsageError("log grid requires from > 0");
  if (s.decimate < 1) throw UsageError("decimate must be at least 1");
}

std::vector<double> sweep_grid(const SweepRange& s) {
  std::vector<double> g(s.steps);
  const double last = s.steps - 1;
  for (int i = 0; i < s.steps; ++i) {
    const double t = i / last;
    g[i] = s.log ? std::exp(std::log(s.from) + t * (std::log(s.to) - std::log(s.from)))
                 : s.from + t * (s.to - s.from);
  }
  g.front() = s.from;
  g.back() = s.to;
  return g;
}

// ---- analytic -------------------------------------------------------------

AnalyticReport analytic_report(const RunConfig& cfg) {
  const PhysParams& p = cfg.phys;
  const DerivedCoeffs d = derive_coeffs(p);
  AnalyticReport r;
  r.params = p;
  r.a_coef = d.a_coef;
  r.b_coef = d.b_coef;
  r.c1 = d.c1;
  r.c2 = d.c2;
  r.k_coef = d.k_coef;
  r.d1_I = d.d1_branch_I;
  r.d1_II = d.d1_branch_II;
  for (int n = 0; n < cfg.n_max; ++n) {
    for (Branch b : branches(cfg.branch)) {
      const EnergyPair e = level_energy(d, n, b);
      r.levels.push_back({n, b, e.plus, e.minus});
    }
  }
  r.mass_gap = mass_gap(p);
  if (p.b0 * p.e > 0.0) r.lambda_c = critical_point(p, Vary::Lambda);
  if (p.v_f * p.v_f != p.lambda * p.lambda) r.b0_c = critical_point(p, Vary::B0);
  r.verdict_I = classify_phase(p, Branch::I);
  r.verdict_II = classify_phase(p, Branch::II);
  if (d.d1_branch_I) r.normalizable_I = normalizability(p, Branch::I);
  if (d.d1_branch_II) r.normalizable_II = normalizability(p, Branch::II);
  return r;
}

void to_json(json& j, const AnalyticReport& r) {
  const PhysParams& p = r.params;
  j = json::object();
  j["params"] = {{"v_f", num(p.v_f)}, {"lambda", num(p.lambda)}, {"k1", num(p.k1)},
                 {"b0", num(p.b0)},   {"e", num(p.e)},           {"c", num(p.c)},
                 {"hbar", num(p.hbar)}};
  j["coeffs"] = {{"a", num(r.a_coef)}, {"b", num(r.b_coef)}, {"c1", num(r.c1)},
                 {"c2", num(r.c2)},    {"k", num(r.k_coef)}, {"d1_I", opt_json(r.d1_I)},
                 {"d1_II", opt_json(r.d1_II)}};
  json levels = json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"n", l.n},
                      {"branch", std::string(to_string(l.branch))},
                      {"E_plus", complex_json(l.plus)},
                      {"E_minus", complex_json(l.minus)}});
  }
  j["levels"] = levels;
  j["mass_gap"] = complex_json(r.mass_gap);
  j["lambda_c"] = opt_json(r.lambda_c);
  j["b0_c"] = opt_json(r.b0_c);
  j["verdict"] = {{"I", std::string(to_string(r.verdict_I))},
                  {"II", std::string(to_string(r.verdict_II))}};
  j["normalizable"] = {{"I", opt_json(r.normalizable_I)}, {"II", opt_json(r.normalizable_II)}};
}

void from_json(const json& j, AnalyticReport& r) {
  const auto& p = j.at("params");
  auto get = [](const json& o, const char* k) { return parse_double(o.at(k).get<std::string>()); };
  r.params = PhysParams{get(p, "v_f"), get(p, "lambda"), get(p, "k1"), get(p, "b0"),
                        get(p, "e"),   get(p, "c"),      get(p, "hbar")};
  const auto& c = j.at("coeffs");
  r.a_coef = get(c, "a");
  r.b_coef = get(c, "b");
  r.c1 = get(c, "c1");
  r.c2 = get(c, "c2");
  r.k_coef = get(c, "k");
  r.d1_I = opt_double(c.at("d1_I"));
  r.d1_II = opt_double(c.at("d1_II"));
  r.levels.clear();
  for (const auto& l : j.at("levels")) {
    r.levels.push_back({l.at("n").get<int>(), parse_branch(l.at("branch").get<std::string>()),
                        complex_from(l.at("E_plus")), complex_from(l.at("E_minus"))});
  }
  r.mass_gap = complex_from(j.at("mass_gap"));
  r.lambda_c = opt_double(j.at("lambda_c"));
  r.b0_c = opt_double(j.at("b0_c"));
  r.verdict_I = parse_verdict(j.at("verdict").at("I").get<std::string>());
  r.verdict_II = parse_verdict(j.at("verdict").at("II").get<std::string>());
  r.normalizable_I = opt_bool(j.at("normalizable").at("I"));
  r.normalizable_II = opt_bool(j.at("normalizable").at("II"));
}

void write_analytic(std::ostream& os, const AnalyticReport& r, Format f) {
  if (resolve(f, Format::Json) == Format::Json) {
    os << json(r).dump(2) << '\n';
    return;
  }
  os << "n,branch,re_E_plus,im_E_plus,re_E_minus,im_E_minus\n";
  for (const auto& l : r.levels) {
    os << l.n << ',' << to_string(l.branch) << ',' << num(l.plus.real()) << ','
       << num(l.plus.imag()) << ',' << num(l.minus.real()) << ',' << num(l.minus.imag()) << '\n';
  }
  auto opt = [](const auto& x) { return x ? num(*x) : std::string(); };
  os << "# mass_gap," << num(r.mass_gap.real()) << ',' << num(r.mass_gap.imag()) << '\n';
  os << "# lambda_c," << opt(r.lambda_c) << '\n';
  os << "# b0_c," << opt(r.b0_c) << '\n';
  os << "# verdict," << to_string(r.verdict_I) << ',' << to_string(r.verdict_II) << '\n';
  auto flag = [](const std::optional<bool>& b) {
    return b ? std::string(*b ? "true" : "false") : std::string();
  };
  os << "# normalizable," << flag(r.normalizable_I) << ',' << flag(r.normalizable_II) << '\n';
}

// ---- verify ---------------------------------------------------------------

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed || c.skipped; });
}

namespace {

using Op = OperatorExpr<Complex>;

struct Verifier {
  const RunConfig& cfg;
  VerifyReport report;

  void record(std::string name, double residual, double threshold, std::string note = {}) {
    report.checks.push_back({std::move(name), residual <= threshold, false, residual, threshold,
                             std::move(note)});
  }
  void skip(std::string name, std::string note) {
    report.checks.push_back({std::move(name), false, true, 0.0, 0.0, std::move(note)});
  }
  void fail(std::string name, std::string note) {
    report.checks.push_back({std::move(name), false, false,
                             std::numeric_limits<double>::infinity(), 0.0, std::move(note)});
  }
};

// Relative residual of a spinor identity lhs = rhs.
double relative(const Spinor& diff, double reference) {
  return diff.max_abs() / std::max(1.0, reference);
}

Op perturbation(double eps) {
  return Complex(eps) * (Mat2<Complex>::upper_right() * Op::mul_z() +
                         Mat2<Complex>::lower_left() * Op::mul_zbar());
}

std::string valley_name(Valley v) { return std::string(to_string(v)); }

}  // namespace

VerifyReport run_verify(const RunConfig& cfg) {
  Verifier v{cfg, {}};
  const PhysParams& p = cfg.phys;
  const DerivedCoeffs d = derive_coeffs(p);
  const auto c = complex_coeffs(d);
  const double hbar = p.hbar;
  const double op_scale =
      std::max({1.0, std::abs(d.a_coef) * hbar, std::abs(d.b_coef) * hbar, std::abs(d.c1),
                std::abs(d.c2)});
  const double strict = kStrictResidual * op_scale;
  const double probe_d = d.d1_branch_I.value_or(d.d1_branch_II.value_or(0.0));

  // Canonical commutators on random weighted polynomials.
  {
    const Complex ih(0.0, hbar);
    const Op z = Op::mul_z(), zb = Op::mul_zbar();
    const Op pz = Op::momentum_z(hbar), pzb = Op::momentum_zbar(hbar);
    struct Rel {
      const char* name;
      Op lhs;
      Complex value;
    };
    const Rel rels[] = {{"commutator [zbar,Pi_zbar] = i hbar", zb * pzb - pzb * zb, ih},
                        {"commutator [z,Pi_zbar] = 0", z * pzb - pzb * z, 0.0},
                        {"commutator [zbar,Pi_z] = 0", zb * pz - pz * zb, 0.0},
                        {"commutator [Pi_zbar,Pi_z] = 0", pzb * pz - pz * pzb, 0.0},
                        {"commutator [z,Pi_z] = i hbar", z * pz - pz * z, ih}};
    const auto polys = random_spinor_probes(100, 6, probe_d, cfg.seed);
    for (const auto& rel : rels) {
      double worst = 0.0;
      for (const auto& s : polys) {
        const auto diff = apply_scalar(rel.lhs, s.upper) - rel.value * s.upper;
        worst = std::max(worst, diff.max_abs());
      }
      v.record(rel.name, worst, kStrictResidual * std::max(1.0, hbar));
    }
  }

  const Op extra = cfg.perturb != 0.0 ? perturbation(cfg.perturb) : Op{};
  auto hamiltonian = [&](Valley val) { return build_hamiltonian(c, val) + extra; };

  // Eigen-equations, reduced second-order equations and PT factors.
  for (Valley val : {Valley::Primary, Valley::TimeReversed}) {
    const Op h = hamiltonian(val);
    for (Branch b : {Branch::I, Branch::II}) {
      const std::string tag = valley_name(val) + " " + std::string(to_string(b));
      if (!d.d1(b)) {
        v.skip("eigen residual " + tag, degenerate_note(b));
        continue;
      }
      double eig = 0.0, reduced = 0.0;
      for (int n = 0; n <= 10; ++n) {
        const Spinor s = analytic_state(b, val, n, c);
        const Complex e = *s.energy;
        const Spinor hs = act(h, s);
        eig = std::max(eig, relative(hs - e * s, std::max(hs.max_abs(), std::abs(e) * s.max_abs())));
        const Spinor hhs = act(h, hs);
        reduced = std::max(reduced, relative(hhs - (e * e) * s, hhs.max_abs()));
      }
      v.record("eigen residual " + tag, eig, kStrictResidual);
      v.record("reduced equation (H^2 - E^2) psi " + tag, reduced, kStrictResidual);

      const PhaseVerdict phase = classify_phase(p, b);
      if (phase == PhaseVerdict::Critical) {
        v.skip("pt factors " + tag, "critical point: E = 0");
        continue;
      }
      if (phase == PhaseVerdict::Unbroken) {
        const Complex p1 = basis_is_holomorphic(b, val) ? Complex(0, 1) : Complex(0, -1);
        double worst = 0.0;
        for (int n = 0; n <= 10; ++n) {
          const Spinor s = analytic_state(b, val, n, c);
          const double sign = n % 2 == 0 ? 1.0 : -1.0;
          const auto f1 = pt_eigenfactor(PtKind::P1T, s);
          const auto f2 = pt_eigenfactor(PtKind::P2T, s);
          worst = std::max(worst, f1 ? std::abs(*f1 - sign * p1) : 1.0);
          worst = std::max(worst, f2 ? std::abs(*f2 + 1.0) : 1.0);
        }
        v.record("pt factors " + tag, worst, 1e-10);
      } else {
        int present = 0;
        for (int n = 0; n <= 10; ++n) {
          const Spinor s = analytic_state(b, val, n, c);
          present += pt_eigenfactor(PtKind::P1T, s).has_value();
          present += pt_eigenfactor(PtKind::P2T, s).has_value();
        }
        v.record("broken states are not PT eigenstates " + tag, present, 0.0);
      }
    }
  }

  // PT commutators and the valley relation on the standard probe set.
  const auto probes = standard_probes(probe_d, cfg.seed);
  for (Valley val : {Valley::Primary, Valley::TimeReversed}) {
    const Op h = hamiltonian(val);
    for (PtKind k : {PtKind::P1T, PtKind::P2T}) {
      v.record("pt commutator " + std::string(to_string(k)) + " " + valley_name(val),
               pt_commutator_residual(h, k, probes), strict);
    }
  }
  v.record("valley relation T H T^-1 = H~",
           valley_relation_residual(hamiltonian(Valley::Primary), hamiltonian(Valley::TimeReversed),
                                    probes),
           strict);

  // Lowest-Landau-level annihilation.
  for (Valley val : {Valley::Primary, Valley::TimeReversed}) {
    const Branch b = val == Valley::Primary ? Branch::I : Branch::II;
    const std::string name = "lll annihilation " + valley_name(val);
    if (!d.d1(b)) {
      v.skip(name, degenerate_note(b));
      continue;
    }
    const Op block = upper_block(c, val);
    double worst = 0.0;
    for (int l = 0; l <= 20; ++l) {
      worst = std::max(worst, apply_scalar(block, lll_state(l, c, val)).max_abs());
    }
    v.record(name, worst, strict);
  }

  // Ladder algebra and the JC factorization.
  if (classify_k(d.k_coef, Branch::I, default_phase_tolerance(p)) == PhaseVerdict::Critical) {
    v.skip("jc commutator [Q1,Q2^+] = 1", "K = 0: ladder normalization undefined");
    v.skip("jc factorization", "K = 0: ladder normalization undefined");
  } else {
    const JcReport jc = jc_verify(c, cfg.degree);
    v.record("jc commutator [Q1,Q2^+] = 1", jc.commutator_residual, kStrictResidual);
    v.record("jc factorization", jc.factorization_residual, kStrictResidual);
  }

  // Spectral oracle at the configured point.
  SpectrumOptions opts;
  opts.n_tr = cfg.n_tr;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  const bool critical =
      classify_k(d.k_coef, Branch::I, default_phase_tolerance(p)) == PhaseVerdict::Critical;
  for (Branch b : {Branch::I, Branch::II}) {
    const std::string tag = valley_name(cfg.valley) + " " + std::string(to_string(b));
    if (!d.d1(b)) {
      v.skip("spectral verdict " + tag, degenerate_note(b));
      continue;
    }
    try {
      const SpectrumReport rep = truncated_spectrum(p, b, cfg.valley, opts);
      v.record("spectral verdict " + tag, rep.verdict == classify_phase(p, b) ? 0.0 : 1.0, 0.0,
               std::string(to_string(rep.verdict)));
      if (critical) {
        v.skip("spectral oracle agreement " + tag, "K = 0: relative error undefined");
      } else {
        const int levels = std::min(10, cfg.n_tr - 3);
        if (levels < 0) {
          v.skip("spectral oracle agreement " + tag, "n_tr too small for retained levels");
        } else {
          v.record("spectral oracle agreement " + tag, oracle_agreement(rep, d, b, levels), 1e-8);
        }
      }
    } catch (const std::exception& e) {
      v.fail("spectral verdict " + tag, e.what());
    }
  }
  return v.report;
}

void write_verify(std::ostream& os, const VerifyReport& r, Format f) {
  if (resolve(f, Format::Csv) == Format::Json) {
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name},
                        {"status", c.skipped ? "skip" : c.passed ? "pass" : "fail"},
                        {"residual", num(c.residual)},
                        {"threshold", num(c.threshold)},
                        {"note", c.note}});
    }
    os << json{{"passed", r.all_passed()}, {"checks", checks}}.dump(2) << '\n';
    return;
  }
  os << "check,status,residual,threshold,note\n";
  for (const auto& c : r.checks) {
    os << c.name << ',' << (c.skipped ? "skip" : c.passed ? "pass" : "fail") << ','
       << num(c.residual) << ',' << num(c.threshold) << ',' << c.note << '\n';
  }
}

// ---- spectrum -------------------------------------------------------------

std::vector<SpectrumRun> run_spectrum(const RunConfig& cfg) {
  const DerivedCoeffs d = derive_coeffs(cfg.phys);
  SpectrumOptions opts;
  opts.n_tr = cfg.n_tr;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  const bool critical = classify_k(d.k_coef, Branch::I, default_phase_tolerance(cfg.phys)) ==
                        PhaseVerdict::Critical;
  std::vector<SpectrumRun> out;
  for (Branch b : branches(cfg.branch)) {
    SpectrumRun run;
    run.branch = b;
    if (!d.d1(b)) {
      run.skipped = degenerate_note(b);
    } else {
      run.report = truncated_spectrum(cfg.phys, b, cfg.valley, opts);
      if (!critical && cfg.n_tr >= 3) {
        run.oracle_rel_error = oracle_agreement(run.report, d, b, std::min(10, cfg.n_tr - 3));
      }
    }
    out.push_back(std::move(run));
  }
  return out;
}

void write_spectrum(std::ostream& os, const std::vector<SpectrumRun>& runs, Format f) {
  auto pair = [](Complex z) { return json::array({num(z.real()), num(z.imag())}); };
  if (resolve(f, Format::Json) == Format::Json) {
    json arr = json::array();
    for (const auto& r : runs) {
      json j{{"branch", std::string(to_string(r.branch))}};
      if (r.skipped) {
        j["skipped"] = *r.skipped;
        arr.push_back(j);
        continue;
      }
      const auto& s = r.report;
      json eig = json::array(), disc = json::array(), pairs = json::array(),
           unpaired = json::array();
      for (auto z : s.eigenvalues) eig.push_back(pair(z));
      for (auto z : s.discarded) disc.push_back(pair(z));
      for (auto [a, b] : s.pairs) pairs.push_back(json::array({pair(a), pair(b)}));
      for (auto z : s.unpaired) unpaired.push_back(pair(z));
      j["verdict"] = std::string(to_string(s.verdict));
      j["n_real"] = s.n_real;
      j["n_complex_pairs"] = s.n_complex_pairs;
      j["max_residual"] = num(s.max_residual);
      j["pairing_residual"] = num(s.pairing_residual);
      j["discarded_edge_levels"] = s.discarded_edge_levels;
      j["scale"] = num(s.scale);
      j["eigenvalues"] = eig;
      j["discarded"] = disc;
      j["pairs"] = pairs;
      j["unpaired"] = unpaired;
      j["oracle_rel_error"] = opt_json(r.oracle_rel_error);
      arr.push_back(j);
    }
    os << json{{"spectra", arr}}.dump(2) << '\n';
    return;
  }
  os << "branch,index,re,im,role\n";
  for (const auto& r : runs) {
    if (r.skipped) continue;
    int idx = 0;
    for (auto z : r.report.eigenvalues) {
      os << to_string(r.branch) << ',' << idx++ << ',' << num(z.real()) << ',' << num(z.imag())
         << ",retained\n";
    }
    for (auto z : r.report.discarded) {
      os << to_string(r.branch) << ',' << idx++ << ',' << num(z.real()) << ',' << num(z.imag())
         << ",edge\n";
    }
  }
}

// ---- sweep ----------------------------------------------------------------

void write_sweep(std::ostream& os, const RunConfig& cfg, const SweepRange& range) {
  const auto grid = sweep_grid(range);
  const Format f = resolve(cfg.format, Format::Csv);
  const std::vector<Branch> brs = branches(cfg.branch);
  std::vector<std::string> header;
  {
    std::istringstream in(kSweepHeader);
    for (std::string col; std::getline(in, col, ',');) header.push_back(col);
  }
  if (range.numeric) {
    for (const char* col : {"num_re_E_plus", "num_im_E_plus", "num_rel_err", "num_verdict"})
      header.push_back(col);
  }
  SpectrumOptions opts;
  opts.n_tr = cfg.n_tr;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;

  json rows = json::array();
  if (f == Format::Csv) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
  }
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const PhysParams p = with_value(cfg.phys, range.vary, grid[gi]);
    const DerivedCoeffs d = derive_coeffs(p);
    const Complex gap = mass_gap(p);
    const bool numeric_point = range.numeric && gi % range.decimate == 0;
    for (Branch b : brs) {
      std::optional<SpectrumReport> rep;
      if (numeric_point && d.d1(b)) rep = truncated_spectrum(p, b, cfg.valley, opts);
      const PhaseVerdict verdict = classify_phase(p, b);
      for (int n = 0; n < cfg.n_max; ++n) {
        const EnergyPair e = level_energy(d, n, b);
        std::vector<std::string> cells = {num(grid[gi]),
                                          std::to_string(n),
                                          std::string(to_string(b)),
                                          num(e.plus.real()),
                                          num(e.plus.imag()),
                                          num(e.minus.real()),
                                          num(e.minus.imag()),
                                          num(gap.real()),
                                          num(gap.imag()),
                                          std::string(to_string(verdict))};
        if (range.numeric) {
          if (rep && n <= cfg.n_tr - 3 && !rep->eigenvalues.empty()) {
            Complex best = rep->eigenvalues.front();
            for (auto z : rep->eigenvalues)
              if (std::abs(z - e.plus) < std::abs(best - e.plus)) best = z;
            const double err = std::abs(best - e.plus) / std::max(std::abs(e.plus), 1e-300);
            cells.insert(cells.end(), {num(best.real()), num(best.imag()), num(err),
                                       std::string(to_string(rep->verdict))});
          } else {
            cells.insert(cells.end(), 4, std::string());
          }
        }
        if (f == Format::Csv) {
          for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
          os << '\n';
        } else {
          json row = json::object();
          for (std::size_t i = 0; i < cells.size(); ++i) row[header[i]] = cells[i];
          rows.push_back(row);
        }
      }
    }
  }
  if (f == Format::Json) os << rows.dump(2) << '\n';
}

// ---- critical -------------------------------------------------------------

CriticalReport run_critical(const RunConfig& cfg, const CriticalRange& range) {
  CriticalReport r;
  r.vary = range.vary;
  const PhysParams& p = cfg.phys;
  try {
    r.analytic = critical_point(p, range.vary);
  } catch (const std::exception&) {
    r.analytic.reset();
  }
  if (range.lo && range.hi) {
    r.lo = *range.lo;
    r.hi = *range.hi;
  } else {
    if (!r.analytic) throw UsageError("no analytic critical value to bracket; pass --lo and --hi");
    const double a = *r.analytic;
    r.lo = range.lo.value_or(std::min(0.5 * a, 1.5 * a));
    r.hi = range.hi.value_or(std::max(0.5 * a, 1.5 * a));
  }
  if (!(r.lo < r.hi)) throw UsageError("critical bracket requires lo < hi");
  SpectrumOptions opts;
  opts.n_tr = cfg.n_tr;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  const double width = 1e-8 * std::max({1.0, std::abs(r.lo), std::abs(r.hi)});
  try {
    r.bisection = find_exceptional_point(p, range.vary, r.lo, r.hi, width, opts);
  } catch (const NoTransitionBracketed& e) {
    throw UsageError(e.what());
  }
  if (r.analytic) {
    r.difference = r.bisection - *r.analytic;
    r.agrees = std::abs(r.difference) <= kCriticalAgreement;
  }
  return r;
}

void write_critical(std::ostream& os, const CriticalReport& r, Format f) {
  if (resolve(f, Format::Json) == Format::Json) {
    json j{{"vary", std::string(to_string(r.vary))},
           {"analytic", opt_json(r.analytic)},
           {"lo", num(r.lo)},
           {"hi", num(r.hi)},
           {"bisection", num(r.bisection)},
           {"difference", r.analytic ? json(num(r.difference)) : json(nullptr)},
           {"agrees", r.agrees}};
    os << j.dump(2) << '\n';
    return;
  }
  os << "vary,analytic,bisection,difference,agrees\n";
  os << to_string(r.vary) << ',' << (r.analytic ? num(*r.analytic) : "") << ','
     << num(r.bisection) << ',' << (r.analytic ? num(r.difference) : "") << ','
     << (r.agrees ? "true" : "false") << '\n';
}

// ---- lll / jc -------------------------------------------------------------

bool write_lll(std::ostream& os, const RunConfig& cfg, Format f) {
  const DerivedCoeffs d = derive_coeffs(cfg.phys);
  const Branch b = cfg.valley == Valley::Primary ? Branch::I : Branch::II;
  if (!d.d1(b)) throw DegenerateCoefficients(degenerate_note(b));
  const auto c = complex_coeffs(d);
  const auto block = upper_block(c, cfg.valley);
  bool ok = true;
  json arr = json::array();
  if (resolve(f, Format::Json) == Format::Csv) os << "l,annihilation_residual\n";
  for (int l = 0; l < cfg.n_max; ++l) {
    const auto chi = lll_state(l, c, cfg.valley);
    const double res = apply_scalar(block, chi).max_abs();
    ok = ok && res <= kStrictResidual;
    if (resolve(f, Format::Json) == Format::Json) {
      arr.push_back({{"l", l}, {"annihilation_residual", num(res)}, {"state", to_text(chi)}});
    } else {
      os << l << ',' << num(res) << '\n';
    }
  }
  if (resolve(f, Format::Json) == Format::Json) {
    os << json{{"valley", std::string(to_string(cfg.valley))}, {"states", arr}}.dump(2) << '\n';
  }
  return ok;
}

bool write_jc(std::ostream& os, const RunConfig& cfg, Format f) {
  const auto c = complex_coeffs(derive_coeffs(cfg.phys));
  const JcReport r = jc_verify(c, cfg.degree);
  const bool ok =
      r.commutator_residual <= kStrictResidual && r.factorization_residual <= kStrictResidual;
  if (resolve(f, Format::Json) == Format::Json) {
    os << json{{"degree", cfg.degree},
               {"commutator_residual", num(r.commutator_residual)},
               {"factorization_residual", num(r.factorization_residual)},
               {"passed", ok}}
              .dump(2)
       << '\n';
  } else {
    os << "degree,commutator_residual,factorization_residual,passed\n"
       << cfg.degree << ',' << num(r.commutator_residual) << ','
       << num(r.factorization_residual) << ',' << (ok ? "true" : "false") << '\n';
  }
  return ok;
}

}  // namespace ptdirac::cli
