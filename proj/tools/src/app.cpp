#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ptdirac/cli.hpp"

namespace ptdirac::cli {

namespace {

struct RawOptions {
  std::string branch = "both";
  std::string valley = "primary";
  std::string format;
  std::string vary = "lambda";
  double from = 0.0;
  double to = 0.0;
  std::optional<double> lo, hi;
};

BranchSel parse_branch_sel(const std::string& s) {
  if (s == "both") return BranchSel::Both;
  return parse_branch(s) == Branch::I ? BranchSel::I : BranchSel::II;
}

Format parse_format(const std::string& s) {
  if (s.empty()) return Format::Default;
  return s == "csv" ? Format::Csv : Format::Json;
}

// Buffers output so an unwritable path fails before anything is half-written.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) : path_(path), out_(out) {}
  std::ostream& stream() { return path_.empty() ? out_ : buffer_; }
  void flush() {
    if (path_.empty()) return;
    std::ofstream f(path_, std::ios::binary);
    if (!(f << buffer_.str()) || !f.flush()) throw UsageError("cannot write output file: " + path_);
  }
  void check_writable() const {
    if (path_.empty()) return;
    std::ofstream f(path_, std::ios::binary | std::ios::app);
    if (!f) throw UsageError("cannot write output file: " + path_);
  }

 private:
  std::string path_;
  std::ostream& out_;
  std::ostringstream buffer_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  SweepRange sweep;
  RawOptions raw;

  CLI::App app{"Exact and numerical spectra of a PT-symmetric Dirac oscillator", "ptdirac"};
  app.set_config("--config", "", "key = value configuration file")->envname("PTDIRAC_CONFIG");
  app.allow_config_extras(false);
  app.require_subcommand(1, 1);
  app.fallthrough();

  const auto finite = CLI::Number;
  app.add_option("--v_f", cfg.phys.v_f, "Fermi velocity")->capture_default_str()->check(finite);
  app.add_option("--lambda", cfg.phys.lambda, "Rashba strength")->capture_default_str();
  app.add_option("--k1", cfg.phys.k1, "Dirac-oscillator strength")->capture_default_str();
  app.add_option("--b0", cfg.phys.b0, "magnetic field")->capture_default_str();
  app.add_option("--e", cfg.phys.e, "charge")->capture_default_str();
  app.add_option("--c", cfg.phys.c, "speed of light")->capture_default_str();
  app.add_option("--hbar", cfg.phys.hbar, "reduced Planck constant")->capture_default_str();
  app.add_option("--n_max", cfg.n_max, "number of levels reported")->capture_default_str();
  app.add_option("--branch", raw.branch, "I, II or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"I", "II", "both"}));
  app.add_option("--valley", raw.valley, "primary or time_reversed")
      ->capture_default_str()
      ->check(CLI::IsMember({"primary", "time_reversed"}));
  app.add_option("--n_tr", cfg.n_tr, "truncation level of the matrix representation")
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "spectral classification tolerance")->capture_default_str();
  app.add_option("--output", cfg.output, "output file (default stdout)");
  app.add_option("--format", raw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", cfg.seed, "similarity-scramble seed")->capture_default_str();
  app.add_option("--perturb", cfg.perturb, "add eps (E12 z + E21 zbar) to H in verify");
  app.add_option("--degree", cfg.degree, "probe degree for jc")->capture_default_str();
  app.add_option("--vary", raw.vary, "lambda or b0")
      ->capture_default_str()
      ->check(CLI::IsMember({"lambda", "b0"}));
  auto* from_opt = app.add_option("--from", raw.from, "sweep start");
  auto* to_opt = app.add_option("--to", raw.to, "sweep end");
  app.add_option("--steps", sweep.steps, "grid points, endpoints included")->capture_default_str();
  app.add_flag("--log", sweep.log, "logarithmic grid");
  app.add_flag("--numeric", sweep.numeric, "add truncated-matrix columns");
  app.add_option("--decimate", sweep.decimate, "numeric columns every k-th grid point")
      ->capture_default_str();
  app.add_option("--lo", raw.lo, "bisection bracket start");
  app.add_option("--hi", raw.hi, "bisection bracket end");

  auto* analytic = app.add_subcommand("analytic", "energies, mass gap, critical values, verdicts");
  auto* verify = app.add_subcommand("verify", "run the exact and spectral check suite");
  auto* spectrum = app.add_subcommand("spectrum", "truncated-matrix eigenvalues");
  std::string dump_path;
  spectrum->add_option("--dump", dump_path, "write the solved matrix to this file");
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep as CSV/JSON rows");
  auto* critical = app.add_subcommand("critical", "analytic vs bisection critical value");
  auto* lll = app.add_subcommand("lll", "lowest-Landau-level states and annihilation residuals");
  auto* jc = app.add_subcommand("jc", "ladder commutator and JC factorization residuals");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.branch = parse_branch_sel(raw.branch);
    cfg.valley = parse_valley(raw.valley);
    cfg.format = parse_format(raw.format);
    validate(cfg);
    Sink sink(cfg.output, out);
    sink.check_writable();
    std::ostream& os = sink.stream();
    int code = kExitOk;

    if (analytic->parsed()) {
      write_analytic(os, analytic_report(cfg), cfg.format);
    } else if (verify->parsed()) {
      const VerifyReport r = run_verify(cfg);
      write_verify(os, r, cfg.format);
      if (!r.all_passed()) {
        for (const auto& c : r.checks)
          if (!c.passed && !c.skipped) err << "FAILED: " << c.name << (c.note.empty() ? "" : " (" + c.note + ")") << '\n';
        code = kExitCheckFailed;
      }
    } else if (spectrum->parsed()) {
      const auto runs = run_spectrum(cfg);
      write_spectrum(os, runs, cfg.format);
      if (!dump_path.empty()) {
        const Branch b = cfg.branch == BranchSel::II ? Branch::II : Branch::I;
        TruncatedRep rep = build_truncated(derive_coeffs(cfg.phys), cfg.n_tr, b, cfg.valley);
        rep = scramble(rep, cfg.seed);
        std::ofstream f(dump_path);
        if (!f) throw UsageError("cannot write matrix dump: " + dump_path);
        write_matrix(f, rep.matrix);
      }
    } else if (sweep_cmd->parsed()) {
      sweep.vary = parse_vary(raw.vary);
      const bool lam = sweep.vary == Vary::Lambda;
      sweep.from = from_opt->count() ? raw.from : (lam ? 0.0 : 1.0);
      sweep.to = to_opt->count() ? raw.to : (lam ? 2.0 : 20.0);
      validate(sweep);
      write_sweep(os, cfg, sweep);
    } else if (critical->parsed()) {
      CriticalRange range{parse_vary(raw.vary), raw.lo, raw.hi};
      const CriticalReport r = run_critical(cfg, range);
      write_critical(os, r, cfg.format);
      if (r.analytic && !r.agrees) code = kExitCheckFailed;
    } else if (lll->parsed()) {
      if (!write_lll(os, cfg, cfg.format)) code = kExitCheckFailed;
    } else if (jc->parsed()) {
      if (!write_jc(os, cfg, cfg.format)) code = kExitCheckFailed;
    }
    sink.flush();
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace ptdirac::cli
