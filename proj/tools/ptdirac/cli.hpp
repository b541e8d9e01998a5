#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptdirac/params.hpp"
#include "ptdirac/spectral.hpp"

namespace ptdirac::cli {

enum class Format { Default, Csv, Json };
enum class BranchSel { I, II, Both };

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  PhysParams phys;
  int n_max = 5;
  BranchSel branch = BranchSel::Both;
  Valley valley = Valley::Primary;
  int n_tr = 40;
  double tol = 1e-8;
  std::string output;  // empty: stdout
  Format format = Format::Default;
  unsigned long long seed = 20240611;
  double perturb = 0.0;
  int degree = 30;
};

struct SweepRange {
  Vary vary = Vary::Lambda;
  double from = 0.0;
  double to = 2.0;
  int steps = 400;
  bool log = false;
  bool numeric = false;
  int decimate = 20;
};

struct CriticalRange {
  Vary vary = Vary::Lambda;
  std::optional<double> lo;
  std::optional<double> hi;
};

std::vector<Branch> branches(BranchSel sel);
void validate(const RunConfig& cfg);
void validate(const SweepRange& s);
std::vector<double> sweep_grid(const SweepRange& s);

// ---- analytic -------------------------------------------------------------

struct LevelRow {
  int n = 0;
  Branch branch = Branch::I;
  Complex plus;
  Complex minus;
  bool operator==(const LevelRow&) const = default;
};

struct AnalyticReport {
  PhysParams params;
  double a_coef = 0, b_coef = 0, c1 = 0, c2 = 0, k_coef = 0;
  std::optional<double> d1_I, d1_II;
  std::vector<LevelRow> levels;
  Complex mass_gap;
  std::optional<double> lambda_c;
  std::optional<double> b0_c;
  PhaseVerdict verdict_I = PhaseVerdict::Critical;
  PhaseVerdict verdict_II = PhaseVerdict::Critical;
  std::optional<bool> normalizable_I, normalizable_II;
  bool operator==(const AnalyticReport&) const = default;
};

AnalyticReport analytic_report(const RunConfig& cfg);
void to_json(nlohmann::json& j, const AnalyticReport& r);
void from_json(const nlohmann::json& j, AnalyticReport& r);
void write_analytic(std::ostream& os, const AnalyticReport& r, Format f);

// ---- verify ---------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double residual = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

VerifyReport run_verify(const RunConfig& cfg);
void write_verify(std::ostream& os, const VerifyReport& r, Format f);

// ---- spectrum -------------------------------------------------------------

struct SpectrumRun {
  Branch branch = Branch::I;
  SpectrumReport report;
  std::optional<double> oracle_rel_error;
  std::optional<std::string> skipped;
};

std::vector<SpectrumRun> run_spectrum(const RunConfig& cfg);
void write_spectrum(std::ostream& os, const std::vector<SpectrumRun>& runs, Format f);

// ---- sweep ----------------------------------------------------------------

inline constexpr const char* kSweepHeader =
    "param,n,branch,re_E_plus,im_E_plus,re_E_minus,im_E_minus,re_gap,im_gap,verdict";

void write_sweep(std::ostream& os, const RunConfig& cfg, const SweepRange& range);

// ---- critical -------------------------------------------------------------

struct CriticalReport {
  Vary vary = Vary::Lambda;
  std::optional<double> analytic;
  double lo = 0.0, hi = 0.0;
  double bisection = 0.0;
  double difference = 0.0;
  bool agrees = false;
};

inline constexpr double kCriticalAgreement = 1e-4;

// Throws UsageError when no bracket can be formed or the bracket holds no
// transition.
CriticalReport run_critical(const RunConfig& cfg, const CriticalRange& range);
void write_critical(std::ostream& os, const CriticalReport& r, Format f);

// ---- lll / jc -------------------------------------------------------------

// Both return true when every residual is within kStrictResidual.
inline constexpr double kStrictResidual = 1e-12;
bool write_lll(std::ostream& os, const RunConfig& cfg, Format f);
bool write_jc(std::ostream& os, const RunConfig& cfg, Format f);

// Full command line (argv[0] excluded); returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptdirac::cli
