#include "ptdirac/params.hpp"

#include <cmath>

namespace ptdirac {

void validate(const PhysParams& p) {
  const double fields[] = {p.v_f, p.lambda, p.k1, p.b0, p.e, p.c, p.hbar};
  for (double f : fields) {
    if (!std::isfinite(f)) throw std::invalid_argument("physical parameter is not finite");
  }
  if (p.v_f <= 0.0) throw std::invalid_argument("v_f must be positive");
  if (p.c <= 0.0) throw std::invalid_argument("c must be positive");
  if (p.hbar <= 0.0) throw std::invalid_argument("hbar must be positive");
  if (p.e <= 0.0) throw std::invalid_argument("e must be positive");
}

std::string_view to_string(Branch b) { return b == Branch::I ? "I" : "II"; }

std::string_view to_string(Valley v) {
  return v == Valley::Primary ? "primary" : "time_reversed";
}

std::string_view to_string(PhaseVerdict v) {
  switch (v) {
    case PhaseVerdict::Unbroken: return "unbroken";
    case PhaseVerdict::Broken: return "broken";
    case PhaseVerdict::Critical: return "critical";
  }
  return "?";
}

std::string_view to_string(Vary v) { return v == Vary::Lambda ? "lambda" : "b0"; }

Branch parse_branch(std::string_view s) {
  if (s == "I" || s == "i" || s == "1") return Branch::I;
  if (s == "II" || s == "ii" || s == "2") return Branch::II;
  throw std::invalid_argument("unknown branch: " + std::string(s));
}

Valley parse_valley(std::string_view s) {
  if (s == "primary" || s == "H") return Valley::Primary;
  if (s == "time_reversed" || s == "tilde" || s == "Htilde") return Valley::TimeReversed;
  throw std::invalid_argument("unknown valley: " + std::string(s));
}

Vary parse_vary(std::string_view s) {
  if (s == "lambda") return Vary::Lambda;
  if (s == "b0") return Vary::B0;
  throw std::invalid_argument("unknown sweep variable: " + std::string(s));
}

DerivedCoeffs derive_coeffs(const PhysParams& p) {
  DerivedCoeffs d;
  const double field = p.b0 * p.e / (2.0 * p.c);
  d.a_coef = 2.0 * (p.v_f - p.lambda);
  d.b_coef = 2.0 * (p.v_f + p.lambda);
  d.c1 = p.k1 * p.v_f - (p.v_f - p.lambda) * field;
  d.c2 = -p.k1 * p.v_f + (p.v_f + p.lambda) * field;
  d.k_coef = (d.a_coef * d.c2 - d.b_coef * d.c1) * p.hbar;
  d.hbar = p.hbar;
  if (d.a_coef != 0.0) d.d1_branch_I = d.c1 / (d.a_coef * p.hbar);
  if (d.b_coef != 0.0) d.d1_branch_II = d.c2 / (d.b_coef * p.hbar);
  return d;
}

double k_coef_expanded(const PhysParams& p) {
  const double v2 = p.v_f * p.v_f;
  return p.hbar * (2.0 * (v2 - p.lambda * p.lambda) * p.b0 * p.e / p.c - 4.0 * p.k1 * v2);
}

double k_scale(const PhysParams& p) {
  const double v2 = p.v_f * p.v_f;
  return p.hbar * (2.0 * (v2 + p.lambda * p.lambda) * std::abs(p.b0) * p.e / p.c +
                   4.0 * std::abs(p.k1) * v2);
}

Complex principal_sqrt(double x) {
  if (x >= 0.0) return {std::sqrt(x), 0.0};
  return {0.0, std::sqrt(-x)};
}

EnergyPair level_energy(const DerivedCoeffs& c, int n, Branch branch) {
  if (n < 0) throw std::invalid_argument("level index must be non-negative");
  const double radicand = (n + 1) * c.k_coef;
  const Complex e = principal_sqrt(branch == Branch::I ? radicand : -radicand);
  return {e, -e};
}

EnergyPair level_energy(const PhysParams& p, int n, Branch branch) {
  return level_energy(derive_coeffs(p), n, branch);
}

Complex mass_gap(const PhysParams& p) {
  const double v2 = p.v_f * p.v_f;
  return principal_sqrt(2.0 * (v2 - p.lambda * p.lambda) * p.b0 * p.e * p.hbar / p.c -
                        4.0 * p.k1 * v2 * p.hbar);
}

std::optional<double> critical_point(const PhysParams& p, Vary vary) {
  if (vary == Vary::Lambda) {
    if (!(p.b0 * p.e > 0.0)) {
      throw std::invalid_argument("critical lambda requires B0 e > 0");
    }
    const double radicand = 1.0 - 2.0 * p.k1 * p.c / (p.b0 * p.e);
    if (radicand < 0.0) return std::nullopt;
    return p.v_f * std::sqrt(radicand);
  }
  const double denom = (p.v_f * p.v_f - p.lambda * p.lambda) * p.e;
  if (denom == 0.0) {
    throw DegenerateCoefficients("critical field undefined for v_f^2 = lambda^2");
  }
  return 2.0 * p.k1 * p.v_f * p.v_f * p.c / denom;
}

double default_phase_tolerance(const PhysParams& p) { return 1e-12 * k_scale(p); }

PhaseVerdict classify_k(double k, Branch branch, double tol) {
  if (tol < 0.0) throw std::invalid_argument("tolerance must be non-negative");
  const double signed_k = branch == Branch::I ? k : -k;
  if (signed_k > tol) return PhaseVerdict::Unbroken;
  if (signed_k < -tol) return PhaseVerdict::Broken;
  return PhaseVerdict::Critical;
}

PhaseVerdict classify_phase(const PhysParams& p, Branch branch, double tol) {
  return classify_k(derive_coeffs(p).k_coef, branch, tol);
}

PhaseVerdict classify_phase(const PhysParams& p, Branch branch) {
  return classify_phase(p, branch, default_phase_tolerance(p));
}

bool normalizability(const PhysParams& p, Branch branch) {
  const auto d1 = derive_coeffs(p).d1(branch);
  if (!d1) {
    throw DegenerateCoefficients(branch == Branch::I ? "d1 undefined: A = 0 (v_f = lambda)"
                                                     : "d1 undefined: B = 0 (v_f = -lambda)");
  }
  return *d1 < 0.0;
}

PhysParams with_value(PhysParams p, Vary vary, double value) {
  (vary == Vary::Lambda ? p.lambda : p.b0) = value;
  return p;
}

double value_of(const PhysParams& p, Vary vary) {
  return vary == Vary::Lambda ? p.lambda : p.b0;
}

}  // namespace ptdirac
