#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptdirac {

using Complex = std::complex<double>;

// Physical inputs in the natural-unit convention e = 1, hbar = 1, c = 137,
// with the Fermi velocity expressed in the same units (v_f = 0.01 c = 1.37).
struct PhysParams {
  double v_f = 1.37;
  double lambda = 0.5;  // imaginary Rashba strength
  double k1 = 0.02;     // Dirac-oscillator strength
  double b0 = 100.0;    // transverse magnetic field
  double e = 1.0;
  double c = 137.0;
  double hbar = 1.0;

  friend bool operator==(const PhysParams&, const PhysParams&) = default;
};

// Throws std::invalid_argument when a field is non-finite or a positive
// quantity (v_f, c, hbar, e) is not positive.
void validate(const PhysParams& p);

enum class Branch { I, II };
enum class Valley { Primary, TimeReversed };
enum class PhaseVerdict { Unbroken, Broken, Critical };
enum class Vary { Lambda, B0 };

std::string_view to_string(Branch b);
std::string_view to_string(Valley v);
std::string_view to_string(PhaseVerdict v);
std::string_view to_string(Vary v);
Branch parse_branch(std::string_view s);
Valley parse_valley(std::string_view s);
Vary parse_vary(std::string_view s);

constexpr Branch other(Branch b) { return b == Branch::I ? Branch::II : Branch::I; }

// Raised when the compact-form factorization degenerates (v_f = +-lambda), so
// that the Gaussian exponent of one branch has a zero denominator.
class DegenerateCoefficients : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Coefficients of the compact complex-plane Hamiltonian
//   H = [[0, A Pi_z + i C1 zbar], [B Pi_zbar + i C2 z, 0]],  K = (A C2 - B C1) hbar.
struct DerivedCoeffs {
  double a_coef = 0.0;
  double b_coef = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double k_coef = 0.0;
  double hbar = 1.0;
  std::optional<double> d1_branch_I;   // C1 / (A hbar)
  std::optional<double> d1_branch_II;  // C2 / (B hbar)

  std::optional<double> d1(Branch b) const {
    return b == Branch::I ? d1_branch_I : d1_branch_II;
  }
};

DerivedCoeffs derive_coeffs(const PhysParams& p);

// hbar [2 (v_f^2 - lambda^2) B0 e / c - 4 K1 v_f^2], the expanded form of K.
double k_coef_expanded(const PhysParams& p);

// Magnitude scale of the terms that make up K; used for relative tolerances.
double k_scale(const PhysParams& p);

// Principal square root of a real number: non-negative real part, and +i
// branch for a negative argument.
Complex principal_sqrt(double x);

struct EnergyPair {
  Complex plus;
  Complex minus;
};

// Branch I: +-sqrt((n+1) K). Branch II: +-sqrt(-(n+1) K).
EnergyPair level_energy(const PhysParams& p, int n, Branch branch);
EnergyPair level_energy(const DerivedCoeffs& c, int n, Branch branch);

Complex mass_gap(const PhysParams& p);

// Lambda: lambda_c = v_f sqrt(1 - 2 K1 c / (B0 e)), absent when the radicand
// is negative. B0: B0_c = 2 K1 v_f^2 c / ((v_f^2 - lambda^2) e).
std::optional<double> critical_point(const PhysParams& p, Vary vary);

double default_phase_tolerance(const PhysParams& p);

PhaseVerdict classify_phase(const PhysParams& p, Branch branch, double tol);
PhaseVerdict classify_phase(const PhysParams& p, Branch branch);
PhaseVerdict classify_k(double k_coef, Branch branch, double tol);

// True iff the branch's Gaussian envelope exp(d1 z zbar) is square integrable.
bool normalizability(const PhysParams& p, Branch branch);

PhysParams with_value(PhysParams p, Vary vary, double value);
double value_of(const PhysParams& p, Vary vary);

}  // namespace ptdirac
