#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptdirac/params.hpp"

namespace ptdirac {

using ComplexMatrix = Eigen::MatrixXcd;

// Matrix of H restricted to the ladder basis of one (branch, valley) family:
// basis functions mono_j e^{d1 z zbar}, j < n_tr, in each spin slot, with
// mono_j = z^j or zbar^j. Index j is the upper slot, n_tr + j the lower.
struct TruncatedRep {
  int n_tr = 0;
  ComplexMatrix matrix;
  Branch branch = Branch::I;
  Valley valley = Valley::Primary;
  DerivedCoeffs coeffs;
  double scale = 0.0;           // largest |entry| of the unscrambled matrix
  double dropped_entry = 0.0;   // raising entry that leaves the truncated span
  double leakage = 0.0;         // coefficients outside the ladder span (round-off)
  double closed_form_mismatch = 0.0;
  bool scrambled = false;
};

// Monomial pattern of the basis: true for z^j, false for zbar^j.
bool basis_is_holomorphic(Branch b, Valley v);

// Throws DegenerateCoefficients when the branch envelope is undefined and
// std::logic_error when the operator-algebra entries disagree with the closed
// form by more than 1e-14 relative.
TruncatedRep build_truncated(const DerivedCoeffs& coeffs, int n_tr, Branch branch, Valley valley);

// Entries written from the closed-form ladder amplitudes, independent of the
// operator algebra (for primary branch I: U_{j-1,j} = -i A hbar j and
// L_{j+1,j} = i K / (A hbar)).
ComplexMatrix closed_form_matrix(const DerivedCoeffs& coeffs, int n_tr, Branch branch,
                                 Valley valley);

// S^-1 M S with a seeded dense S = I + G / (2 |G|_2), cond(S) <= 100 enforced.
TruncatedRep scramble(const TruncatedRep& rep, unsigned long long seed);

struct EigenResult {
  std::vector<Complex> values;       // sorted by real part, then imaginary part
  std::vector<double> certificates;  // |(M - lambda I) v| / |M|_F for a unit v
};

class EigensolveError : public std::runtime_error {
 public:
  EigensolveError(const std::string& what, EigenResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const EigenResult& partial() const { return partial_; }

 private:
  EigenResult partial_;
};

// Dense non-Hermitian eigenvalues via complex Schur decomposition.
EigenResult eigensolve(const ComplexMatrix& m, double tol = 1e-10);

struct SpectrumReport {
  std::vector<Complex> eigenvalues;  // retained, sorted
  std::vector<Complex> discarded;    // truncation edge modes
  std::vector<std::pair<Complex, Complex>> pairs;
  std::vector<Complex> unpaired;
  int n_real = 0;
  int n_complex_pairs = 0;
  PhaseVerdict verdict = PhaseVerdict::Critical;
  double pairing_residual = 0.0;  // max |E+ + E-| over pairs
  double max_residual = 0.0;      // eigensolver certificate, when known
  int discarded_edge_levels = 0;
  double scale = 0.0;
};

// Drops the `discard_edge` eigenvalues of smallest modulus (the zero modes left
// by cutting the raising chain), pairs the rest as +-E, and classifies: Critical
// if a retained eigenvalue is within tol*scale of 0, Broken if any retained
// eigenvalue has |Im| > tol*scale, else Unbroken. scale <= 0 means max |E|.
SpectrumReport classify_spectrum(std::span<const Complex> eigs, double tol, double scale = 0.0,
                                 int discard_edge = 2);

struct SpectrumOptions {
  int n_tr = 40;
  double tol = 1e-8;
  double eig_tol = 1e-10;
  bool scramble = true;
  unsigned long long seed = 20240611;
  int discard_edge = 2;
};

SpectrumReport truncated_spectrum(const PhysParams& p, Branch branch, Valley valley,
                                  const SpectrumOptions& opts = {});

// Largest relative deviation of the report's eigenvalues from +-E_n,
// n = 0..max_level, matching each analytic value to its nearest eigenvalue.
double oracle_agreement(const SpectrumReport& report, const DerivedCoeffs& coeffs, Branch branch,
                        int max_level);

class NoTransitionBracketed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bisection on the spectral verdict of the truncated branch-I (default)
// family until the bracket is narrower than tol.
double find_exceptional_point(const PhysParams& p, Vary vary, double lo, double hi, double tol,
                              const SpectrumOptions& opts = {}, Branch branch = Branch::I,
                              Valley valley = Valley::Primary);

// "<rows> <cols>" header, then one line per row of "re im" pairs.
void write_matrix(std::ostream& os, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& is);

}  // namespace ptdirac
