#include "ptdirac/opalg.hpp"

#include <random>
#include <string>

namespace ptdirac {

std::string_view to_string(PtKind k) {
  switch (k) {
    case PtKind::P1T: return "P1T";
    case PtKind::P2T: return "P2T";
    case PtKind::T: return "T";
  }
  return "?";
}

PtKind parse_pt_kind(std::string_view s) {
  if (s == "P1T") return PtKind::P1T;
  if (s == "P2T") return PtKind::P2T;
  if (s == "T") return PtKind::T;
  throw std::invalid_argument("unknown PT operator: " + std::string(s));
}

CoeffSet<ExactScalar> exact_coeffs(const RationalParams& p) {
  const Rational field = p.b0 * p.e / (2 * p.c);
  const Rational a = 2 * (p.v_f - p.lambda);
  const Rational b = 2 * (p.v_f + p.lambda);
  const Rational c1 = p.k1 * p.v_f - (p.v_f - p.lambda) * field;
  const Rational c2 = -p.k1 * p.v_f + (p.v_f + p.lambda) * field;
  const Rational k = (a * c2 - b * c1) * p.hbar;
  return {a, b, c1, c2, k, p.hbar};
}

std::vector<Spinor> random_spinor_probes(int count, int max_degree, double envelope,
                                         unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> coeff(0.0, 1.0);
  std::vector<Spinor> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Polynomial up(envelope), low(envelope);
    for (int deg = 0; deg <= max_degree; ++deg) {
      for (int m = 0; m <= deg; ++m) {
        up.add_term({m, deg - m}, {coeff(rng), coeff(rng)});
        low.add_term({m, deg - m}, {coeff(rng), coeff(rng)});
      }
    }
    out.emplace_back(std::move(up), std::move(low));
  }
  return out;
}

std::vector<Spinor> standard_probes(double envelope, unsigned long long seed, int random_count) {
  auto out = monomial_spinor_probes<Complex>(6, envelope);
  auto rnd = random_spinor_probes(random_count, 6, envelope, seed);
  out.insert(out.end(), std::make_move_iterator(rnd.begin()), std::make_move_iterator(rnd.end()));
  return out;
}

}  // namespace ptdirac
