#pragma once

#include <vector>

#include "harperband/symbol.hpp"

namespace harperband {

// Two-periodic electric potential v(x1, x2) with rectangular periods (a, b),
// stored as Fourier coefficients of exp(2 pi i (m x1 / a + n x2 / b)).
struct Potential2D {
  double a = kTwoPi;
  double b = kTwoPi;
  TrigSymbol::CoeffMap coeffs;

  // amp * cos(2 pi (m x1 / a + n x2 / b)) terms.
  static Potential2D from_cosines(double a, double b,
                                  const std::map<Freq, double>& cosine_amps);
  double evaluate(double x1, double x2) const;
};

struct LandauParams {
  int n = 0;          // Landau level index
  double h = 0.0;     // semiclassical parameter; I_n = (n + 1/2) h
  double eps = 1.0;   // potential strength
};

inline double landau_level(const LandauParams& lp) {
  return (lp.n + 0.5) * lp.h;
}

// First-order averaged Hamiltonian of the Landau level n:
//   L_n = I_n + eps * sum_xi J0(sqrt(2 I_n) |xi|) v_xi e^{i xi . Y},
// with xi running over the reciprocal lattice (2 pi m / a, 2 pi n / b).
// Returned as a Harper-like symbol in the scaled angles
// (p, x) = (2 pi Y1 / a, 2 pi Y2 / b); the constant term is kept.
TrigSymbol average_first_order(const Potential2D& v, const LandauParams& lp);

// The mode damping factor applied to frequency (m, n).
double landau_mode_factor(const Potential2D& v, const LandauParams& lp, int m,
                          int n);

struct LevelTopologyReport {
  int n = 0;
  double I_n = 0.0;
  int minima = 0;
  int maxima = 0;
  int saddles = 0;
  std::vector<double> saddle_values;  // ascending
};

// Critical-point census of the averaged Hamiltonian, one entry per level in
// [n_lo, n_hi].
std::vector<LevelTopologyReport> level_topology_report(const Potential2D& v,
                                                       double h, double eps,
                                                       int n_lo, int n_hi);

}  // namespace harperband
