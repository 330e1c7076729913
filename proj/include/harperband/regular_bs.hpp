#pragma once

#include "harperband/actions.hpp"
#include "harperband/numerics.hpp"

namespace harperband {

// A continued family of level-set components over an energy window that
// contains no critical value.
struct OrbitFamily {
  std::array<int, 2> lift = {0, 0};  // flow-oriented winding per period
  int maslov = 0;
  std::vector<double> energies;
  std::vector<double> actions;  // oint p dx along the flow, per energy
  PchipInterpolant action;      // actions vs energies (monotone)

  bool contractible() const { return lift[0] == 0 && lift[1] == 0; }
};

struct FamilyOptions {
  int table_size = 33;
  double action_tol = 1e-11;
  TracingOptions tracing;
};

// Traces every component family of {H = E} for E in [e_lo, e_hi] and
// tabulates its action.  Throws WindowCrossesCritical if a critical value
// lies strictly inside the window.
std::vector<OrbitFamily> orbit_families(const TrigSymbol& symbol, double e_lo,
                                        double e_hi,
                                        const FamilyOptions& opts = {});

struct FlatBandLevel {
  int family = 0;
  int n = 0;
  double energy = 0.0;
};

// Bohr-Sommerfeld levels of the contractible families:
// A(E) = h (2 pi n + pi m / 2).  Levels of winding families are excluded.
std::vector<FlatBandLevel> flat_band_levels(
    const std::vector<OrbitFamily>& families, double h);

// Dispersion branch energies of an x-winding family (lift (0, +-1)):
// S(E) = h (2 pi n + sigma k2) with sigma the x-winding sign.
std::vector<double> open_branch_energies(const OrbitFamily& family, double h,
                                         double k2);

// Energies where branches of the two opposite winding families meet (the
// semiclassical band touchings): (S+ + S-)(E*) in 2 pi h Z.
std::vector<double> open_crossing_energies(const OrbitFamily& plus,
                                           const OrbitFamily& minus, double h);

}  // namespace harperband
