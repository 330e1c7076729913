#pragma once

#include <vector>

#include <Eigen/Dense>

#include "harperband/symbol.hpp"

namespace harperband {

// Integer flux: eta quanta per cell, h = 2pi/eta.
struct FluxContext {
  int eta = 1;
  double h = kTwoPi;

  explicit FluxContext(int eta_) : eta(eta_), h(kTwoPi / eta_) {
    if (eta_ < 1) throw Error("FluxContext: eta must be >= 1");
  }
};

// Bloch quasimomentum, reduced to [-pi, pi)^2 on construction.
struct Quasimomentum {
  double k1 = 0.0;
  double k2 = 0.0;

  Quasimomentum() = default;
  Quasimomentum(double k1_, double k2_)
      : k1(std::remainder(k1_, kTwoPi)), k2(std::remainder(k2_, kTwoPi)) {
    if (k1 >= kPi) k1 -= kTwoPi;
    if (k2 >= kPi) k2 -= kTwoPi;
  }
};

// eta x eta Hermitian matrix of the quantized symbol restricted to the joint
// Bloch eigenspace of the magnetic translations with phases e^{ik1}, e^{ik2}.
Eigen::MatrixXcd bloch_matrix(const TrigSymbol& symbol, const FluxContext& flux,
                              const Quasimomentum& k);

// Deterministic ascending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& M);

struct KGridSpec {
  int n1 = 64;
  int n2 = 64;  // Gamma-centered, half-open in each direction
};

struct BandInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

struct BandTable {
  int eta = 0;
  KGridSpec grid;
  // energies[j] holds band j sampled over the grid (row-major in (i1, i2)).
  std::vector<std::vector<double>> energies;
  std::vector<double> k1s, k2s;
  std::vector<BandInterval> band_ranges;   // per band index, before merging
  std::vector<BandInterval> merged_bands;  // disjoint, sorted
  std::vector<BandInterval> gaps;          // between merged bands

  double energy(int band, int i1, int i2) const {
    return energies[band][std::size_t(i1) * grid.n2 + i2];
  }
};

struct BandStructureOptions {
  KGridSpec grid;
  bool refine = false;          // double the grid until bandwidth stabilizes
  double refine_tol = 1e-6;
  int max_refine_doublings = 3;
  // Polish each band's min/max over k with a local simplex search; needed
  // when gap widths well below the grid resolution matter.
  bool polish_extrema = false;
  int threads = 0;
};

BandTable band_structure(const TrigSymbol& symbol, const FluxContext& flux,
                         const BandStructureOptions& opts = {});

struct SpectralItem {
  enum class Kind { Band, Gap } kind;
  double width = 0.0;
  double center = 0.0;
  double lo = 0.0, hi = 0.0;
};

// Bands/gaps intersecting [E0 - window, E0 + window], sorted by center.
std::vector<SpectralItem> widths_near(const BandTable& table, double E0,
                                      double window);

std::string band_table_to_csv(const BandTable& table);
std::string band_table_to_json(const BandTable& table);

}  // namespace harperband
