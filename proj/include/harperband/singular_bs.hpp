#pragma once

#include <Eigen/Dense>

#include "harperband/actions.hpp"

namespace harperband {

// Branching scenarios at a saddle energy, named after the local shape of the
// Reeb graph: Y (one saddle, closed orbits on one side, open on the other),
// X (two saddles joined by lobes, open motion above), Deg (two saddles, all
// smooth orbits closed, separatrix non-compact in both directions).
enum class Scenario { Y, X, Deg };

// Saddle scattering amplitude (1 + e^{-2 pi eps})^{-1/2}
// exp[i(arg Gamma(1/2 + i eps) + eps log h)].
Complex script_E(double eps, double h);

// Everything the closed-form dispersion/width formulas need.  The edge
// weights follow the labeling of the scenario: Y uses gamma[0..1] (lower and
// upper loop), X uses gamma[0..3] = (lower lobe 1, upper lobe 1, lower lobe
// 2, upper lobe 2), Deg uses the cycle-lift labeling (gamma1+gamma4 winds p,
// gamma1+gamma2 winds x).
struct ScenarioParams {
  Scenario kind = Scenario::Y;
  double E = 0.0;  // saddle energy
  double h = 0.0;
  double w = 0.0;   // sqrt|det H''| at V
  double wt = 0.0;  // ... at the second saddle (X, Deg)
  std::vector<EdgeWeight> gamma;

  double N(double lambda0) const;
  double Delta(double lambda0) const;   // Y
  double Delta1(double lambda0) const;  // X, Deg
  double Delta2(double lambda0) const;  // X, Deg
};

struct WidthEstimate {
  double band = 0.0;
  double gap1 = 0.0;
  double gap2 = 0.0;  // X only; equal to gap1 otherwise
};

WidthEstimate scenario_widths(const ScenarioParams& sp, double lambda0);

// k at which the dispersion branches near E + lambda0 h attain their maxima
// (Deg scenario).
std::array<double, 2> kmax(const ScenarioParams& sp, double lambda0);

// Closed-form dispersion shifts mu (E = sp.E + lambda0 h + mu h) with mu
// restricted to [mu_lo, mu_hi]; sorted ascending.  The Y and X relations
// ignore k1.
std::vector<double> dispersion_mu(const ScenarioParams& sp, double lambda0,
                                  double k1, double k2, double mu_lo,
                                  double mu_hi);

// ---------------------------------------------------------------------------
// The scenario quantization systems: matching conditions at each saddle plus
// Bloch and holonomy relations, assembled as a small linear system whose
// singular lambda are the dispersion branches (E = E_s + lambda h).
// ---------------------------------------------------------------------------

// One saddle of the quantization graph.  q13 is the sign of H - E in the
// sectors between branches 1 and 3 (equivalently 2 and 4): the level set at
// E + lambda h with lambda of that sign passes through those sectors, so they
// carry the transmission channel as lambda -> +inf * q13.
struct QVertex {
  double w = 0.0;
  int q13 = +1;
  // Signed Maslov corner of the channel pair whose x-motion reverses across
  // the saddle: corner13 for (1->3)/(2->4), corner14 for (1->4)/(2->3).
  // Exactly one of the two is nonzero; the sign is the rotation sense of the
  // in/out tangents, as in maslov_index.
  int corner13 = 0;
  int corner14 = 0;
};

// Separatrix arc from an outgoing branch (3 or 4) of `tail` to an incoming
// branch (1 or 2) of `head`, carrying the WKB propagation phase
// beta = B/h + lambda J + pi m / 2 plus the Bloch phase k . lift.
struct QEdge {
  int tail = 0, head = 0;
  int out_branch = 3, in_branch = 1;
  EdgeWeight weight;
  std::array<int, 2> lift{0, 0};
};

struct QuantizationSystem {
  Scenario kind = Scenario::Y;
  double E = 0.0;
  double h = 0.0;
  std::vector<QVertex> vertices;
  std::vector<QEdge> edges;

  double eps(int v, double lambda) const { return lambda / vertices[v].w; }
  double edge_phase(int e, double lambda, double k1, double k2) const {
    const QEdge& q = edges[e];
    return q.weight.B / h + lambda * q.weight.J + kPi * q.weight.m / 2.0 +
           k1 * q.lift[0] + k2 * q.lift[1];
  }
  // 2x2 branch scattering (in 1, in 2) -> (out 3, out 4) at vertex v.
  Eigen::Matrix2cd scatter(int v, double lambda) const;

  // Full linear system (4 unknowns per vertex: in1, in2, out3, out4).
  Eigen::MatrixXcd matrix(double lambda, double k1, double k2) const;
  double det_abs(double lambda, double k1, double k2) const;
  // Real secular function of the cycle monodromy; vanishes exactly where the
  // full system is singular.
  double residual(double lambda, double k1, double k2) const;
  // All lambda in [lo, hi] where the system is singular.
  std::vector<double> solve_lambda(double lo, double hi, double k1,
                                   double k2) const;
};

// Scenario detection, edge labeling and weight computation for the
// separatrix at `saddle_energy`.
struct ScenarioBuild {
  ScenarioParams params;
  QuantizationSystem system;
  std::vector<int> gamma_edges;  // gamma[j] <- graph edge index
};

ScenarioBuild build_scenario(const TrigSymbol& symbol, double saddle_energy,
                             double h, const RenormOptions& renorm = {},
                             const TracingOptions& tracing = {});

}  // namespace harperband
