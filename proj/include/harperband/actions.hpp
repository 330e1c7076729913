#pragma once

#include "harperband/classical.hpp"

namespace harperband {

// Closed-orbit invariants: principal action A = contour integral of p dx
// (signed, along the flow), action variable I = A / 2pi, Maslov index m.
struct CycleData {
  double A = 0.0;
  double I = 0.0;
  int m = 0;
};

// Separatrix edge weights: principal action B, renormalized time J, Maslov
// contribution m.
struct EdgeWeight {
  double B = 0.0;
  double J = 0.0;
  int m = 0;
};

struct RenormOptions {
  // Truncation distances from the endpoint saddles; the limit is taken by
  // polynomial extrapolation to zero.  Keep them a few tracing steps above
  // the polyline resolution, where J(cutoff) is smooth.
  std::vector<double> cutoffs = {3.2e-2, 1.6e-2, 8e-3, 4e-3};
  double tol = 1e-11;
};

// Integral of p dx along a traced path (R^2 lift), adaptively refined by
// chord bisection with Newton projection back onto {H = energy}.
double principal_action(const TrigSymbol& symbol, const std::vector<Vec2>& path,
                        double energy, double tol = 1e-11);

// Integral of dt = dl / |grad H| along a traced path (the time the
// Hamiltonian flow spends on it).  Diverges on separatrix edges; see
// renormalized_time for those.
double hamiltonian_time(const TrigSymbol& symbol, const std::vector<Vec2>& path,
                        double energy, double tol = 1e-11);

// Signed count of turning points (sign changes of dx/dt) along a path; a
// counterclockwise convex closed orbit has index 2.
int maslov_index(const std::vector<Vec2>& path, bool closed);

CycleData cycle_data(const TrigSymbol& symbol, const Trajectory& orbit,
                     double tol = 1e-11);

// Renormalized edge time at a fixed cutoff: the flow time along the edge
// truncated at distance `cutoff` from each endpoint saddle, plus the
// logarithmic counterterm (1/w)(log|a - V| + log(c_V)/2) per endpoint, with
// c_V the (absolute) cross product of the unit saddle asymptote directions.
double renormalized_time_at(const TrigSymbol& symbol,
                            const SeparatrixGraph& graph, int edge,
                            double cutoff, double tol = 1e-11);

// Cutoff-independent renormalized time: polynomial extrapolation of
// renormalized_time_at over opts.cutoffs to cutoff -> 0.
double renormalized_time(const TrigSymbol& symbol, const SeparatrixGraph& graph,
                         int edge, const RenormOptions& opts = {});

EdgeWeight edge_weight(const TrigSymbol& symbol, const SeparatrixGraph& graph,
                       int edge, const RenormOptions& opts = {});

}  // namespace harperband
