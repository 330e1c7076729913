#pragma once

#include <array>
#include <optional>
#include <vector>

#include "harperband/symbol.hpp"

namespace harperband {

enum class CriticalKind { Minimum, Maximum, Saddle };

struct CriticalPoint {
  Point2 location;
  CriticalKind kind = CriticalKind::Saddle;
  double value = 0.0;
  Mat2 hessian;
  double w = 0.0;  // sqrt(|det H''|), saddles only
};

// A traced connected component of a level set.  `samples` is the continuous
// R^2 lift starting from a representative in [0, 2pi)^2.
struct Trajectory {
  double energy = 0.0;
  std::vector<Vec2> samples;
  bool closed = false;
  std::array<int, 2> lift = {0, 0};  // (l_p, l_x): net winding over one period
};

struct TracingOptions {
  double step = 2e-3;            // arc-length predictor step
  double newton_tol = 1e-11;     // |H - E| projection tolerance (x scale)
  double path_budget = 64.0 * kTwoPi;
  int seed_grid = 96;
};

// A separatrix edge: a trajectory between saddle branches, flow-oriented.
struct SeparatrixEdge {
  int start_vertex = 0;
  int end_vertex = 0;
  int start_branch = 0;          // local index 1..4 at the start vertex
  int end_branch = 0;            // local index 1..4 at the end vertex
  std::array<int, 2> lift = {0, 0};  // end point = pos(end_vertex) + 2pi*lift
  std::vector<Vec2> polyline;    // R^2 lift from the start saddle
};

struct SeparatrixVertex {
  CriticalPoint saddle;
  // Unit directions of the four local branches indexed 1..4 (entry 0 unused),
  // in (p, x) components.
  std::array<Vec2, 5> branch_dirs;
  // Sign of (H - E) inside the quadrant spanned by branches 1 and 3.
  int quadrant13_sign = 0;
  bool perturbed_indexing = false;  // tie on the vertical broken by rotation
};

struct SeparatrixGraph {
  double energy = 0.0;
  std::vector<SeparatrixVertex> vertices;
  std::vector<SeparatrixEdge> edges;
};

enum class ReebEdgeKind { Finite, Infinite };

struct ReebNode {
  double energy = 0.0;
  bool is_branch = false;  // saddle level
};

struct ReebEdge {
  double e_lo = 0.0;
  double e_hi = 0.0;
  ReebEdgeKind kind = ReebEdgeKind::Finite;
  std::array<int, 2> direction = {0, 0};  // primitive d, infinite edges only
};

struct ReebGraph {
  std::vector<ReebNode> nodes;   // sorted by energy
  std::vector<ReebEdge> edges;

  int edges_crossing(double energy) const;
};

std::vector<CriticalPoint> find_critical_points(const TrigSymbol& symbol);

std::vector<Trajectory> trace_level_set(const TrigSymbol& symbol, double energy,
                                        const TracingOptions& opts = {});

SeparatrixGraph separatrix_graph(const TrigSymbol& symbol, double saddle_energy,
                                 const TracingOptions& opts = {});

ReebGraph reeb_graph(const TrigSymbol& symbol, const TracingOptions& opts = {});

// Tunes the cosine amplitude of `key` within [amp_lo, amp_hi] so that the two
// saddles tracked from the given seed locations attain equal values.
TrigSymbol equalize_saddles(const TrigSymbol& symbol, const Freq& key,
                            const Point2& saddle_a, const Point2& saddle_b,
                            double amp_lo, double amp_hi, double tol = 1e-10);

std::string separatrix_to_json(const SeparatrixGraph& graph,
                               int polyline_stride = 16);
std::string reeb_to_json(const ReebGraph& graph);

}  // namespace harperband
