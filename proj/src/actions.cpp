#include "harperband/actions.hpp"

#include <cmath>

namespace harperband {

namespace {

// Projection onto {H = E} along grad H; leaves z untouched when the gradient
// is too small to be trustworthy (only happens within ~cutoff of a saddle,
// where the chord midpoint is already accurate).
void soft_project(const TrigSymbol& H, double E, Vec2& z) {
  const double min_g2 = 1e-16 * (1.0 + H.coeff_scale() * H.coeff_scale());
  for (int it = 0; it < 20; ++it) {
    double r = H.evaluate(Point2(z.p, z.x)) - E;
    Vec2 g = H.gradient(Point2(z.p, z.x));
    double g2 = g.dot(g);
    if (g2 < min_g2) return;
    Vec2 step = g * (r / g2);
    z -= step;
    if (step.norm() < 1e-14) return;
  }
}

struct SegmentIntegrand {
  // Value of the differential form density on the chord from a to b.
  virtual double chord(const TrigSymbol& H, const Vec2& a, const Vec2& b) const = 0;
  virtual ~SegmentIntegrand() = default;
};

struct PdxIntegrand final : SegmentIntegrand {
  double chord(const TrigSymbol&, const Vec2& a, const Vec2& b) const override {
    return 0.5 * (a.p + b.p) * (b.x - a.x);
  }
};

struct TimeIntegrand final : SegmentIntegrand {
  double chord(const TrigSymbol& H, const Vec2& a, const Vec2& b) const override {
    double ga = H.gradient(Point2(a.p, a.x)).norm();
    double gb = H.gradient(Point2(b.p, b.x)).norm();
    return 0.5 * (1.0 / ga + 1.0 / gb) * (b - a).norm();
  }
};

// Simpson-equivalent value on [a, b] via the projected midpoint.
double simpson(const TrigSymbol& H, double E, const SegmentIntegrand& f,
               const Vec2& a, const Vec2& b, Vec2& m_out) {
  Vec2 m = (a + b) * 0.5;
  soft_project(H, E, m);
  m_out = m;
  double I1 = f.chord(H, a, b);
  double I2 = f.chord(H, a, m) + f.chord(H, m, b);
  return I2 + (I2 - I1) / 3.0;
}

double refine(const TrigSymbol& H, double E, const SegmentIntegrand& f,
              const Vec2& a, const Vec2& b, const Vec2& m, double S_ab,
              double tol_seg, int depth) {
  Vec2 ml, mr;
  double S_l = simpson(H, E, f, a, m, ml);
  double S_r = simpson(H, E, f, m, b, mr);
  double err = S_l + S_r - S_ab;
  // Floor the acceptance threshold at the projection/rounding noise of the
  // midpoints (absolute, it does not shrink with the segment), below which
  // the error estimate just chatters.
  double tol_here = std::max(15.0 * tol_seg,
                             3e-14 * (1.0 + H.coeff_scale()));
  if (depth <= 0 || std::abs(err) <= tol_here) {
    return S_l + S_r + err / 15.0;
  }
  return refine(H, E, f, a, m, ml, S_l, 0.5 * tol_seg, depth - 1) +
         refine(H, E, f, m, b, mr, S_r, 0.5 * tol_seg, depth - 1);
}

double integrate_path(const TrigSymbol& H, const std::vector<Vec2>& path,
                      double E, const SegmentIntegrand& f, double tol) {
  if (path.size() < 2) throw Error("path integral needs at least 2 points");
  double total_len = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    total_len += (path[i + 1] - path[i]).norm();
  }
  if (total_len == 0.0) throw Error("path integral over a degenerate path");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec2 &a = path[i], &b = path[i + 1];
    Vec2 m;
    double S = simpson(H, E, f, a, b, m);
    double tol_seg = tol * (b - a).norm() / total_len;
    sum += refine(H, E, f, a, b, m, S, tol_seg, 12);
  }
  return sum;
}

}  // namespace

double principal_action(const TrigSymbol& symbol, const std::vector<Vec2>& path,
                        double energy, double tol) {
  return integrate_path(symbol, path, energy, PdxIntegrand{}, tol);
}

double hamiltonian_time(const TrigSymbol& symbol, const std::vector<Vec2>& path,
                        double energy, double tol) {
  return integrate_path(symbol, path, energy, TimeIntegrand{}, tol);
}

int maslov_index(const std::vector<Vec2>& path, bool closed) {
  std::vector<Vec2> tangents;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    Vec2 t = path[i + 1] - path[i];
    // Drop segments without x motion so the sign is well defined.
    if (std::abs(t.x) > 1e-12 * (t.norm() + 1e-300)) tangents.push_back(t);
  }
  if (tangents.size() < 2) return 0;
  int idx = 0;
  std::size_t last = closed ? tangents.size() : tangents.size() - 1;
  for (std::size_t i = 0; i < last; ++i) {
    const Vec2& a = tangents[i];
    const Vec2& b = tangents[(i + 1) % tangents.size()];
    if ((a.x > 0.0) != (b.x > 0.0)) {
      idx += cross_xp(a, b) > 0.0 ? 1 : -1;
    }
  }
  return idx;
}

CycleData cycle_data(const TrigSymbol& symbol, const Trajectory& orbit,
                     double tol) {
  if (!(orbit.lift[0] == 0 && orbit.lift[1] == 0)) {
    throw NotAClosedCycle("cycle_data requires a contractible orbit");
  }
  CycleData out;
  out.A = principal_action(symbol, orbit.samples, orbit.energy, tol);
  out.I = out.A / kTwoPi;
  out.m = maslov_index(orbit.samples, /*closed=*/true);
  return out;
}

namespace {

// Truncates an edge polyline at arc distance `cutoff` (measured as straight
// distance from the endpoint saddle lifts); the cut points are placed at
// exactly that distance by linear interpolation.
std::vector<Vec2> truncate_edge(const SeparatrixEdge& e, double cutoff) {
  const std::vector<Vec2>& poly = e.polyline;
  const Vec2 v_start = poly.front();
  const Vec2 v_end = poly.back();
  std::size_t i0 = 0;
  while (i0 + 1 < poly.size() && (poly[i0] - v_start).norm() < cutoff) ++i0;
  std::size_t i1 = poly.size() - 1;
  while (i1 > 0 && (poly[i1] - v_end).norm() < cutoff) --i1;
  if (i0 >= i1) throw OutOfRange("renormalized time cutoff swallows the edge");
  // poly[inner] is within the cutoff ball around v, poly[outer] outside (or
  // on it); bisect the chord for the crossing point.
  auto cut = [&](std::size_t inner, std::size_t outer, const Vec2& v) {
    Vec2 a = poly[inner], b = poly[outer];
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      ((a + (b - a) * mid - v).norm() < cutoff ? lo : hi) = mid;
    }
    return a + (b - a) * hi;
  };
  std::vector<Vec2> out;
  out.push_back(cut(i0 - 1, i0, v_start));
  for (std::size_t i = i0; i <= i1; ++i) out.push_back(poly[i]);
  out.push_back(cut(i1 + 1, i1, v_end));
  return out;
}

double saddle_cross(const SeparatrixVertex& v) {
  return std::abs(cross_xp(v.branch_dirs[3], v.branch_dirs[1]));
}

}  // namespace

double renormalized_time_at(const TrigSymbol& symbol,
                            const SeparatrixGraph& graph, int edge,
                            double cutoff, double tol) {
  const SeparatrixEdge& e = graph.edges.at(edge);
  const SeparatrixVertex& vs = graph.vertices.at(e.start_vertex);
  const SeparatrixVertex& ve = graph.vertices.at(e.end_vertex);
  auto path = truncate_edge(e, cutoff);
  double t = hamiltonian_time(symbol, path, graph.energy, tol);
  double ds = (path.front() - e.polyline.front()).norm();
  double de = (path.back() - e.polyline.back()).norm();
  t += (std::log(ds) + 0.5 * std::log(saddle_cross(vs))) / vs.saddle.w;
  t += (std::log(de) + 0.5 * std::log(saddle_cross(ve))) / ve.saddle.w;
  return t;
}

double renormalized_time(const TrigSymbol& symbol, const SeparatrixGraph& graph,
                         int edge, const RenormOptions& opts) {
  const auto& ds = opts.cutoffs;
  if (ds.empty()) throw Error("renormalized_time: no cutoffs given");
  std::vector<double> vals(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    vals[i] = renormalized_time_at(symbol, graph, edge, ds[i], opts.tol);
  }
  // Neville extrapolation of J(delta) to delta = 0.
  std::vector<double> p = vals;
  for (std::size_t lvl = 1; lvl < ds.size(); ++lvl) {
    for (std::size_t i = 0; i + lvl < ds.size(); ++i) {
      p[i] = (ds[i + lvl] * p[i] - ds[i] * p[i + 1]) / (ds[i + lvl] - ds[i]);
    }
  }
  return p[0];
}

EdgeWeight edge_weight(const TrigSymbol& symbol, const SeparatrixGraph& graph,
                       int edge, const RenormOptions& opts) {
  const SeparatrixEdge& e = graph.edges.at(edge);
  EdgeWeight w;
  w.B = principal_action(symbol, e.polyline, graph.energy, opts.tol);
  w.J = renormalized_time(symbol, graph, edge, opts);
  w.m = maslov_index(e.polyline, /*closed=*/false);
  return w;
}

}  // namespace harperband
