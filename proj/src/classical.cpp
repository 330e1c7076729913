#include "harperband/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "harperband/numerics.hpp"

namespace harperband {

namespace {

double eval(const TrigSymbol& H, const Vec2& z) {
  return H.evaluate(Point2(z.p, z.x));
}
Vec2 grad(const TrigSymbol& H, const Vec2& z) {
  return H.gradient(Point2(z.p, z.x));
}
Mat2 hess(const TrigSymbol& H, const Vec2& z) {
  return H.hessian(Point2(z.p, z.x));
}

// Hamiltonian flow direction (p_dot, x_dot) = (-H_x, H_p).
Vec2 flow(const TrigSymbol& H, const Vec2& z) {
  Vec2 g = grad(H, z);
  return {-g.x, g.p};
}

// Newton for grad H = 0; returns nullopt if it leaves the basin or stalls.
std::optional<Vec2> newton_critical(const TrigSymbol& H, Vec2 z) {
  for (int it = 0; it < 60; ++it) {
    Vec2 g = grad(H, z);
    Mat2 Hs = hess(H, z);
    double det = Hs.det();
    if (std::abs(det) < 1e-14 * (1.0 + H.coeff_scale() * H.coeff_scale())) {
      return std::nullopt;
    }
    Vec2 step{(-g.p * Hs.xx + g.x * Hs.px) / det,
              (-g.x * Hs.pp + g.p * Hs.px) / det};
    z += step;
    if (step.norm() < 1e-13 && g.norm() < 1e-11 * (1.0 + H.coeff_scale())) {
      return z;
    }
    if (step.norm() > 2.0) return std::nullopt;  // left the cell, let another seed find it
  }
  return std::nullopt;
}

// Projects z back onto {H = E} along grad H.
bool project_to_level(const TrigSymbol& H, double E, Vec2& z, double tol,
                      double min_grad) {
  for (int it = 0; it < 30; ++it) {
    double r = eval(H, z) - E;
    if (std::abs(r) < tol) return true;
    Vec2 g = grad(H, z);
    double g2 = g.dot(g);
    if (g2 < min_grad * min_grad) return false;
    z -= g * (r / g2);
  }
  return std::abs(eval(H, z) - E) < tol;
}

struct RawTrace {
  std::vector<Vec2> pts;  // R^2 lift
  bool returned = false;
  std::array<int, 2> lift = {0, 0};
};

// Traces {H = E} through z0 along the flow until it returns to z0 on the
// torus (possibly with winding) or the budget runs out.
RawTrace trace_component(const TrigSymbol& H, double E, Vec2 z0,
                         const TracingOptions& opts) {
  const double ftol = opts.newton_tol * (1.0 + H.coeff_scale());
  const double min_grad = 1e-7 * (1.0 + H.coeff_scale());
  RawTrace out;
  Vec2 z = z0;
  out.pts.push_back(z);
  double travelled = 0.0;
  while (travelled < opts.path_budget) {
    Vec2 v = flow(H, z);
    double vn = v.norm();
    if (vn < min_grad) {
      throw NearCritical("level-set tracing ran into a near-critical point");
    }
    Vec2 pred = z + v * (opts.step / vn);
    // Heun-style predictor, then Newton projection back to the level set.
    Vec2 v2 = flow(H, pred);
    double v2n = v2.norm();
    if (v2n > min_grad) {
      pred = z + (v / vn + v2 / v2n) * (0.5 * opts.step);
    }
    if (!project_to_level(H, E, pred, ftol, min_grad)) {
      throw NearCritical("level-set projection lost the gradient");
    }
    travelled += (pred - z).norm();
    z = pred;
    out.pts.push_back(z);
    if (travelled > 3.0 * opts.step && torus_dist(z, z0) < 0.75 * opts.step) {
      // Close up exactly: land on the lift of z0 nearest to z.
      Vec2 d = z - z0;
      out.lift = {int(std::lround(d.p / kTwoPi)), int(std::lround(d.x / kTwoPi))};
      out.pts.back() = z0 + Vec2(kTwoPi * out.lift[0], kTwoPi * out.lift[1]);
      out.returned = true;
      return out;
    }
  }
  throw TracingDivergence("level-set component exceeded the path budget");
}

bool covered_by(const std::vector<Trajectory>& found, const Vec2& z,
                double radius) {
  for (const auto& t : found) {
    for (std::size_t i = 0; i < t.samples.size(); i += 4) {
      if (torus_dist(t.samples[i], z) < radius) return true;
    }
  }
  return false;
}

std::array<int, 2> primitive(std::array<int, 2> v) {
  int g = std::gcd(std::abs(v[0]), std::abs(v[1]));
  if (g > 1) return {v[0] / g, v[1] / g};
  return v;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const TrigSymbol& symbol) {
  if (symbol.empty()) throw Error("find_critical_points: empty symbol");
  const int n = 64;
  const double scale2 = (1.0 + symbol.coeff_scale()) * (1.0 + symbol.coeff_scale());
  std::vector<CriticalPoint> out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec2 seed{kTwoPi * i / n, kTwoPi * j / n};
      auto z = newton_critical(symbol, seed);
      if (!z) continue;
      Point2 loc(z->p, z->x);
      bool dup = false;
      for (const auto& c : out) {
        if (torus_dist(loc.vec(), c.location.vec()) < 1e-6) { dup = true; break; }
      }
      if (dup) continue;
      CriticalPoint c;
      c.location = loc;
      c.value = symbol.evaluate(loc);
      c.hessian = symbol.hessian(loc);
      double det = c.hessian.det();
      if (std::abs(det) < 1e-8 * scale2) {
        throw DegenerateCritical("critical point with |det H''| ~ " +
                                 std::to_string(det));
      }
      if (det < 0.0) {
        c.kind = CriticalKind::Saddle;
        c.w = std::sqrt(-det);
      } else {
        c.kind = c.hessian.trace() > 0.0 ? CriticalKind::Minimum
                                         : CriticalKind::Maximum;
      }
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.location.x != b.location.x) return a.location.x < b.location.x;
    return a.location.p < b.location.p;
  });
  return out;
}

std::vector<Trajectory> trace_level_set(const TrigSymbol& symbol, double energy,
                                        const TracingOptions& opts) {
  const double ftol = opts.newton_tol * (1.0 + symbol.coeff_scale());
  const double min_grad = 1e-6 * (1.0 + symbol.coeff_scale());
  std::vector<Trajectory> out;
  const int n = opts.seed_grid;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec2 z{kTwoPi * i / n, kTwoPi * j / n};
      // Only seed from cells the level set actually passes through.
      if (std::abs(eval(symbol, z) - energy) >
          2.0 * symbol.coeff_scale() * kTwoPi / n) {
        continue;
      }
      if (!project_to_level(symbol, energy, z, ftol, min_grad)) continue;
      if (covered_by(out, z, 3.0 * opts.step)) continue;
      RawTrace raw = trace_component(symbol, energy, z, opts);
      Trajectory t;
      t.energy = energy;
      t.samples = std::move(raw.pts);
      t.lift = raw.lift;
      t.closed = (raw.lift[0] == 0 && raw.lift[1] == 0);
      out.push_back(std::move(t));
    }
  }
  if (out.empty()) {
    throw EmptyLevelSet("level set is empty at E = " + std::to_string(energy));
  }
  return out;
}

namespace {

// Eigen-directions of the linearized flow at a saddle.  L = [[-H_px, -H_xx],
// [H_pp, H_px]]; the unstable line has the positive eigenvalue.
void saddle_lines(const Mat2& Hs, Vec2& unstable, Vec2& stable) {
  double a = -Hs.px, b = -Hs.xx, c = Hs.pp, d = Hs.px;
  // trace is zero; eigenvalues +-sqrt(-det Hs).
  double lam = std::sqrt(-(a * d - b * c));
  auto eigvec = [&](double l) {
    Vec2 v1{b, l - a}, v2{l - d, c};
    return (v1.norm() > v2.norm() ? v1 : v2).normalized();
  };
  unstable = eigvec(lam);
  stable = eigvec(-lam);
}

double angle_xp(const Vec2& v) { return std::atan2(v.p, v.x); }

Vec2 rotate(const Vec2& v, double ang) {
  double cs = std::cos(ang), sn = std::sin(ang);
  // Rotation is CCW in the (x, p) drawing plane.
  return {sn * v.x + cs * v.p, cs * v.x - sn * v.p};
}

// Assigns the local branch indexing at a saddle.  Branches 1 and 2 are the
// two incoming (stable) ends, 3 and 4 the outgoing ends.  Branch 1 is the
// stable end pointing into the upper half plane (angle in [0, pi) after an
// infinitesimal tie-breaking rotation), and branch 3 is the outgoing end
// clockwise-adjacent to it, so that the CCW sector from 3 to 1 is one of the
// four local quadrants.
void index_branches(SeparatrixVertex& v) {
  Vec2 u, s;
  saddle_lines(v.saddle.hessian, u, s);
  auto ccw_span = [](const Vec2& a, const Vec2& b) {
    double d = angle_xp(b) - angle_xp(a);
    if (d <= 0.0) d += kTwoPi;
    return d;
  };
  if (std::min(std::abs(u.p), std::abs(s.p)) < 1e-9) {
    // A horizontal branch makes the half-plane test ambiguous.
    u = rotate(u, 1e-6);
    s = rotate(s, 1e-6);
    v.perturbed_indexing = true;
  }
  Vec2 v1 = s.p > 0.0 ? s : s * -1.0;
  Vec2 v3 = (ccw_span(u, v1) < kPi) ? u : u * -1.0;
  v.branch_dirs = {Vec2{}, v1, v1 * -1.0, v3, v3 * -1.0};
}

}  // namespace

SeparatrixGraph separatrix_graph(const TrigSymbol& symbol, double saddle_energy,
                                 const TracingOptions& opts) {
  auto crits = find_critical_points(symbol);
  SeparatrixGraph g;
  g.energy = saddle_energy;
  const double vtol = 1e-8 * (1.0 + symbol.coeff_scale());
  for (const auto& c : crits) {
    if (c.kind == CriticalKind::Saddle &&
        std::abs(c.value - saddle_energy) < vtol) {
      SeparatrixVertex v;
      v.saddle = c;
      index_branches(v);
      // Sign of H - E in the quadrant between branches 1 and 3 (sampled on
      // the bisector).
      Vec2 bis = (v.branch_dirs[3] + v.branch_dirs[1]).normalized();
      double probe = eval(symbol, c.location.vec() + bis * 1e-3) - saddle_energy;
      v.quadrant13_sign = probe > 0.0 ? 1 : -1;
      g.vertices.push_back(std::move(v));
    }
  }
  if (g.vertices.empty()) {
    throw NotASaddleValue("no saddle at energy " + std::to_string(saddle_energy));
  }

  const double ftol = opts.newton_tol * (1.0 + symbol.coeff_scale());
  const double min_grad = 1e-10 * (1.0 + symbol.coeff_scale());
  const double offset = 1e-4;
  const double capture = 1e-5;

  for (int vi = 0; vi < int(g.vertices.size()); ++vi) {
    const auto& v = g.vertices[vi];
    for (int br : {3, 4}) {  // outgoing branches
      Vec2 z = v.saddle.location.vec() + v.branch_dirs[br] * offset;
      if (!project_to_level(symbol, saddle_energy, z, ftol, min_grad)) {
        throw TracingDivergence("could not seed a separatrix branch");
      }
      SeparatrixEdge e;
      e.start_vertex = vi;
      e.start_branch = br;
      e.polyline.push_back(v.saddle.location.vec());
      e.polyline.push_back(z);
      double travelled = offset;
      double step = opts.step;
      bool done = false;
      while (!done) {
        if (travelled > opts.path_budget) {
          throw TracingDivergence("separatrix edge exceeded the path budget");
        }
        // Shrink the step near any saddle so the capture test can fire.
        double dmin = 1e9;
        int nearest = -1;
        for (int wi = 0; wi < int(g.vertices.size()); ++wi) {
          double d = torus_dist(z, g.vertices[wi].saddle.location.vec());
          if (d < dmin) { dmin = d; nearest = wi; }
        }
        if (dmin < capture && travelled > 4.0 * offset) {
          // Snap onto the saddle's nearest lift.
          const Vec2 wpos = g.vertices[nearest].saddle.location.vec();
          Vec2 d = z - wpos;
          e.lift = {int(std::lround(d.p / kTwoPi)), int(std::lround(d.x / kTwoPi))};
          Vec2 snapped = wpos + Vec2(kTwoPi * e.lift[0], kTwoPi * e.lift[1]);
          e.end_vertex = nearest;
          // Incoming branch: best alignment with the approach direction.
          Vec2 appr = (z - snapped).normalized() * -1.0;  // towards the saddle
          Vec2 in1 = g.vertices[nearest].branch_dirs[1];
          // Approaching along -dir of the incoming branch ray (which points
          // away from the saddle): the matching branch maximizes dot with -appr.
          e.end_branch = (in1.dot(appr * -1.0) >
                          g.vertices[nearest].branch_dirs[2].dot(appr * -1.0))
                             ? 1 : 2;
          e.polyline.push_back(snapped);
          done = true;
          break;
        }
        double local_step = std::min(step, std::max(dmin / 4.0, capture / 2.0));
        Vec2 fv = flow(symbol, z);
        double fn = fv.norm();
        if (fn < min_grad) {
          throw NearCritical("separatrix tracing stalled off-saddle");
        }
        Vec2 pred = z + fv * (local_step / fn);
        Vec2 f2 = flow(symbol, pred);
        double f2n = f2.norm();
        if (f2n > min_grad) pred = z + (fv / fn + f2 / f2n) * (0.5 * local_step);
        if (!project_to_level(symbol, saddle_energy, pred, ftol, min_grad)) {
          throw NearCritical("separatrix projection lost the gradient");
        }
        travelled += (pred - z).norm();
        z = pred;
        e.polyline.push_back(z);
      }
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

int ReebGraph::edges_crossing(double energy) const {
  int n = 0;
  for (const auto& e : edges) {
    if (e.e_lo < energy && energy < e.e_hi) ++n;
  }
  return n;
}

ReebGraph reeb_graph(const TrigSymbol& symbol, const TracingOptions& opts) {
  auto crits = find_critical_points(symbol);
  const double vtol = 1e-9 * (1.0 + symbol.coeff_scale());
  std::vector<double> values;
  std::vector<bool> is_branch;
  for (const auto& c : crits) {
    bool merged = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (std::abs(values[i] - c.value) < vtol) {
        if (c.kind == CriticalKind::Saddle) is_branch[i] = true;
        merged = true;
        break;
      }
    }
    if (!merged) {
      values.push_back(c.value);
      is_branch.push_back(c.kind == CriticalKind::Saddle);
    }
  }
  ReebGraph g;
  for (std::size_t i = 0; i < values.size(); ++i) {
    g.nodes.push_back({values[i], bool(is_branch[i])});
  }
  std::sort(g.nodes.begin(), g.nodes.end(),
            [](const ReebNode& a, const ReebNode& b) { return a.energy < b.energy; });
  for (std::size_t i = 0; i + 1 < g.nodes.size(); ++i) {
    double lo = g.nodes[i].energy, hi = g.nodes[i + 1].energy;
    double mid = 0.5 * (lo + hi);
    auto comps = trace_level_set(symbol, mid, opts);
    for (const auto& t : comps) {
      ReebEdge e;
      e.e_lo = lo;
      e.e_hi = hi;
      if (t.closed) {
        e.kind = ReebEdgeKind::Finite;
      } else {
        e.kind = ReebEdgeKind::Infinite;
        e.direction = primitive(t.lift);
      }
      g.edges.push_back(e);
    }
  }
  return g;
}

TrigSymbol equalize_saddles(const TrigSymbol& symbol, const Freq& key,
                            const Point2& saddle_a, const Point2& saddle_b,
                            double amp_lo, double amp_hi, double tol) {
  auto value_at = [&](const TrigSymbol& H, const Point2& seed) {
    auto z = newton_critical(H, seed.vec());
    if (!z) throw ConvergenceFailure("equalize_saddles lost a saddle");
    return eval(H, *z);
  };
  auto f = [&](double amp) {
    TrigSymbol H = symbol.with_cosine(key, amp);
    return value_at(H, saddle_a) - value_at(H, saddle_b);
  };
  double amp = brent_root(f, amp_lo, amp_hi, tol);
  return symbol.with_cosine(key, amp);
}

std::string separatrix_to_json(const SeparatrixGraph& graph, int polyline_stride) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["energy"] = graph.energy;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : graph.vertices) {
    nlohmann::json jv;
    jv["p"] = v.saddle.location.p;
    jv["x"] = v.saddle.location.x;
    jv["w"] = v.saddle.w;
    jv["quadrant13_sign"] = v.quadrant13_sign;
    nlohmann::json dirs = nlohmann::json::array();
    for (int b = 1; b <= 4; ++b) {
      dirs.push_back({{"p", v.branch_dirs[b].p}, {"x", v.branch_dirs[b].x}});
    }
    jv["branch_dirs"] = dirs;
    j["vertices"].push_back(jv);
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : graph.edges) {
    nlohmann::json je;
    je["start_vertex"] = e.start_vertex;
    je["end_vertex"] = e.end_vertex;
    je["start_branch"] = e.start_branch;
    je["end_branch"] = e.end_branch;
    je["lift"] = {e.lift[0], e.lift[1]};
    nlohmann::json poly = nlohmann::json::array();
    int stride = std::max(1, polyline_stride);
    for (std::size_t i = 0; i < e.polyline.size(); i += stride) {
      poly.push_back({e.polyline[i].p, e.polyline[i].x});
    }
    if ((e.polyline.size() - 1) % stride != 0) {
      poly.push_back({e.polyline.back().p, e.polyline.back().x});
    }
    je["polyline"] = poly;
    j["edges"].push_back(je);
  }
  return j.dump(2);
}

std::string reeb_to_json(const ReebGraph& graph) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : graph.nodes) {
    j["nodes"].push_back({{"energy", n.energy}, {"is_branch", n.is_branch}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : graph.edges) {
    nlohmann::json je;
    je["e_lo"] = e.e_lo;
    je["e_hi"] = e.e_hi;
    je["kind"] = e.kind == ReebEdgeKind::Finite ? "finite" : "infinite";
    if (e.kind == ReebEdgeKind::Infinite) {
      je["direction"] = {e.direction[0], e.direction[1]};
    }
    j["edges"].push_back(je);
  }
  return j.dump(2);
}

}  // namespace harperband
