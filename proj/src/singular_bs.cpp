#include "harperband/singular_bs.hpp"

#include <algorithm>
#include <cmath>

#include "harperband/numerics.hpp"
#include "harperband/specfun.hpp"

namespace harperband {

Complex script_E(double eps, double h) {
  double mod = 1.0 / std::sqrt(1.0 + std::exp(-kTwoPi * eps));
  double phase = -arg_gamma_half(eps) - eps * std::log(h);
  return std::polar(mod, phase);
}

namespace {

double clamp1(double v) { return std::min(1.0, std::max(-1.0, v)); }

double sum_B(const std::vector<EdgeWeight>& g) {
  double s = 0.0;
  for (const auto& e : g) s += e.B;
  return s;
}
double sum_J(const std::vector<EdgeWeight>& g) {
  double s = 0.0;
  for (const auto& e : g) s += e.J;
  return s;
}
int sum_m(const std::vector<EdgeWeight>& g) {
  int s = 0;
  for (const auto& e : g) s += e.m;
  return s;
}

}  // namespace

double ScenarioParams::N(double lambda0) const {
  double lh = std::log(h);
  switch (kind) {
    case Scenario::Y:
      return sum_B(gamma) / (2.0 * h) +
             (lambda0 * sum_J(gamma) + kPi * sum_m(gamma)) / 2.0 -
             lambda0 * lh / w - arg_gamma_half(lambda0 / w);
    case Scenario::X:
      return sum_B(gamma) / (2.0 * h) + lambda0 * sum_J(gamma) / 2.0 +
             kPi * sum_m(gamma) / 2.0 - arg_gamma_half(lambda0 / w) -
             arg_gamma_half(lambda0 / wt) -
             lambda0 * (1.0 / w + 1.0 / wt) * lh;
    case Scenario::Deg:
      return sum_B(gamma) / (2.0 * h) + lambda0 * sum_J(gamma) / 2.0 +
             kPi * sum_m(gamma) / 2.0 -
             lambda0 * (1.0 / w + 1.0 / wt) * lh -
             arg_gamma_half(lambda0 / w) + arg_gamma_half(-lambda0 / wt);
  }
  return 0.0;
}

double ScenarioParams::Delta(double lambda0) const {
  if (kind != Scenario::Y) throw ScenarioUnsupported("Delta is Y-only");
  return (gamma[1].B - gamma[0].B) / (2.0 * h) +
         lambda0 * (gamma[1].J - gamma[0].J) / 2.0;
}

double ScenarioParams::Delta1(double lambda0) const {
  switch (kind) {
    case Scenario::X:
      return ((gamma[0].B + gamma[1].B) - (gamma[2].B + gamma[3].B)) / (2.0 * h) +
             lambda0 * ((gamma[0].J + gamma[1].J) - (gamma[2].J + gamma[3].J)) / 2.0;
    case Scenario::Deg:
      return ((gamma[0].B + gamma[3].B) - (gamma[1].B + gamma[2].B)) / (2.0 * h) +
             lambda0 * ((gamma[0].J + gamma[3].J) - (gamma[1].J + gamma[2].J)) / 2.0;
    default:
      throw ScenarioUnsupported("Delta1 needs the X or Deg scenario");
  }
}

double ScenarioParams::Delta2(double lambda0) const {
  switch (kind) {
    case Scenario::X:
      return ((gamma[1].B + gamma[3].B) - (gamma[0].B + gamma[2].B)) / (2.0 * h) +
             lambda0 * ((gamma[1].J + gamma[3].J) - (gamma[0].J + gamma[2].J)) / 2.0;
    case Scenario::Deg:
      return ((gamma[2].B + gamma[3].B) - (gamma[0].B + gamma[1].B)) / (2.0 * h) +
             lambda0 * ((gamma[2].J + gamma[3].J) - (gamma[0].J + gamma[1].J)) / 2.0;
    default:
      throw ScenarioUnsupported("Delta2 needs the X or Deg scenario");
  }
}

WidthEstimate scenario_widths(const ScenarioParams& sp, double lambda0) {
  WidthEstimate out;
  double alh = std::abs(std::log(sp.h));
  switch (sp.kind) {
    case Scenario::Y: {
      double q = 1.0 / std::sqrt(1.0 + std::exp(-kTwoPi * lambda0 / sp.w));
      double pref = 2.0 * sp.w * sp.h / alh;
      out.band = pref * std::asin(clamp1(q));
      out.gap1 = out.gap2 = pref * std::acos(clamp1(q));
      return out;
    }
    case Scenario::X: {
      double D = std::sqrt((1.0 + std::exp(-kTwoPi * lambda0 / sp.w)) *
                           (1.0 + std::exp(-kTwoPi * lambda0 / sp.wt)));
      double X = std::exp(-(1.0 / sp.w + 1.0 / sp.wt) * lambda0 * kPi) *
                 std::cos(sp.Delta1(lambda0));
      double pref = sp.w * sp.wt * sp.h / ((sp.w + sp.wt) * alh);
      out.band = pref * (std::asin(clamp1((1.0 + X) / D)) +
                         std::asin(clamp1((1.0 - X) / D)));
      out.gap1 = 2.0 * pref * std::acos(clamp1((1.0 + X) / D));
      out.gap2 = 2.0 * pref * std::acos(clamp1((1.0 - X) / D));
      return out;
    }
    case Scenario::Deg: {
      double a = std::exp(-kPi * lambda0 / sp.w);
      double b = std::exp(-kPi * lambda0 / sp.wt);
      double D = std::sqrt((1.0 + a * a) * (1.0 + b * b));
      double pref = 2.0 * sp.w * sp.wt * sp.h / ((sp.w + sp.wt) * alh);
      out.band = pref * std::asin(clamp1((a + b) / D));
      out.gap1 = out.gap2 = pref * std::acos(clamp1((a + b) / D));
      return out;
    }
  }
  return out;
}

std::array<double, 2> kmax(const ScenarioParams& sp, double lambda0) {
  if (sp.kind != Scenario::Deg) {
    throw ScenarioUnsupported("kmax is defined for the Deg scenario");
  }
  auto frac = [](double v) { return v - std::floor(v); };
  return {kTwoPi * frac(sp.Delta1(lambda0) / kTwoPi + 0.5) - kPi,
          kTwoPi * frac(sp.Delta2(lambda0) / kTwoPi + 0.5) - kPi};
}

std::vector<double> dispersion_mu(const ScenarioParams& sp, double lambda0,
                                  double k1, double k2, double mu_lo,
                                  double mu_hi) {
  double lh = std::log(sp.h);  // negative
  double pref, arc;
  switch (sp.kind) {
    case Scenario::Y: {
      pref = sp.w / lh;
      double q = std::cos(k2 - sp.Delta(lambda0)) /
                 std::sqrt(1.0 + std::exp(-kTwoPi * lambda0 / sp.w));
      arc = std::acos(clamp1(q));
      break;
    }
    case Scenario::X: {
      pref = sp.w * sp.wt / ((sp.w + sp.wt) * lh);
      double D = std::sqrt((1.0 + std::exp(-kTwoPi * lambda0 / sp.w)) *
                           (1.0 + std::exp(-kTwoPi * lambda0 / sp.wt)));
      double q = (std::cos(k2 - sp.Delta2(lambda0)) -
                  std::exp(-(1.0 / sp.w + 1.0 / sp.wt) * lambda0 * kPi) *
                      std::cos(sp.Delta1(lambda0))) /
                 D;
      arc = std::acos(clamp1(q));
      break;
    }
    case Scenario::Deg: {
      pref = sp.w * sp.wt / ((sp.w + sp.wt) * lh);
      double a = std::exp(-kPi * lambda0 / sp.w);
      double b = std::exp(-kPi * lambda0 / sp.wt);
      double D = std::sqrt((1.0 + a * a) * (1.0 + b * b));
      double q = (a * std::cos(k1 - sp.Delta1(lambda0)) +
                  b * std::cos(k2 - sp.Delta2(lambda0))) /
                 D;
      arc = std::acos(clamp1(q));
      break;
    }
    default:
      return {};
  }
  double N = sp.N(lambda0);
  std::vector<double> out;
  // mu = pref * (N +- arc + 2 pi n); pref < 0, so the n window flips.
  for (int s : {+1, -1}) {
    double base = N + s * arc;
    double lo_t = mu_hi / pref, hi_t = mu_lo / pref;  // t = base + 2 pi n
    int n_min = int(std::ceil((lo_t - base) / kTwoPi - 1e-12));
    int n_max = int(std::floor((hi_t - base) / kTwoPi + 1e-12));
    for (int n = n_min; n <= n_max; ++n) {
      double mu = pref * (base + kTwoPi * n);
      if (mu >= mu_lo && mu <= mu_hi) out.push_back(mu);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Scenario quantization systems.
// ---------------------------------------------------------------------------

Eigen::Matrix2cd QuantizationSystem::scatter(int v, double lambda) const {
  const QVertex& q = vertices[v];
  const double e = eps(v, lambda);
  // Moduli: the channels adjacent through the sectors where sign(H - E)
  // matches lambda carry the transmission amplitude.
  double mu = 1.0 / std::sqrt(1.0 + std::exp(-kTwoPi * e));
  double mu13 = q.q13 > 0 ? mu : mu * std::exp(-e * kPi);
  double mu14 = q.q13 > 0 ? mu * std::exp(-e * kPi) : mu;
  // Phases: common script-E phase, plus e^{-i pi/2} per signed corner on the
  // x-reversing channel pair (the two pairs always differ by exactly +-i,
  // which is what unitarity of the 2x2 block requires).
  double phi = -arg_gamma_half(e) - e * std::log(h);
  Complex c13 = std::polar(mu13, phi - kPi / 2.0 * q.corner13);
  Complex c14 = std::polar(mu14, phi - kPi / 2.0 * q.corner14);
  Eigen::Matrix2cd M;
  // rows: out3, out4; cols: in1, in2
  M << c13, c14, c14, c13;
  return M;
}

Eigen::MatrixXcd QuantizationSystem::matrix(double lambda, double k1,
                                            double k2) const {
  const int V = int(vertices.size());
  if (int(edges.size()) != 2 * V) {
    throw ScenarioUnsupported("quantization system is not square");
  }
  // Unknowns per vertex: in1, in2, out3, out4 at columns 4v..4v+3.
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(4 * V, 4 * V);
  int row = 0;
  for (int v = 0; v < V; ++v) {
    Eigen::Matrix2cd S = scatter(v, lambda);
    for (int o = 0; o < 2; ++o, ++row) {
      M(row, 4 * v + 2 + o) = 1.0;
      M(row, 4 * v + 0) = -S(o, 0);
      M(row, 4 * v + 1) = -S(o, 1);
    }
  }
  for (std::size_t e = 0; e < edges.size(); ++e, ++row) {
    const QEdge& q = edges[e];
    M(row, 4 * q.head + (q.in_branch - 1)) = 1.0;
    M(row, 4 * q.tail + 2 + (q.out_branch - 3)) =
        -std::polar(1.0, edge_phase(int(e), lambda, k1, k2));
  }
  return M;
}

double QuantizationSystem::det_abs(double lambda, double k1, double k2) const {
  return std::abs(matrix(lambda, k1, k2).determinant());
}

// The system is singular exactly when the cycle monodromy M (a product of the
// unitary 2x2 scattering and transfer blocks) has eigenvalue 1.  With
// eigenvalues e^{i mu1}, e^{i mu2} and mu1 + mu2 = delta tracked as a smooth
// real function, 2 cos(delta/2) - Re(e^{-i delta/2} tr M) is real-analytic in
// lambda and vanishes iff some mu = 0 (mod 2 pi).
double QuantizationSystem::residual(double lambda, double k1, double k2) const {
  const int V = int(vertices.size());
  if (V < 1 || V > 2 || int(edges.size()) != 2 * V) {
    throw ScenarioUnsupported("monodromy reduction needs 1 or 2 saddles");
  }
  // Transfer blocks: ins of `head` from outs of the other (or same) vertex.
  std::array<Eigen::Matrix2cd, 2> P;
  std::array<int, 2> tail_of{-1, -1};
  P[0].setZero();
  P[1].setZero();
  double delta = 0.0;
  std::array<std::array<bool, 2>, 2> filled{{{false, false}, {false, false}}};
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const QEdge& q = edges[e];
    double th = edge_phase(int(e), lambda, k1, k2);
    P[q.head](q.in_branch - 1, q.out_branch - 3) = std::polar(1.0, th);
    filled[q.head][q.in_branch - 1] = true;
    if (tail_of[q.head] < 0) tail_of[q.head] = q.tail;
    if (tail_of[q.head] != q.tail) {
      throw ScenarioUnsupported("mixed-tail transfer block");
    }
    delta += th;
  }
  for (int v = 0; v < V; ++v) {
    if (!filled[v][0] || !filled[v][1]) {
      throw ScenarioUnsupported("incoming branch without an edge");
    }
    double e = eps(v, lambda);
    delta += 2.0 * (-arg_gamma_half(e) - e * std::log(h));
    // det of the scattering block is -+ e^{2 i phi} depending on which
    // channel pair carries the corner.
    if (vertices[v].corner13 != 0) delta += kPi;
    if (std::abs(P[v](0, 0)) == 0.0) delta += kPi;  // antidiagonal transfer
  }
  Eigen::Matrix2cd M;
  if (V == 1) {
    M = P[0] * scatter(0, lambda);
  } else {
    // ins_0 = P0 outs_{t}, outs_t = S_t ins_t, ...
    int t = tail_of[0];
    if (t == 0 || tail_of[1] != 1 - t) {
      throw ScenarioUnsupported("transfer blocks do not alternate saddles");
    }
    M = P[0] * scatter(t, lambda) * P[t] * scatter(1 - t, lambda);
  }
  Complex tr = M(0, 0) + M(1, 1);
  return 2.0 * std::cos(0.5 * delta) -
         (std::polar(1.0, -0.5 * delta) * tr).real();
}

std::vector<double> QuantizationSystem::solve_lambda(double lo, double hi,
                                                     double k1,
                                                     double k2) const {
  if (!(lo < hi)) throw Error("solve_lambda: empty window");
  double wmin = 1e300;
  for (const auto& v : vertices) wmin = std::min(wmin, v.w);
  double scale = kPi * wmin / (std::abs(std::log(h)) * 16.0);
  int n = std::max(128, int(std::ceil((hi - lo) / scale)));
  std::vector<double> roots;
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = lo + (hi - lo) * i / n;
    fs[i] = residual(xs[i], k1, k2);
  }
  for (int i = 1; i <= n; ++i) {
    if (fs[i - 1] == 0.0) {
      roots.push_back(xs[i - 1]);
    } else if (fs[i - 1] * fs[i] < 0.0) {
      roots.push_back(brent_root(
          [&](double t) { return residual(t, k1, k2); }, xs[i - 1], xs[i],
          1e-14));
    }
  }
  // Tangent (even-order) roots do not change sign; at the band-edge k the
  // dispersion branches merge exactly this way.  Polish interior minima of
  // |residual| and keep those that actually reach zero.
  for (int i = 1; i < n; ++i) {
    if (fs[i - 1] * fs[i] > 0.0 && fs[i] * fs[i + 1] > 0.0 &&
        std::abs(fs[i]) < std::abs(fs[i - 1]) &&
        std::abs(fs[i]) <= std::abs(fs[i + 1]) && std::abs(fs[i]) < 0.5) {
      double a = xs[i - 1], b = xs[i + 1];
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      double f1 = std::abs(residual(x1, k1, k2));
      double f2 = std::abs(residual(x2, k1, k2));
      for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
        if (f1 < f2) {
          b = x2; x2 = x1; f2 = f1;
          x1 = b - gr * (b - a);
          f1 = std::abs(residual(x1, k1, k2));
        } else {
          a = x1; x1 = x2; f1 = f2;
          x2 = a + gr * (b - a);
          f2 = std::abs(residual(x2, k1, k2));
        }
      }
      double xm = 0.5 * (a + b);
      if (std::abs(residual(xm, k1, k2)) < 1e-8) roots.push_back(xm);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) < 1e-12;
                          }),
              roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// Scenario detection and labeling.
// ---------------------------------------------------------------------------

namespace {

double mean_p(const SeparatrixEdge& e) {
  double s = 0.0;
  for (const auto& z : e.polyline) s += std::remainder(z.p, kTwoPi);
  return s / double(e.polyline.size());
}

// Calibrated against exact Bloch spectra: the local invariant is
// eps = lambda / w on the side where H - E is negative in the sector
// between branches 1 and 3.
int eps_sign_of(const SeparatrixVertex& v) { return -v.quadrant13_sign; }

}  // namespace

ScenarioBuild build_scenario(const TrigSymbol& symbol, double saddle_energy,
                             double h, const RenormOptions& renorm,
                             const TracingOptions& tracing) {
  ScenarioBuild out;
  SeparatrixGraph graph = separatrix_graph(symbol, saddle_energy, tracing);
  std::vector<EdgeWeight> weights(graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    weights[e] = edge_weight(symbol, graph, int(e), renorm);
  }
  ScenarioParams& sp = out.params;
  sp.E = saddle_energy;
  sp.h = h;

  const std::size_t V = graph.vertices.size();
  const std::size_t Ne = graph.edges.size();
  if (V == 1 && Ne == 2) {
    sp.kind = Scenario::Y;
    sp.w = sp.wt = graph.vertices[0].saddle.w;
    int lower = mean_p(graph.edges[0]) <= mean_p(graph.edges[1]) ? 0 : 1;
    out.gamma_edges = {lower, 1 - lower};
  } else if (V == 2 && Ne == 4) {
    bool winds_p = false;
    for (const auto& e : graph.edges) {
      if (e.lift[0] != 0) winds_p = true;
    }
    if (!winds_p) {
      sp.kind = Scenario::X;
      sp.w = graph.vertices[0].saddle.w;
      sp.wt = graph.vertices[1].saddle.w;
      // Lobes: pairs of opposite-direction edges with zero total winding.
      std::vector<std::array<int, 2>> lobes;
      std::vector<bool> used(4, false);
      for (int i = 0; i < 4; ++i) {
        if (used[i]) continue;
        for (int j = i + 1; j < 4; ++j) {
          if (used[j]) continue;
          const auto& a = graph.edges[i];
          const auto& b = graph.edges[j];
          if (a.start_vertex == b.end_vertex && a.end_vertex == b.start_vertex &&
              a.lift[0] + b.lift[0] == 0 && a.lift[1] + b.lift[1] == 0) {
            lobes.push_back({i, j});
            used[i] = used[j] = true;
            break;
          }
        }
      }
      if (lobes.size() != 2) {
        throw ScenarioUnsupported("could not pair the X-scenario lobes");
      }
      out.gamma_edges.clear();
      for (const auto& lobe : lobes) {
        int lo = mean_p(graph.edges[lobe[0]]) <= mean_p(graph.edges[lobe[1]])
                     ? lobe[0] : lobe[1];
        int up = lobe[0] + lobe[1] - lo;
        out.gamma_edges.push_back(lo);
        out.gamma_edges.push_back(up);
      }
    } else {
      sp.kind = Scenario::Deg;
      // V is the saddle with eps = +lambda/w.
      int v_plus = eps_sign_of(graph.vertices[0]) > 0 ? 0 : 1;
      sp.w = graph.vertices[v_plus].saddle.w;
      sp.wt = graph.vertices[1 - v_plus].saddle.w;
      // Labeling by cycle winding: gamma1+gamma4 winds p only,
      // gamma1+gamma2 winds x only; gamma3 is the remainder.
      bool found = false;
      for (int g1 = 0; g1 < 4 && !found; ++g1) {
        for (int g2 = 0; g2 < 4 && !found; ++g2) {
          if (g2 == g1) continue;
          for (int g4 = 0; g4 < 4 && !found; ++g4) {
            if (g4 == g1 || g4 == g2) continue;
            int g3 = 6 - g1 - g2 - g4;
            const auto& e1 = graph.edges[g1];
            const auto& e2 = graph.edges[g2];
            const auto& e4 = graph.edges[g4];
            bool cyc12 = e1.end_vertex == e2.start_vertex &&
                         e2.end_vertex == e1.start_vertex;
            bool cyc14 = e1.end_vertex == e4.start_vertex &&
                         e4.end_vertex == e1.start_vertex;
            if (!cyc12 || !cyc14) continue;
            int wp = e1.lift[0] + e4.lift[0], wx = e1.lift[1] + e4.lift[1];
            int up = e1.lift[0] + e2.lift[0], ux = e1.lift[1] + e2.lift[1];
            if (std::abs(wp) == 1 && wx == 0 && up == 0 && std::abs(ux) == 1) {
              out.gamma_edges = {g1, g2, g3, g4};
              found = true;
            }
          }
        }
      }
      if (!found) {
        throw ScenarioUnsupported("could not label the Deg-scenario edges");
      }
    }
  } else {
    throw ScenarioUnsupported("separatrix with " + std::to_string(V) +
                              " vertices and " + std::to_string(Ne) +
                              " edges matches no known scenario");
  }

  sp.gamma.clear();
  for (int e : out.gamma_edges) sp.gamma.push_back(weights[e]);

  out.system.kind = sp.kind;
  out.system.E = sp.E;
  out.system.h = h;
  for (const auto& v : graph.vertices) {
    QVertex qv;
    qv.w = v.saddle.w;
    qv.q13 = v.quadrant13_sign;
    // Corner Maslov of the x-reversing channel pair: in along branch i the
    // tangent is -dir_i, out along branch o it is +dir_o.
    for (int o : {3, 4}) {
      Vec2 t_in = v.branch_dirs[1] * -1.0;
      Vec2 t_out = v.branch_dirs[o];
      if (std::abs(t_in.x) < 1e-9 * t_in.norm() ||
          std::abs(t_out.x) < 1e-9 * t_out.norm()) {
        throw TangencyAtCorner("saddle branch parallel to the p axis");
      }
      if (t_in.x * t_out.x < 0.0) {
        int r = cross_xp(t_in, t_out) > 0.0 ? +1 : -1;
        (o == 3 ? qv.corner13 : qv.corner14) = r;
      }
    }
    if ((qv.corner13 == 0) == (qv.corner14 == 0)) {
      throw TangencyAtCorner("degenerate corner structure at a saddle");
    }
    out.system.vertices.push_back(qv);
  }
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& ge = graph.edges[e];
    out.system.edges.push_back({ge.start_vertex, ge.end_vertex,
                                ge.start_branch, ge.end_branch, weights[e],
                                {ge.lift[0], ge.lift[1]}});
  }
  return out;
}

}  // namespace harperband
