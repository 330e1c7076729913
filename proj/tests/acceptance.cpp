// Acceptance gate: one criterion per function, one PASS/FAIL line each.
// Run with no arguments for the full gate, or with a criterion number.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "harperband/harness.hpp"
#include "harperband/specfun.hpp"

#include "oracle_tables.inc"

using namespace harperband;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;

  template <typename T>
  Check& operator<<(const T& v) {
    note << v;
    return *this;
  }
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " !" << what;
    }
  }
};

TrigSymbol x_symbol() {
  return parse_symbol(
      R"({"terms":[{"cos":[1,0],"amp":2},{"cos":[0,2],"amp":0.6}]})");
}

// ---------------------------------------------------------------------------
// 1. Exact quantization vs the hand-built almost-Mathieu cyclic matrix.
// ---------------------------------------------------------------------------

Eigen::MatrixXcd almost_mathieu(double alpha, int eta, double k1, double k2) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(eta, eta);
  for (int t = 0; t < eta; ++t) {
    M(t, t) = 2.0 * alpha * std::cos(-(k1 + kTwoPi * t) / eta);
    int up = (t + 1) % eta;
    int dn = (t + eta - 1) % eta;
    M(t, up) += (t + 1 == eta) ? std::polar(1.0, -k2) : Complex{1.0, 0.0};
    M(t, dn) += (t == 0) ? std::polar(1.0, k2) : Complex{1.0, 0.0};
  }
  return M;
}

Check criterion1() {
  Check c;
  TrigSymbol H = TrigSymbol::harper(0.5);
  double worst = 0.0;
  for (int eta : {3, 5, 8}) {
    FluxContext flux(eta);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        Quasimomentum k(-kPi + kTwoPi * i / 8.0, -kPi + kTwoPi * j / 8.0);
        auto got = hermitian_eigenvalues(bloch_matrix(H, flux, k));
        auto want = hermitian_eigenvalues(almost_mathieu(0.5, eta, k.k1, k.k2));
        for (std::size_t n = 0; n < got.size(); ++n) {
          worst = std::max(worst, std::abs(got[n] - want[n]));
        }
      }
    }
  }
  c << "max |dE| = " << worst << " over 64 k-points, eta in {3,5,8}";
  c.require(worst < 1e-10, "tol 1e-10");
  return c;
}

// ---------------------------------------------------------------------------
// 2. Flat bands: centers vs Bohr-Sommerfeld levels, O(h^2) scaling.
// ---------------------------------------------------------------------------

double flat_band_error(const TrigSymbol& H, int eta,
                       std::vector<double>* widths = nullptr) {
  FluxContext flux(eta);
  BandStructureOptions opts;
  opts.grid = {6, 6};
  BandTable t = band_structure(H, flux, opts);
  auto fams = orbit_families(H, -2.995, -1.1);
  auto levels = flat_band_levels(fams, flux.h);
  std::sort(levels.begin(), levels.end(),
            [](const FlatBandLevel& a, const FlatBandLevel& b) {
              return a.energy < b.energy;
            });
  double err = 0.0;
  for (int j = 0; j < 3; ++j) {
    err = std::max(err, std::abs(t.band_ranges[j].center() - levels[j].energy));
    if (widths) widths->push_back(t.band_ranges[j].width());
  }
  return err;
}

Check criterion2() {
  Check c;
  TrigSymbol H = TrigSymbol::harper(0.5);
  std::vector<double> widths;
  double e200 = flat_band_error(H, 200, &widths);
  double e100 = flat_band_error(H, 100);
  double h200 = kTwoPi / 200.0;
  double wmax = *std::max_element(widths.begin(), widths.end());
  c << "err(200) = " << e200 << ", err(100)/err(200) = " << e100 / e200
    << ", max width = " << wmax;
  c.require(e200 <= 5.0 * h200 * h200, "err <= 5h^2");
  c.require(e100 / e200 >= 3.5, "O(h^2) ratio");
  c.require(wmax <= h200 * h200 * h200, "widths <= h^3");
  return c;
}

// ---------------------------------------------------------------------------
// 3. Open motion: gap centers at predicted crossings, o(h^inf) gap widths.
// ---------------------------------------------------------------------------

Check criterion3() {
  Check c;
  TrigSymbol H = TrigSymbol::harper(0.5);
  FluxContext flux(100);
  BandStructureOptions opts;
  opts.grid = {8, 48};
  opts.polish_extrema = true;
  BandTable t = band_structure(H, flux, opts);

  auto fams = orbit_families(H, -0.65, 0.65);
  const OrbitFamily *plus = nullptr, *minus = nullptr;
  for (const auto& f : fams) {
    if (f.lift[1] > 0) plus = &f;
    if (f.lift[1] < 0) minus = &f;
  }
  if (!plus || !minus) {
    c.ok = false;
    c << "missing winding families";
    return c;
  }
  auto crossings = open_crossing_energies(*plus, *minus, flux.h);

  int gaps = 0;
  double worst_dist = 0.0, worst_width = 0.0;
  for (std::size_t j = 0; j + 1 < t.band_ranges.size(); ++j) {
    double lo = t.band_ranges[j].hi, hi = t.band_ranges[j + 1].lo;
    double center = 0.5 * (lo + hi);
    if (hi <= lo || center < -0.6 || center > 0.6) continue;
    ++gaps;
    double dist = 1e300;
    for (double e : crossings) dist = std::min(dist, std::abs(e - center));
    worst_dist = std::max(worst_dist, dist);
    worst_width = std::max(worst_width, hi - lo);
  }
  c << gaps << " gaps, max |center - E*| = " << worst_dist
    << ", max width = " << worst_width;
  c.require(gaps > 0, "found gaps");
  c.require(worst_dist < 5e-3, "centers within 5e-3");
  c.require(worst_width < 1e-4, "widths < 1e-4");
  return c;
}

// ---------------------------------------------------------------------------
// 4. Y-case band/gap widths at the saddle.
// ---------------------------------------------------------------------------

struct YWidths {
  double band = 0.0, gap = 0.0;
};

// Band and gap widths at the saddle energy E* = 1.  The element ladder sits
// at a quasi-random offset relative to E*, so the element nearest E* may be
// up to half a spacing away; interpolate the widths of the elements
// bracketing E* (linearly in their centers) to read them off at E* itself.
YWidths y_widths(const TrigSymbol& H, int eta) {
  FluxContext flux(eta);
  BandStructureOptions opts;
  opts.grid = {2, 64};
  BandTable t = band_structure(H, flux, opts);
  auto items = widths_near(t, 1.0, 6.0 * flux.h);
  auto at_saddle = [&](SpectralItem::Kind kind) {
    const SpectralItem *below = nullptr, *above = nullptr;
    for (const auto& it : items) {
      if (it.kind != kind) continue;
      if (it.center <= 1.0 && (!below || it.center > below->center)) below = &it;
      if (it.center > 1.0 && (!above || it.center < above->center)) above = &it;
    }
    if (!below || !above) throw Error("no bracketing pair at the saddle");
    double s = (1.0 - below->center) / (above->center - below->center);
    return below->width + s * (above->width - below->width);
  };
  YWidths out;
  out.band = at_saddle(SpectralItem::Kind::Band);
  out.gap = at_saddle(SpectralItem::Kind::Gap);
  return out;
}

Check criterion4() {
  Check c;
  TrigSymbol H = TrigSymbol::harper(0.5);
  YWidths w128 = y_widths(H, 128);
  YWidths w256 = y_widths(H, 256);
  double r128 = std::abs(w128.band / w128.gap - 1.0);
  double r256 = std::abs(w256.band / w256.gap - 1.0);
  double h = kTwoPi / 256.0, h1 = kTwoPi / 128.0;
  double scaled = w256.band * std::abs(std::log(h)) / h;
  double scaled1 = w128.band * std::abs(std::log(h1)) / h1;
  double target = kPi * std::sqrt(2.0) / 2.0;
  c << "|B/G-1|: " << r128 << " -> " << r256 << ", B|log h|/h = " << scaled1
    << " -> " << scaled << " vs pi*w/2 = " << target;
  c.require(r256 <= 0.35, "|B/G-1| <= 0.35");
  // Known-red trend checks, kept strict rather than loosened.  The measured
  // |B/G-1| is already at the interpolation noise floor (~2e-3) at both eta,
  // so a monotone decrease is not resolvable; and the leading-order width
  // scale pi*w/2 drops saddle-scattering terms (sum of edge times J and the
  // digamma part of the phase) which at eta <= 256 exceed 2|log h|/w, so the
  // measured B + G matches 2*pi*h / (sum J + 2(|psi(1/2)| + |log h|)/w) to
  // ~1.5% while B|log h|/h sits well below the asymptotic window.
  c.require(r256 <= r128 + 1e-9, "ratio improves with eta");
  c.require(scaled >= 0.6 * target && scaled <= 1.4 * target, "width scale");
  return c;
}

// ---------------------------------------------------------------------------
// 5. X-case: generic-system roots vs secular-function roots; alternation.
// ---------------------------------------------------------------------------

std::vector<double> det_roots(const QuantizationSystem& sys, double lo,
                              double hi, double k1, double k2) {
  // Independent path: scan |det| of the assembled linear system and polish
  // its near-zero minima, without using the secular reduction.
  const int n = 4000;
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = lo + (hi - lo) * i / n;
    fs[i] = sys.det_abs(xs[i], k1, k2);
  }
  std::vector<double> roots;
  for (int i = 1; i < n; ++i) {
    if (fs[i] <= fs[i - 1] && fs[i] < fs[i + 1] && fs[i] < 0.05) {
      double r = golden_min(
          [&](double t) { return sys.det_abs(t, k1, k2); }, xs[i - 1],
          xs[i + 1], 1e-13);
      if (sys.det_abs(r, k1, k2) < 1e-9) roots.push_back(r);
    }
  }
  return roots;
}

Check criterion5() {
  Check c;
  double h = kTwoPi / 256.0;
  auto build = build_scenario(x_symbol(), 1.4, h);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uk(-kPi, kPi), ul(-1.8, 1.3);
  double worst = 0.0;
  int compared = 0;
  for (int probe = 0; probe < 16; ++probe) {
    double k1 = uk(rng), k2 = uk(rng), l0 = ul(rng);
    auto a = build.system.solve_lambda(l0 - 0.4, l0 + 0.4, k1, k2);
    auto b = det_roots(build.system, l0 - 0.4, l0 + 0.4, k1, k2);
    if (a.size() != b.size()) {
      c.ok = false;
      c << " probe " << probe << ": " << a.size() << " secular vs " << b.size()
        << " det roots;";
      continue;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, std::abs(a[i] - b[i]));
      ++compared;
    }
  }
  c << compared << " roots, max |dlambda| = " << worst << ";";
  c.require(compared > 0, "roots found");
  c.require(worst < 1e-8, "cross-oracle 1e-8");

  // Alternation B, G1, B, G2 below the saddle, measured at eta = 256.
  TrigSymbol H = x_symbol();
  FluxContext flux(256);
  BandStructureOptions opts;
  opts.grid = {2, 64};
  BandTable t = band_structure(H, flux, opts);
  // Polish the extrema of the bands just below the saddle.  The scenario is
  // k1-independent, so optimize over k2 only, bracketing with the grid row.
  auto band_at = [&](int idx, double k2) {
    return hermitian_eigenvalues(
        bloch_matrix(H, flux, Quasimomentum(0.0, k2)))[idx];
  };
  auto polish = [&](int idx, int sign) {
    // Grid row at k1 = 0 (index 1 of {-pi, 0}).
    int best = 0;
    for (int i2 = 1; i2 < t.grid.n2; ++i2) {
      if (sign * t.energy(idx, 1, i2) > sign * t.energy(idx, 1, best)) best = i2;
    }
    double cell = kTwoPi / t.grid.n2;
    double k = golden_min(
        [&](double k2) { return -sign * band_at(idx, k2); },
        t.k2s[best] - cell, t.k2s[best] + cell, 1e-10);
    return band_at(idx, k);
  };
  // Keep every consecutive-band gap by index, including the (near-)closed
  // ones: the alternation B, G1, B, G2 shows up as small/large interleaving,
  // and here G1 closes at leading order (congruent lobes, cos Delta1 = 1),
  // so the small family sits at the numerical noise floor.
  std::vector<double> gaps;
  for (std::size_t j = 0; j + 1 < t.band_ranges.size(); ++j) {
    double hi = t.band_ranges[j].hi, lo = t.band_ranges[j + 1].lo;
    double center = 0.5 * (hi + lo);
    if (center < 1.20 || center > 1.395) continue;
    double g = polish(int(j) + 1, -1) - polish(int(j), +1);
    gaps.push_back(std::max(g, 0.0));
  }
  c << " gaps below saddle:";
  for (double g : gaps) c << " " << g;
  c.require(gaps.size() >= 5, "5+ gaps");
  bool alternate = true;
  for (std::size_t i = 0; i + 2 < gaps.size(); ++i) {
    bool up = gaps[i + 1] > gaps[i];
    bool down = gaps[i + 2] < gaps[i + 1];
    if (up != down) alternate = false;
  }
  c.require(alternate, "gap sizes alternate");
  if (gaps.size() >= 2) {
    // Ordering check: the predicted small family is G1, and the measured
    // small member of the pair nearest the saddle must match it.
    WidthEstimate wx = scenario_widths(build.params, 0.0);
    double pred_ratio = std::min(wx.gap1, wx.gap2) / std::max(wx.gap1, wx.gap2);
    double g_last = gaps[gaps.size() - 1], g_prev = gaps[gaps.size() - 2];
    double meas_ratio = std::min(g_last, g_prev) / std::max(g_last, g_prev);
    c << " ratio meas " << meas_ratio << " pred " << pred_ratio;
    c.require(pred_ratio < 0.5, "predicted G1 << G2");
    c.require(meas_ratio < 0.5, "measured G1 << G2");
  }
  return c;
}

// ---------------------------------------------------------------------------
// 6. Degenerate case: critical harper central band/gap trends.
// ---------------------------------------------------------------------------

Check criterion6() {
  Check c;
  TrigSymbol H = TrigSymbol::harper(1.0);
  std::vector<double> gap_scaled, band_scaled;
  for (int eta : {64, 128, 256}) {
    FluxContext flux(eta);
    BandStructureOptions opts;
    opts.grid = {24, 24};
    BandTable t = band_structure(H, flux, opts);
    double L = std::abs(std::log(flux.h));
    // Central band: the merged band containing E = 0.
    const BandInterval* central = nullptr;
    for (const auto& b : t.merged_bands) {
      if (b.lo <= 0.0 && 0.0 <= b.hi) central = &b;
    }
    if (!central) {
      c.ok = false;
      c << "eta " << eta << ": no central band;";
      continue;
    }
    // Central gap: the (possibly closed) gap between the two Bloch bands
    // meeting at E = 0; its predicted leading-order width vanishes.
    double g = 0.0, dbest = 1e300;
    for (std::size_t j = 0; j + 1 < t.band_ranges.size(); ++j) {
      double lo = t.band_ranges[j].hi, hi = t.band_ranges[j + 1].lo;
      double d = std::abs(0.5 * (lo + hi));
      if (d < dbest) {
        dbest = d;
        g = std::max(hi - lo, 0.0);
      }
    }
    gap_scaled.push_back(g * L / flux.h);
    band_scaled.push_back(central->width() * L / flux.h);
  }
  c << "gap*L/h:";
  for (double g : gap_scaled) c << " " << g;
  c << "; band*L/h:";
  for (double b : band_scaled) c << " " << b;
  c.require(gap_scaled.size() == 3, "3 etas");
  if (gap_scaled.size() == 3) {
    c.require(gap_scaled[1] <= gap_scaled[0] + 1e-9 &&
                  gap_scaled[2] <= gap_scaled[1] + 1e-9,
              "gap trend down");
    for (double b : band_scaled) {
      c.require(b >= kPi / 2.0 && b <= 2.0 * kPi, "bandwidth near pi");
    }
    c.require(std::abs(band_scaled[2] - kPi) <= std::abs(band_scaled[0] - kPi),
              "drift toward pi");
  }
  return c;
}

// ---------------------------------------------------------------------------
// 7. k_max of the degenerate dispersion with a phase-breaking term.
// ---------------------------------------------------------------------------

double kmax_discrepancy(const TrigSymbol& H, double Es, int eta, int grid_n,
                        std::string& note) {
  FluxContext flux(eta);
  BandStructureOptions opts;
  opts.grid = {grid_n, grid_n};
  BandTable t = band_structure(H, flux, opts);
  int jstar = 0;
  double best = 1e300;
  for (std::size_t j = 0; j < t.band_ranges.size(); ++j) {
    double d = std::abs(t.band_ranges[j].center() - Es);
    if (d < best) {
      best = d;
      jstar = int(j);
    }
  }
  const auto& e = t.energies[jstar];
  std::size_t arg = std::max_element(e.begin(), e.end()) - e.begin();
  double k1m = t.k1s[arg / grid_n], k2m = t.k2s[arg % grid_n];

  auto b = build_scenario(H, Es, flux.h);
  auto km = kmax(b.params, 0.0);
  // The dispersion is even under k -> -k; accept either representative, and
  // either assignment of the components to (k1, k2).
  double d = 1e300;
  for (int swap = 0; swap < 2; ++swap) {
    for (int sgn : {-1, 1}) {
      double a1 = sgn * (swap ? km[1] : km[0]);
      double a2 = sgn * (swap ? km[0] : km[1]);
      double d1 = std::abs(std::remainder(k1m - a1, kTwoPi));
      double d2 = std::abs(std::remainder(k2m - a2, kTwoPi));
      d = std::min(d, std::max(d1, d2));
    }
  }
  std::ostringstream os;
  os << " eta " << eta << ": argmax (" << k1m << "," << k2m << ") vs kmax ("
     << km[0] << "," << km[1] << "), d = " << d << ";";
  note += os.str();
  return d;
}

Check criterion7() {
  Check c;
  TrigSymbol H = parse_symbol(
      R"({"terms":[{"cos":[1,0],"amp":2},{"cos":[0,1],"amp":2},
                   {"cos":[1,1],"amp":0.2}]})");
  double Es = 0.0;
  for (const auto& cp : find_critical_points(H)) {
    if (cp.kind == CriticalKind::Saddle) Es = cp.value;
  }
  std::string note;
  double cell128 = kTwoPi / 64.0;
  double d64 = kmax_discrepancy(H, Es, 64, 64, note);
  double d128 = kmax_discrepancy(H, Es, 128, 64, note);
  c << note;
  c.require(d128 <= 2.5 * cell128, "within 2.5 cells at eta 128");
  c.require(d128 <= d64 + 0.5 * cell128, "discrepancy does not grow");
  return c;
}

// ---------------------------------------------------------------------------
// 8. Landau averaging coefficients and level topology.
// ---------------------------------------------------------------------------

Check criterion8() {
  Check c;
  Potential2D v = Potential2D::from_cosines(kTwoPi, kPi,
                                            {{Freq{0, 0}, 0.25},
                                             {Freq{1, 0}, 0.25},
                                             {Freq{0, 1}, 0.25},
                                             {Freq{1, 1}, 0.125},
                                             {Freq{1, -1}, 0.125}});
  double worst = 0.0;
  for (int n : {0, 1, 2}) {
    LandauParams lp;
    lp.n = n;
    lp.h = 0.1;
    lp.eps = 1.0;
    double I = landau_level(lp);
    TrigSymbol L = average_first_order(v, lp);
    double j1 = std::cyl_bessel_j(0.0, std::sqrt(2.0 * I));
    double j2 = std::cyl_bessel_j(0.0, std::sqrt(8.0 * I));
    double j5 = std::cyl_bessel_j(0.0, std::sqrt(10.0 * I));
    worst = std::max(worst, std::abs(L.cosine_amp(Freq{1, 0}) - 0.25 * j1));
    worst = std::max(worst, std::abs(L.cosine_amp(Freq{0, 1}) - 0.25 * j2));
    worst = std::max(worst, std::abs(L.cosine_amp(Freq{1, 1}) - 0.125 * j5));
    worst = std::max(worst, std::abs(L.cosine_amp(Freq{1, -1}) - 0.125 * j5));
    worst = std::max(worst,
                     std::abs(L.cosine_amp(Freq{0, 0}) - 2.0 * (I + 0.25)));
  }
  c << "max coefficient error = " << worst;
  c.require(worst < 1e-12, "coefficients 1e-12");

  auto reports = level_topology_report(v, 1.0, 1.0, 0, 1);
  bool differs = reports.size() == 2 &&
                 (reports[0].minima != reports[1].minima ||
                  reports[0].maxima != reports[1].maxima ||
                  reports[0].saddles != reports[1].saddles ||
                  reports[0].saddle_values.size() !=
                      reports[1].saddle_values.size());
  c << "; topology (I=0.5) vs (I=1.5) differs = " << differs;
  c.require(differs, "distinct Reeb signatures");
  return c;
}

// ---------------------------------------------------------------------------
// 9. Numerics substrate: special functions and renormalized times.
// ---------------------------------------------------------------------------

Check criterion9() {
  Check c;
  double worst_g = 0.0, worst_j = 0.0;
  for (const auto& [t, want] : kArgGammaHalfTable) {
    worst_g = std::max(worst_g, std::abs(arg_gamma_half(t) - want) /
                                    std::max(1.0, std::abs(want)));
  }
  for (const auto& [x, want] : kBesselJ0Table) {
    worst_j = std::max(worst_j, std::abs(bessel_j0(x) - want));
  }
  c << "argGamma err " << worst_g << ", J0 err " << worst_j;
  c.require(worst_g < 1e-12, "argGamma 1e-12");
  c.require(worst_j < 1e-12, "J0 1e-12");

  RenormOptions alt;
  alt.cutoffs = {2.4e-2, 1.2e-2, 6e-3, 3e-3};
  double worst_r = 0.0;
  struct Fam {
    TrigSymbol H;
    double E;
  };
  std::vector<Fam> fams = {{TrigSymbol::harper(0.5), 1.0},
                           {x_symbol(), 1.4},
                           {TrigSymbol::harper(1.0), 0.0}};
  for (const auto& f : fams) {
    auto g = separatrix_graph(f.H, f.E);
    for (int e = 0; e < int(g.edges.size()); ++e) {
      double t1 = renormalized_time(f.H, g, e);
      double t2 = renormalized_time(f.H, g, e, alt);
      worst_r = std::max(worst_r, std::abs(t1 - t2));
    }
  }
  c << ", renorm time cutoff dependence " << worst_r;
  c.require(worst_r < 1e-6, "cutoff independence 1e-6");
  return c;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> cs = {
      {1, "exact quantization oracle", criterion1},
      {2, "flat-band centers O(h^2)", criterion2},
      {3, "open-motion crossings", criterion3},
      {4, "Y band/gap widths", criterion4},
      {5, "X cross-oracle and alternation", criterion5},
      {6, "degenerate central band", criterion6},
      {7, "k_max location", criterion7},
      {8, "Landau averaging", criterion8},
      {9, "numerics substrate", criterion9},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (auto& cr : cs) {
    if (only != 0 && cr.id != only) continue;
    Check res;
    try {
      res = cr.run();
    } catch (const std::exception& e) {
      res.ok = false;
      res << "exception: " << e.what();
    }
    std::printf("[%s] criterion %d (%s): %s\n", res.ok ? "PASS" : "FAIL",
                cr.id, cr.name, res.note.str().c_str());
    std::fflush(stdout);
    if (!res.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
