#include "harperband/regular_bs.hpp"

#include <algorithm>
#include <cmath>

#include "harperband/classical.hpp"

namespace harperband {

namespace {

bool project_energy(const TrigSymbol& H, double E, Vec2& z) {
  const double tol = 1e-12 * (1.0 + H.coeff_scale());
  for (int it = 0; it < 40; ++it) {
    double r = H.evaluate(Point2(z.p, z.x)) - E;
    if (std::abs(r) < tol) return true;
    Vec2 g = H.gradient(Point2(z.p, z.x));
    double g2 = g.dot(g);
    if (g2 < 1e-14) return false;
    z -= g * (r / g2);
  }
  return false;
}

}  // namespace

std::vector<OrbitFamily> orbit_families(const TrigSymbol& symbol, double e_lo,
                                        double e_hi, const FamilyOptions& opts) {
  if (!(e_lo < e_hi)) throw Error("orbit_families: empty energy window");
  for (const auto& c : find_critical_points(symbol)) {
    if (c.value > e_lo + 1e-12 && c.value < e_hi - 1e-12) {
      throw WindowCrossesCritical("critical value " + std::to_string(c.value) +
                                  " inside the window");
    }
  }
  const int n = opts.table_size;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = e_lo + (e_hi - e_lo) * i / (n - 1);

  // Trace everything at the mid energy, then continue each component across
  // the grid; the component count cannot change inside the window.
  const int mid = n / 2;
  auto mid_comps = trace_level_set(symbol, grid[mid], opts.tracing);
  std::vector<OrbitFamily> families(mid_comps.size());
  std::vector<std::vector<Trajectory>> orbits(
      mid_comps.size(), std::vector<Trajectory>(n));
  for (std::size_t f = 0; f < mid_comps.size(); ++f) {
    orbits[f][mid] = mid_comps[f];
  }
  for (std::size_t f = 0; f < mid_comps.size(); ++f) {
    auto step_to = [&](const Trajectory& from, double E) {
      Vec2 z = from.samples[from.samples.size() / 2];
      if (!project_energy(symbol, E, z)) {
        throw ConvergenceFailure("orbit family continuation lost the level set");
      }
      auto comps = trace_level_set(symbol, E, opts.tracing);
      // Pick the component passing nearest to the continued seed.
      std::size_t best = 0;
      double best_d = 1e300;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        for (std::size_t i = 0; i < comps[c].samples.size(); i += 4) {
          double d = torus_dist(comps[c].samples[i], z);
          if (d < best_d) { best_d = d; best = c; }
        }
      }
      return comps[best];
    };
    for (int i = mid + 1; i < n; ++i) {
      orbits[f][i] = step_to(orbits[f][i - 1], grid[i]);
    }
    for (int i = mid - 1; i >= 0; --i) {
      orbits[f][i] = step_to(orbits[f][i + 1], grid[i]);
    }
  }
  for (std::size_t f = 0; f < families.size(); ++f) {
    OrbitFamily& fam = families[f];
    fam.lift = orbits[f][mid].lift;
    fam.maslov = maslov_index(orbits[f][mid].samples, fam.contractible());
    fam.energies = grid;
    fam.actions.resize(n);
    for (int i = 0; i < n; ++i) {
      if (orbits[f][i].lift != fam.lift) {
        throw ConvergenceFailure("orbit family changed topology inside window");
      }
      fam.actions[i] = principal_action(symbol, orbits[f][i].samples, grid[i],
                                        opts.action_tol);
    }
    // PCHIP wants increasing abscissae; the action table is monotone in E
    // within the window, so index by energy directly.
    fam.action = PchipInterpolant(fam.energies, fam.actions);
  }
  return families;
}

std::vector<FlatBandLevel> flat_band_levels(
    const std::vector<OrbitFamily>& families, double h) {
  std::vector<FlatBandLevel> out;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const OrbitFamily& fam = families[f];
    if (!fam.contractible()) continue;
    double a_min = *std::min_element(fam.actions.begin(), fam.actions.end());
    double a_max = *std::max_element(fam.actions.begin(), fam.actions.end());
    int n_min = int(std::floor((a_min / h - kPi * fam.maslov / 2.0) / kTwoPi)) - 1;
    int n_max = int(std::ceil((a_max / h - kPi * fam.maslov / 2.0) / kTwoPi)) + 1;
    for (int n = n_min; n <= n_max; ++n) {
      double target = h * (kTwoPi * n + kPi * fam.maslov / 2.0);
      if (target <= a_min || target >= a_max) continue;
      double E = fam.action.invert(target);
      out.push_back({int(f), n, E});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FlatBandLevel& a, const FlatBandLevel& b) {
              return a.energy < b.energy;
            });
  return out;
}

std::vector<double> open_branch_energies(const OrbitFamily& family, double h,
                                         double k2) {
  if (family.lift[0] != 0 || std::abs(family.lift[1]) != 1) {
    throw ScenarioUnsupported(
        "open dispersion requires an x-winding family with lift (0, +-1)");
  }
  int sigma = family.lift[1];
  double a_min = *std::min_element(family.actions.begin(), family.actions.end());
  double a_max = *std::max_element(family.actions.begin(), family.actions.end());
  std::vector<double> out;
  int n_min = int(std::floor((a_min / h - sigma * k2) / kTwoPi)) - 1;
  int n_max = int(std::ceil((a_max / h - sigma * k2) / kTwoPi)) + 1;
  for (int n = n_min; n <= n_max; ++n) {
    double target = h * (kTwoPi * n + sigma * k2);
    if (target <= a_min || target >= a_max) continue;
    out.push_back(family.action.invert(target));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> open_crossing_energies(const OrbitFamily& plus,
                                           const OrbitFamily& minus, double h) {
  if (plus.lift[1] * minus.lift[1] != -1 || plus.lift[0] || minus.lift[0]) {
    throw ScenarioUnsupported("crossings need opposite x-winding families");
  }
  double e_lo = std::max(plus.energies.front(), minus.energies.front());
  double e_hi = std::min(plus.energies.back(), minus.energies.back());
  if (!(e_lo < e_hi)) throw EmptyWindow("open families do not overlap");
  auto g = [&](double E) { return (plus.action(E) + minus.action(E)) / (kTwoPi * h); };
  std::vector<double> out;
  const int scan = 512;
  double prev_e = e_lo, prev_g = g(e_lo);
  for (int i = 1; i <= scan; ++i) {
    double E = e_lo + (e_hi - e_lo) * i / scan;
    double gv = g(E);
    // One crossing for every integer passed by g.
    for (int m = int(std::ceil(std::min(prev_g, gv)));
         m <= int(std::floor(std::max(prev_g, gv))); ++m) {
      double target = m;
      double E_star = brent_root([&](double e) { return g(e) - target; },
                                 prev_e, E, 1e-13);
      out.push_back(E_star);
    }
    prev_e = E;
    prev_g = gv;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-10; }),
            out.end());
  return out;
}

}  // namespace harperband
