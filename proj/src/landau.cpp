#include "harperband/landau.hpp"

#include <cmath>

#include "harperband/classical.hpp"
#include "harperband/specfun.hpp"

namespace harperband {

Potential2D Potential2D::from_cosines(double a, double b,
                                      const std::map<Freq, double>& cosine_amps) {
  Potential2D v;
  v.a = a;
  v.b = b;
  for (const auto& [f, amp] : cosine_amps) {
    if (f.m == 0 && f.n == 0) {
      v.coeffs[f] += amp;
      continue;
    }
    v.coeffs[f] += 0.5 * amp;
    v.coeffs[Freq{-f.m, -f.n}] += 0.5 * amp;
  }
  return v;
}

double Potential2D::evaluate(double x1, double x2) const {
  Complex s = 0.0;
  for (const auto& [f, c] : coeffs) {
    s += c * std::polar(1.0, kTwoPi * (f.m * x1 / a + f.n * x2 / b));
  }
  return s.real();
}

double landau_mode_factor(const Potential2D& v, const LandauParams& lp, int m,
                          int n) {
  double xi = std::hypot(kTwoPi * m / v.a, kTwoPi * n / v.b);
  return bessel_j0(std::sqrt(2.0 * landau_level(lp)) * xi);
}

TrigSymbol average_first_order(const Potential2D& v, const LandauParams& lp) {
  TrigSymbol::CoeffMap out;
  out[Freq{0, 0}] = landau_level(lp);
  for (const auto& [f, c] : v.coeffs) {
    out[f] += lp.eps * landau_mode_factor(v, lp, f.m, f.n) * c;
  }
  return TrigSymbol(std::move(out));
}

std::vector<LevelTopologyReport> level_topology_report(const Potential2D& v,
                                                       double h, double eps,
                                                       int n_lo, int n_hi) {
  if (n_lo < 0 || n_hi < n_lo) throw Error("level_topology_report: bad range");
  std::vector<LevelTopologyReport> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    LandauParams lp{n, h, eps};
    LevelTopologyReport rep;
    rep.n = n;
    rep.I_n = landau_level(lp);
    auto crits = find_critical_points(average_first_order(v, lp));
    for (const auto& c : crits) {
      switch (c.kind) {
        case CriticalKind::Minimum: ++rep.minima; break;
        case CriticalKind::Maximum: ++rep.maxima; break;
        case CriticalKind::Saddle:
          ++rep.saddles;
          rep.saddle_values.push_back(c.value);
          break;
      }
    }
    std::sort(rep.saddle_values.begin(), rep.saddle_values.end());
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace harperband
