#include "harperband/quantum.hpp"

#include <sstream>

#include <json.hpp>

#include "harperband/numerics.hpp"

namespace harperband {

Eigen::MatrixXcd bloch_matrix(const TrigSymbol& symbol, const FluxContext& flux,
                              const Quasimomentum& k) {
  const int eta = flux.eta;
  const double h = flux.h;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(eta, eta);
  // Basis: delta comb supported on x_t = -(k1 + 2pi t)/eta, t = 0..eta-1,
  // coefficients quasi-periodic with a_{t+eta} = e^{-i k2} a_t.  The
  // elementary wave exp(i(m p + n x)) acts as
  //   (U a)_t = e^{i m n h / 2} e^{i n x_t} a_{t-m}.
  for (const auto& [f, c] : symbol.coeffs()) {
    const int m = f.m, n = f.n;
    const Complex base = c * std::polar(1.0, 0.5 * m * n * h);
    for (int t = 0; t < eta; ++t) {
      int s = t - m;
      int r = ((s % eta) + eta) % eta;
      int wraps = (r - s) / eta;  // a_s = e^{i wraps k2} a_r
      double x_t = -(k.k1 + kTwoPi * t) / eta;
      M(t, r) += base * std::polar(1.0, n * x_t + wraps * k.k2);
    }
  }
  double nrm = M.norm();
  if (nrm > 0.0) {
    double herm_defect = (M - M.adjoint()).norm();
    if (herm_defect > 1e-12 * nrm) {
      std::ostringstream os;
      os << "bloch_matrix: ||M - M*|| = " << herm_defect << " vs norm " << nrm;
      throw HermiticityFailure(os.str());
    }
  }
  return M;
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("hermitian eigensolve did not converge (size " +
                             std::to_string(M.rows()) + ")");
  }
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

namespace {

void merge_intervals(BandTable& table) {
  auto sorted = table.band_ranges;
  std::sort(sorted.begin(), sorted.end(),
            [](const BandInterval& a, const BandInterval& b) { return a.lo < b.lo; });
  table.merged_bands.clear();
  table.gaps.clear();
  for (const auto& b : sorted) {
    // Merge overlapping bands and exact touchings (degenerate band contacts).
    if (!table.merged_bands.empty() &&
        b.lo <= table.merged_bands.back().hi + 1e-10) {
      table.merged_bands.back().hi = std::max(table.merged_bands.back().hi, b.hi);
    } else {
      table.merged_bands.push_back(b);
    }
  }
  for (std::size_t i = 0; i + 1 < table.merged_bands.size(); ++i) {
    table.gaps.push_back(
        {table.merged_bands[i].hi, table.merged_bands[i + 1].lo});
  }
}

BandTable sample_grid(const TrigSymbol& symbol, const FluxContext& flux,
                      const KGridSpec& grid, int threads) {
  BandTable table;
  table.eta = flux.eta;
  table.grid = grid;
  table.k1s.resize(grid.n1);
  table.k2s.resize(grid.n2);
  for (int i = 0; i < grid.n1; ++i) table.k1s[i] = -kPi + kTwoPi * i / grid.n1;
  for (int i = 0; i < grid.n2; ++i) table.k2s[i] = -kPi + kTwoPi * i / grid.n2;
  table.energies.assign(flux.eta,
                        std::vector<double>(std::size_t(grid.n1) * grid.n2));
  parallel_for(
      std::size_t(grid.n1) * grid.n2,
      [&](std::size_t idx) {
        int i1 = int(idx) / grid.n2;
        int i2 = int(idx) % grid.n2;
        auto ev = hermitian_eigenvalues(bloch_matrix(
            symbol, flux, Quasimomentum(table.k1s[i1], table.k2s[i2])));
        for (int j = 0; j < flux.eta; ++j) table.energies[j][idx] = ev[j];
      },
      threads);
  table.band_ranges.resize(flux.eta);
  for (int j = 0; j < flux.eta; ++j) {
    auto [lo, hi] =
        std::minmax_element(table.energies[j].begin(), table.energies[j].end());
    table.band_ranges[j] = {*lo, *hi};
  }
  return table;
}

double total_bandwidth(const BandTable& t) {
  double s = 0.0;
  for (const auto& b : t.merged_bands) s += b.width();
  return s;
}

void polish_band_extrema(const TrigSymbol& symbol, const FluxContext& flux,
                         BandTable& table, int threads) {
  const int n1 = table.grid.n1, n2 = table.grid.n2;
  const double cell1 = kTwoPi / n1, cell2 = kTwoPi / n2;
  parallel_for(
      std::size_t(flux.eta),
      [&](std::size_t j) {
        auto band_at = [&](double k1, double k2) {
          return hermitian_eigenvalues(
              bloch_matrix(symbol, flux, Quasimomentum(k1, k2)))[j];
        };
        const auto& e = table.energies[j];
        auto lo_it = std::min_element(e.begin(), e.end());
        auto hi_it = std::max_element(e.begin(), e.end());
        auto refine = [&](std::size_t idx, int sign) {
          double k1 = table.k1s[idx / n2], k2 = table.k2s[idx % n2];
          auto f = [&](double a, double b) { return sign * band_at(a, b); };
          auto argmin = nelder_mead_2d(f, k1, k2, 0.5 * std::max(cell1, cell2),
                                       1e-13, 300);
          return sign * f(argmin[0], argmin[1]);
        };
        double lo = std::min(*lo_it, refine(lo_it - e.begin(), +1));
        double hi = std::max(*hi_it, refine(hi_it - e.begin(), -1));
        table.band_ranges[j] = {lo, hi};
      },
      threads);
}

}  // namespace

BandTable band_structure(const TrigSymbol& symbol, const FluxContext& flux,
                         const BandStructureOptions& opts) {
  if (opts.grid.n1 < 2 || opts.grid.n2 < 2) {
    throw Error("band_structure: k-grid must be at least 2x2");
  }
  KGridSpec grid = opts.grid;
  BandTable table = sample_grid(symbol, flux, grid, opts.threads);
  merge_intervals(table);
  if (opts.refine) {
    for (int r = 0; r < opts.max_refine_doublings; ++r) {
      KGridSpec finer{grid.n1 * 2, grid.n2 * 2};
      BandTable next = sample_grid(symbol, flux, finer, opts.threads);
      merge_intervals(next);
      bool stable =
          std::abs(total_bandwidth(next) - total_bandwidth(table)) < opts.refine_tol;
      grid = finer;
      table = std::move(next);
      if (stable) break;
    }
  }
  if (opts.polish_extrema) {
    polish_band_extrema(symbol, flux, table, opts.threads);
    merge_intervals(table);
  }
  return table;
}

std::vector<SpectralItem> widths_near(const BandTable& table, double E0,
                                      double window) {
  if (!(window > 0.0)) throw Error("widths_near: window must be > 0");
  std::vector<SpectralItem> items;
  const double lo = E0 - window, hi = E0 + window;
  for (const auto& b : table.merged_bands) {
    if (b.hi >= lo && b.lo <= hi) {
      items.push_back({SpectralItem::Kind::Band, b.width(), b.center(), b.lo, b.hi});
    }
  }
  for (const auto& g : table.gaps) {
    if (g.hi >= lo && g.lo <= hi) {
      items.push_back({SpectralItem::Kind::Gap, g.width(), g.center(), g.lo, g.hi});
    }
  }
  if (items.empty()) {
    throw EmptyWindow("no spectrum intersects the requested window");
  }
  std::sort(items.begin(), items.end(),
            [](const SpectralItem& a, const SpectralItem& b) {
              return a.center < b.center;
            });
  return items;
}

std::string band_table_to_csv(const BandTable& table) {
  std::ostringstream os;
  os.precision(15);
  os << "eta,k1,k2,band_index,energy\n";
  for (int j = 0; j < table.eta; ++j) {
    for (int i1 = 0; i1 < table.grid.n1; ++i1) {
      for (int i2 = 0; i2 < table.grid.n2; ++i2) {
        os << table.eta << ',' << table.k1s[i1] << ',' << table.k2s[i2] << ','
           << j + 1 << ',' << table.energy(j, i1, i2) << '\n';
      }
    }
  }
  return os.str();
}

std::string band_table_to_json(const BandTable& table) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["eta"] = table.eta;
  auto dump = [](const std::vector<BandInterval>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : v) {
      arr.push_back({{"lo", b.lo}, {"hi", b.hi}, {"width", b.width()}});
    }
    return arr;
  };
  j["bands"] = dump(table.merged_bands);
  j["gaps"] = dump(table.gaps);
  return j.dump(2);
}

}  // namespace harperband
