#include "harperband/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "harperband/classical.hpp"

namespace harperband {

namespace {

using nlohmann::json;

json critical_points_json(const std::vector<CriticalPoint>& crits) {
  json arr = json::array();
  for (const auto& c : crits) {
    const char* kind = c.kind == CriticalKind::Minimum   ? "min"
                       : c.kind == CriticalKind::Maximum ? "max"
                                                         : "saddle";
    json j = {{"p", c.location.p}, {"x", c.location.x},
              {"value", c.value},  {"kind", kind}};
    if (c.kind == CriticalKind::Saddle) j["w"] = c.w;
    arr.push_back(j);
  }
  return arr;
}

std::optional<double> saddle_in_window(const std::vector<CriticalPoint>& crits,
                                       double lo, double hi) {
  std::optional<double> best;
  double center = 0.5 * (lo + hi);
  for (const auto& c : crits) {
    if (c.kind != CriticalKind::Saddle) continue;
    if (c.value <= lo || c.value >= hi) continue;
    if (!best || std::abs(c.value - center) < std::abs(*best - center)) {
      best = c.value;
    }
  }
  return best;
}

std::pair<double, double> default_window(const TrigSymbol& symbol) {
  auto crits = find_critical_points(symbol);
  return {crits.front().value, crits.back().value};
}

json predict_json(const RunConfig& cfg, double lo, double hi) {
  const double h = kTwoPi / cfg.eta;
  auto crits = find_critical_points(cfg.symbol);
  json out;
  if (auto Es = saddle_in_window(crits, lo, hi)) {
    auto build = build_scenario(cfg.symbol, *Es, h);
    const ScenarioParams& sp = build.params;
    out["mode"] = "singular";
    out["scenario"] = sp.kind == Scenario::Y   ? "Y"
                      : sp.kind == Scenario::X ? "X"
                                               : "Deg";
    out["saddle_energy"] = sp.E;
    out["w"] = sp.w;
    out["wt"] = sp.wt;
    json edges = json::array();
    for (const auto& g : sp.gamma) {
      edges.push_back({{"B", g.B}, {"J", g.J}, {"m", g.m}});
    }
    out["gamma"] = edges;
    auto wd = scenario_widths(sp, 0.0);
    out["widths_at_saddle"] = {
        {"band", wd.band}, {"gap1", wd.gap1}, {"gap2", wd.gap2}};
    if (sp.kind == Scenario::Deg) {
      auto km = kmax(sp, 0.0);
      out["kmax"] = {km[0], km[1]};
    }
    // Dispersion roots of the full quantization system at the zone corners.
    double span = 6.0 * kPi * std::max(sp.w, sp.wt) / std::abs(std::log(h));
    json roots = json::array();
    for (auto [k1, k2] : {std::pair{0.0, 0.0}, {0.0, kPi}, {kPi, 0.0}, {kPi, kPi}}) {
      json r = {{"k1", k1}, {"k2", k2}};
      json lam = json::array();
      for (double l : build.system.solve_lambda(-span, span, k1, k2)) {
        lam.push_back(sp.E + h * l);
      }
      r["energies"] = lam;
      roots.push_back(r);
    }
    out["dispersion_samples"] = roots;
  } else {
    out["mode"] = "regular";
    auto families = orbit_families(cfg.symbol, lo, hi);
    json fams = json::array();
    for (const auto& f : families) {
      fams.push_back({{"lift", {f.lift[0], f.lift[1]}},
                      {"maslov", f.maslov},
                      {"action_lo", f.actions.front()},
                      {"action_hi", f.actions.back()}});
    }
    out["families"] = fams;
    json levels = json::array();
    for (const auto& l : flat_band_levels(families, h)) {
      levels.push_back({{"family", l.family}, {"n", l.n}, {"energy", l.energy}});
    }
    out["flat_levels"] = levels;
    const OrbitFamily* plus = nullptr;
    const OrbitFamily* minus = nullptr;
    for (const auto& f : families) {
      if (f.lift[0] == 0 && f.lift[1] == 1) plus = &f;
      if (f.lift[0] == 0 && f.lift[1] == -1) minus = &f;
    }
    if (plus && minus) {
      json cross = json::array();
      for (double e : open_crossing_energies(*plus, *minus, h)) cross.push_back(e);
      out["open_crossings"] = cross;
    }
  }
  return out;
}

std::string emit(const json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  throw IoError("unsupported format for this subcommand: " + format);
}

}  // namespace

std::string run_analyze(const RunConfig& cfg) {
  auto crits = find_critical_points(cfg.symbol);
  json out;
  out["schema_version"] = 1;
  out["symbol"] = json::parse(serialize_symbol(cfg.symbol));
  out["critical_points"] = critical_points_json(crits);
  out["reeb"] = json::parse(reeb_to_json(reeb_graph(cfg.symbol)));
  auto [lo, hi] = cfg.window ? *cfg.window : default_window(cfg.symbol);
  if (auto Es = saddle_in_window(crits, lo, hi)) {
    auto graph = separatrix_graph(cfg.symbol, *Es);
    if (cfg.format == "svg") return separatrix_to_svg(graph);
    out["separatrix"] = json::parse(separatrix_to_json(graph));
  } else if (cfg.format == "svg") {
    throw EmptyWindow("no saddle in the window; nothing to draw");
  }
  return emit(out, cfg.format);
}

std::string run_spectrum(const RunConfig& cfg) {
  BandStructureOptions opts;
  opts.grid = cfg.kgrid;
  opts.threads = cfg.threads;
  auto table = band_structure(cfg.symbol, FluxContext(cfg.eta), opts);
  if (cfg.format == "csv") return band_table_to_csv(table);
  if (cfg.format == "svg") return bands_to_svg(table);
  return band_table_to_json(table) + "\n";
}

std::string run_predict(const RunConfig& cfg) {
  auto [lo, hi] = cfg.window ? *cfg.window : default_window(cfg.symbol);
  json out = predict_json(cfg, lo, hi);
  out["schema_version"] = 1;
  out["eta"] = cfg.eta;
  out["h"] = kTwoPi / cfg.eta;
  return emit(out, cfg.format);
}

std::string run_compare(const RunConfig& cfg) {
  auto [lo, hi] = cfg.window ? *cfg.window : default_window(cfg.symbol);
  BandStructureOptions opts;
  opts.grid = cfg.kgrid;
  opts.threads = cfg.threads;
  opts.polish_extrema = true;
  auto table = band_structure(cfg.symbol, FluxContext(cfg.eta), opts);
  json out;
  out["schema_version"] = 1;
  out["eta"] = cfg.eta;
  out["h"] = kTwoPi / cfg.eta;
  out["window"] = {lo, hi};
  json spectral = json::array();
  try {
    for (const auto& it : widths_near(table, 0.5 * (lo + hi), 0.5 * (hi - lo))) {
      spectral.push_back({{"kind", it.kind == SpectralItem::Kind::Band ? "band" : "gap"},
                          {"lo", it.lo},
                          {"hi", it.hi},
                          {"width", it.width},
                          {"center", it.center}});
    }
  } catch (const EmptyWindow&) {
    // keep the empty list; prediction may still be informative
  }
  out["exact"] = spectral;
  out["prediction"] = predict_json(cfg, lo, hi);
  return emit(out, cfg.format);
}

std::string run_landau(const LandauRunConfig& cfg) {
  json out;
  out["schema_version"] = 1;
  out["h"] = cfg.h;
  out["eps"] = cfg.eps;
  json levels = json::array();
  for (const auto& rep :
       level_topology_report(cfg.potential, cfg.h, cfg.eps, cfg.n_lo, cfg.n_hi)) {
    LandauParams lp{rep.n, cfg.h, cfg.eps};
    json j;
    j["n"] = rep.n;
    j["I_n"] = rep.I_n;
    j["symbol"] = json::parse(serialize_symbol(average_first_order(cfg.potential, lp)));
    j["minima"] = rep.minima;
    j["maxima"] = rep.maxima;
    j["saddles"] = rep.saddles;
    j["saddle_values"] = rep.saddle_values;
    levels.push_back(j);
  }
  out["levels"] = levels;
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

namespace {

const char* kSvgHeader =
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%W%\" height=\"%H%\" "
    "viewBox=\"0 0 %W% %H%\">\n";

std::string svg_open(int w, int h) {
  std::string s = kSvgHeader;
  auto sub = [&](const std::string& key, int v) {
    std::string out;
    std::size_t pos = 0, prev = 0;
    while ((pos = s.find(key, prev)) != std::string::npos) {
      out += s.substr(prev, pos - prev) + std::to_string(v);
      prev = pos + key.size();
    }
    out += s.substr(prev);
    s = out;
  };
  sub("%W%", w);
  sub("%H%", h);
  return s;
}

}  // namespace

std::string bands_to_svg(const BandTable& table) {
  const int W = 640, H = 120;
  double lo = table.merged_bands.front().lo;
  double hi = table.merged_bands.back().hi;
  double span = hi - lo;
  if (span <= 0.0) span = 1.0;
  std::ostringstream os;
  os << svg_open(W, H);
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  for (const auto& b : table.merged_bands) {
    double x0 = 20 + (b.lo - lo) / span * (W - 40);
    double x1 = 20 + (b.hi - lo) / span * (W - 40);
    os << "<rect x=\"" << x0 << "\" y=\"40\" width=\"" << std::max(0.5, x1 - x0)
       << "\" height=\"40\" fill=\"steelblue\"/>\n";
  }
  os << "<text x=\"20\" y=\"110\" font-size=\"12\">" << lo << "</text>\n";
  os << "<text x=\"" << W - 80 << "\" y=\"110\" font-size=\"12\">" << hi
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string separatrix_to_svg(const SeparatrixGraph& graph) {
  const int W = 480, H = 480;
  auto sx = [&](double x) { return reduce_2pi(x) / kTwoPi * (W - 40) + 20; };
  auto sy = [&](double p) { return H - 20 - reduce_2pi(p) / kTwoPi * (H - 40); };
  std::ostringstream os;
  os << svg_open(W, H);
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  for (const auto& e : graph.edges) {
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    double px = 1e300, pp = 1e300;
    for (const auto& z : e.polyline) {
      // break the polyline at torus wrap-arounds
      if (px < 1e299 &&
          (std::abs(reduce_2pi(z.x) - px) > kPi || std::abs(reduce_2pi(z.p) - pp) > kPi)) {
        os << "\"/>\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
      }
      px = reduce_2pi(z.x);
      pp = reduce_2pi(z.p);
      os << sx(z.x) << ',' << sy(z.p) << ' ';
    }
    os << "\"/>\n";
  }
  for (const auto& v : graph.vertices) {
    os << "<circle cx=\"" << sx(v.saddle.location.x) << "\" cy=\""
       << sy(v.saddle.location.p) << "\" r=\"4\" fill=\"crimson\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace harperband
