#pragma once

#include <optional>
#include <string>

#include "harperband/landau.hpp"
#include "harperband/quantum.hpp"
#include "harperband/regular_bs.hpp"
#include "harperband/singular_bs.hpp"

namespace harperband {

struct RunConfig {
  TrigSymbol symbol;
  int eta = 64;
  KGridSpec kgrid;
  std::optional<std::pair<double, double>> window;
  std::string format = "json";  // json | csv | svg
  int threads = 0;
};

// Classical analysis: critical points, Reeb graph, separatrix at the saddle
// level nearest the window center (if any).
std::string run_analyze(const RunConfig& cfg);

// Exact Bloch band structure.
std::string run_spectrum(const RunConfig& cfg);

// Semiclassical predictions only.  The window decides what is predicted: a
// saddle value inside selects the singular scenario, otherwise the regular
// Bohr-Sommerfeld data of the window.
std::string run_predict(const RunConfig& cfg);

// Exact spectrum and semiclassical prediction side by side.
std::string run_compare(const RunConfig& cfg);

struct LandauRunConfig {
  Potential2D potential;
  double h = 0.1;
  double eps = 1.0;
  int n_lo = 0;
  int n_hi = 2;
};

std::string run_landau(const LandauRunConfig& cfg);

// Minimal SVG renderers.
std::string bands_to_svg(const BandTable& table);
std::string separatrix_to_svg(const SeparatrixGraph& graph);

}  // namespace harperband
