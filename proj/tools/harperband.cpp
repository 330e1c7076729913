#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "harperband/harness.hpp"

namespace {

using namespace harperband;

std::string slurp_or_inline(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw IoError("cannot read " + arg.substr(1));
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }
  return arg;
}

void write_out(const std::string& path, const std::string& payload) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << payload;
}

KGridSpec parse_kgrid(const std::string& s) {
  KGridSpec g;
  if (s.empty()) return g;
  if (std::sscanf(s.c_str(), "%dx%d", &g.n1, &g.n2) != 2 || g.n1 < 2 || g.n2 < 2) {
    throw CLI::ValidationError("--kgrid", "expected N1xN2 with N >= 2");
  }
  return g;
}

std::optional<std::pair<double, double>> parse_window(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double lo, hi;
  if (std::sscanf(s.c_str(), "%lf:%lf", &lo, &hi) != 2 || !(lo < hi)) {
    throw CLI::ValidationError("--window", "expected LO:HI with LO < HI");
  }
  return std::make_pair(lo, hi);
}

Potential2D parse_potential(const std::string& text, double a, double b) {
  // Same term schema as the symbol parser, but interpreted on the (a, b)
  // reciprocal lattice.
  TrigSymbol s = parse_symbol(text);
  Potential2D v;
  v.a = a;
  v.b = b;
  v.coeffs = s.coeffs();
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for Harper-like operators"};
  app.require_subcommand(1);

  std::string symbol_arg, kgrid_arg, window_arg, out_arg, format = "json";
  std::string periods_arg = "6.283185307179586,6.283185307179586";
  std::string levels_arg = "0:2";
  int eta = 64, threads = 0;
  double h_landau = 0.1, eps_landau = 1.0;

  auto add_common = [&](CLI::App* cmd, bool needs_symbol = true) {
    if (needs_symbol) {
      cmd->add_option("--symbol", symbol_arg,
                      "symbol JSON (inline or @file)")->required();
    }
    cmd->add_option("--eta", eta, "flux quanta per cell");
    cmd->add_option("--kgrid", kgrid_arg, "quasimomentum grid, e.g. 64x64");
    cmd->add_option("--window", window_arg, "energy window LO:HI");
    cmd->add_option("--out", out_arg, "output path (default stdout)");
    cmd->add_option("--format", format, "json | csv | svg");
    cmd->add_option("--threads", threads,
                    "worker threads (0 = HARPERBAND_THREADS or hardware)");
  };

  auto* c_analyze = app.add_subcommand("analyze", "classical phase-space analysis");
  auto* c_spectrum = app.add_subcommand("spectrum", "exact Bloch band structure");
  auto* c_predict = app.add_subcommand("predict", "semiclassical predictions");
  auto* c_compare = app.add_subcommand("compare", "exact vs semiclassical");
  auto* c_landau = app.add_subcommand("landau", "averaged Landau-level symbols");
  for (auto* c : {c_analyze, c_spectrum, c_predict, c_compare}) add_common(c);
  c_landau->add_option("--symbol", symbol_arg,
                       "potential JSON (inline or @file)")->required();
  c_landau->add_option("--periods", periods_arg, "potential periods A,B");
  c_landau->add_option("--hval", h_landau, "semiclassical parameter");
  c_landau->add_option("--eps", eps_landau, "potential strength");
  c_landau->add_option("--levels", levels_arg, "Landau level range LO:HI");
  c_landau->add_option("--out", out_arg, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::string payload;
    if (c_landau->parsed()) {
      double a, b;
      if (std::sscanf(periods_arg.c_str(), "%lf,%lf", &a, &b) != 2 ||
          a <= 0.0 || b <= 0.0) {
        std::cerr << "error: --periods expects A,B with A,B > 0\n";
        return 2;
      }
      LandauRunConfig cfg;
      cfg.potential = parse_potential(slurp_or_inline(symbol_arg), a, b);
      cfg.h = h_landau;
      cfg.eps = eps_landau;
      if (std::sscanf(levels_arg.c_str(), "%d:%d", &cfg.n_lo, &cfg.n_hi) != 2 ||
          cfg.n_lo < 0 || cfg.n_hi < cfg.n_lo) {
        std::cerr << "error: --levels expects LO:HI with 0 <= LO <= HI\n";
        return 2;
      }
      payload = run_landau(cfg);
    } else {
      RunConfig cfg;
      cfg.symbol = parse_symbol(slurp_or_inline(symbol_arg));
      cfg.eta = eta;
      cfg.kgrid = parse_kgrid(kgrid_arg);
      cfg.window = parse_window(window_arg);
      cfg.format = format;
      cfg.threads = threads;
      if (cfg.eta < 1) {
        std::cerr << "error: --eta must be >= 1\n";
        return 2;
      }
      if (c_analyze->parsed()) payload = run_analyze(cfg);
      else if (c_spectrum->parsed()) payload = run_spectrum(cfg);
      else if (c_predict->parsed()) payload = run_predict(cfg);
      else payload = run_compare(cfg);
    }
    write_out(out_arg, payload);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
