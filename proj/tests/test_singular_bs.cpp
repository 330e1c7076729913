#include <doctest.h>

#include <cmath>
#include <random>

#include "harperband/singular_bs.hpp"

using namespace harperband;

namespace {

ScenarioBuild build_y() {
  return build_scenario(TrigSymbol::harper(0.5), 1.0, kTwoPi / 128.0);
}
ScenarioBuild build_x() {
  return build_scenario(
      parse_symbol(R"({"terms":[{"cos":[1,0],"amp":2},{"cos":[0,2],"amp":0.6}]})"),
      1.4, kTwoPi / 128.0);
}
ScenarioBuild build_deg() {
  return build_scenario(TrigSymbol::harper(1.0), 0.0, kTwoPi / 128.0);
}

}  // namespace

TEST_CASE("script_E has the branching modulus") {
  double h = kTwoPi / 64.0;
  for (double eps : {-2.0, -0.3, 0.0, 0.7, 3.5}) {
    double want = 1.0 / std::sqrt(1.0 + std::exp(-kTwoPi * eps));
    CHECK(std::abs(script_E(eps, h)) == doctest::Approx(want).epsilon(1e-12));
  }
  // Transmission + reflection probabilities sum to one.
  double m = std::abs(script_E(0.4, h));
  CHECK(m * m * (1.0 + std::exp(-kTwoPi * 0.4)) == doctest::Approx(1.0));
}

TEST_CASE("scenario detection on the three model families") {
  CHECK(build_y().params.kind == Scenario::Y);
  CHECK(build_x().params.kind == Scenario::X);
  CHECK(build_deg().params.kind == Scenario::Deg);

  auto y = build_y();
  CHECK(y.system.vertices.size() == 1);
  CHECK(y.system.edges.size() == 2);
  CHECK(y.params.w == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(y.params.gamma.size() == 2);

  auto x = build_x();
  CHECK(x.system.vertices.size() == 2);
  CHECK(x.system.edges.size() == 4);
  CHECK(x.params.gamma.size() == 4);

  auto d = build_deg();
  CHECK(d.system.vertices.size() == 2);
  CHECK(d.system.edges.size() == 4);
  CHECK(d.params.w == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(d.params.wt == doctest::Approx(2.0).epsilon(1e-8));
  // The cycle labeling winds once in p and once in x.
  auto& g = d.system;
  std::array<int, 2> l14{0, 0}, l12{0, 0};
  l14[0] = g.edges[d.gamma_edges[0]].lift[0] + g.edges[d.gamma_edges[3]].lift[0];
  l14[1] = g.edges[d.gamma_edges[0]].lift[1] + g.edges[d.gamma_edges[3]].lift[1];
  l12[0] = g.edges[d.gamma_edges[0]].lift[0] + g.edges[d.gamma_edges[1]].lift[0];
  l12[1] = g.edges[d.gamma_edges[0]].lift[1] + g.edges[d.gamma_edges[1]].lift[1];
  CHECK(std::abs(l14[0]) == 1);
  CHECK(l14[1] == 0);
  CHECK(l12[0] == 0);
  CHECK(std::abs(l12[1]) == 1);
}

TEST_CASE("saddle scattering is unitary") {
  for (auto b : {build_y(), build_x(), build_deg()}) {
    for (int v = 0; v < int(b.system.vertices.size()); ++v) {
      for (double lam : {-2.0, -0.1, 0.0, 0.4, 3.0}) {
        Eigen::Matrix2cd S = b.system.scatter(v, lam);
        CHECK((S * S.adjoint() - Eigen::Matrix2cd::Identity()).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("secular residual vanishes exactly where the full system is singular") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uk(-kPi, kPi), ul(-2.0, 2.0);
  for (auto b : {build_y(), build_x(), build_deg()}) {
    for (int probe = 0; probe < 20; ++probe) {
      double k1 = uk(rng), k2 = uk(rng), lam = ul(rng);
      double r = std::abs(b.system.residual(lam, k1, k2));
      double d = b.system.det_abs(lam, k1, k2);
      CHECK(std::abs(r - d) < 1e-9 * std::max(1.0, d));
    }
    auto roots = b.system.solve_lambda(-2.0, 2.0, 0.3, 1.1);
    REQUIRE(!roots.empty());
    for (double l : roots) {
      CHECK(b.system.det_abs(l, 0.3, 1.1) < 1e-8);
    }
  }
}

TEST_CASE("width formulas are positive and h-small") {
  double h = kTwoPi / 128.0;
  auto y = build_y();
  WidthEstimate wy = scenario_widths(y.params, 0.0);
  CHECK(wy.band > 0.0);
  CHECK(wy.gap1 > 0.0);
  CHECK(wy.band < 10.0 * h);
  // At lambda0 = 0 the Y band and gap have the same leading width.
  CHECK(wy.band == doctest::Approx(wy.gap1).epsilon(1e-9));

  auto x = build_x();
  WidthEstimate wx = scenario_widths(x.params, 0.0);
  CHECK(wx.band > 0.0);
  // The two lobes of this symbol are congruent, so Delta1 = 0 and the first
  // gap closes at leading order while the second stays open.
  CHECK(wx.gap1 < 1e-12);
  CHECK(wx.gap2 > 0.0);

  auto d = build_deg();
  WidthEstimate wd = scenario_widths(d.params, 0.0);
  CHECK(wd.band > 0.0);
  auto km = kmax(d.params, 0.0);
  CHECK(std::abs(km[0]) <= kPi + 1e-12);
  CHECK(std::abs(km[1]) <= kPi + 1e-12);
}

TEST_CASE("dispersion_mu brackets the solved roots for the Y family") {
  auto y = build_y();
  auto mus = dispersion_mu(y.params, 0.0, 0.0, 0.7, -8.0, 8.0);
  CHECK(!mus.empty());
  for (std::size_t i = 1; i < mus.size(); ++i) CHECK(mus[i] >= mus[i - 1]);
}
