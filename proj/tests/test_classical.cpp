#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "harperband/classical.hpp"

using namespace harperband;

namespace {

const CriticalPoint* find_cp(const std::vector<CriticalPoint>& cps,
                             CriticalKind kind, double value) {
  for (const auto& c : cps) {
    if (c.kind == kind && std::abs(c.value - value) < 1e-8) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("critical points of 2 cos p + cos x") {
  TrigSymbol H = TrigSymbol::harper(0.5);
  auto cps = find_critical_points(H);
  REQUIRE(cps.size() == 4);
  CHECK(find_cp(cps, CriticalKind::Minimum, -3.0));
  CHECK(find_cp(cps, CriticalKind::Maximum, 3.0));
  const CriticalPoint* s1 = find_cp(cps, CriticalKind::Saddle, 1.0);
  const CriticalPoint* s2 = find_cp(cps, CriticalKind::Saddle, -1.0);
  REQUIRE(s1);
  REQUIRE(s2);
  CHECK(s1->w == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(torus_dist(s1->location.vec(), Vec2{0.0, kPi}) < 1e-8);
  CHECK(torus_dist(s2->location.vec(), Vec2{kPi, 0.0}) < 1e-8);
}

TEST_CASE("trace_level_set: closed orbit around the minimum") {
  TrigSymbol H = TrigSymbol::harper(0.5);
  auto orbits = trace_level_set(H, -2.5);
  REQUIRE(orbits.size() == 1);
  const Trajectory& o = orbits[0];
  CHECK(o.closed);
  CHECK(o.lift == std::array<int, 2>{0, 0});
  for (std::size_t i = 0; i < o.samples.size(); i += 7) {
    const Vec2& z = o.samples[i];
    CHECK(std::abs(H.evaluate(Point2(z.p, z.x)) + 2.5) < 1e-8);
  }
}

TEST_CASE("trace_level_set: open orbits wind in x between the saddles") {
  TrigSymbol H = TrigSymbol::harper(0.5);
  auto orbits = trace_level_set(H, 0.0);
  REQUIRE(orbits.size() == 2);
  std::array<int, 2> seen{0, 0};
  for (const auto& o : orbits) {
    CHECK(!o.closed);
    CHECK(o.lift[0] == 0);
    CHECK(std::abs(o.lift[1]) == 1);
    seen[o.lift[1] > 0 ? 0 : 1]++;
  }
  CHECK(seen == std::array<int, 2>{1, 1});
}

TEST_CASE("separatrix graphs of the three scenario families") {
  // One saddle, two homoclinic loops.
  auto y = separatrix_graph(TrigSymbol::harper(0.5), 1.0);
  CHECK(y.vertices.size() == 1);
  CHECK(y.edges.size() == 2);

  // Two saddles on the level, four connecting arcs.
  auto x = separatrix_graph(
      parse_symbol(R"({"terms":[{"cos":[1,0],"amp":2},{"cos":[0,2],"amp":0.6}]})"),
      1.4);
  CHECK(x.vertices.size() == 2);
  CHECK(x.edges.size() == 4);
  bool any_x_wind = false;
  for (const auto& e : x.edges) {
    CHECK(e.lift[0] == 0);
    any_x_wind = any_x_wind || e.lift[1] != 0;
  }
  CHECK(any_x_wind);

  // Critical harper: the separatrix is non-compact in both directions.
  auto d = separatrix_graph(TrigSymbol::harper(1.0), 0.0);
  CHECK(d.vertices.size() == 2);
  CHECK(d.edges.size() == 4);
  bool any_p_wind = false;
  for (const auto& e : d.edges) any_p_wind = any_p_wind || e.lift[0] != 0;
  CHECK(any_p_wind);

  // Every polyline stays on the level set and runs saddle to saddle.
  for (const SeparatrixGraph* g : {&y, &x, &d}) {
    for (const auto& e : g->edges) {
      REQUIRE(e.polyline.size() > 10);
      const auto& sym = g == &y   ? TrigSymbol::harper(0.5)
                        : g == &d ? TrigSymbol::harper(1.0)
                                  : parse_symbol(
                                        R"({"terms":[{"cos":[1,0],"amp":2},
                                                     {"cos":[0,2],"amp":0.6}]})");
      for (std::size_t i = 5; i + 5 < e.polyline.size(); i += 11) {
        const Vec2& z = e.polyline[i];
        CHECK(std::abs(sym.evaluate(Point2(z.p, z.x)) - g->energy) < 1e-7);
      }
      const auto& vs = g->vertices[e.start_vertex].saddle.location;
      const auto& ve = g->vertices[e.end_vertex].saddle.location;
      CHECK(torus_dist(e.polyline.front(), vs.vec()) < 1e-5);
      CHECK(torus_dist(e.polyline.back(), ve.vec()) < 1e-5);
    }
  }
}

TEST_CASE("saddle branch frames are consistent") {
  auto g = separatrix_graph(TrigSymbol::harper(0.5), 1.0);
  const SeparatrixVertex& v = g.vertices[0];
  // Branches come in opposite pairs and all are unit vectors.
  for (int i : {1, 2, 3, 4}) {
    CHECK(v.branch_dirs[i].norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK((v.branch_dirs[1] + v.branch_dirs[2]).norm() < 1e-10);
  CHECK((v.branch_dirs[3] + v.branch_dirs[4]).norm() < 1e-10);
  CHECK(std::abs(v.quadrant13_sign) == 1);
}

TEST_CASE("reeb graph of 2 cos p + cos x") {
  auto r = reeb_graph(TrigSymbol::harper(0.5));
  REQUIRE(r.nodes.size() >= 4);
  CHECK(r.nodes.front().energy == doctest::Approx(-3.0).epsilon(1e-7));
  CHECK(r.nodes.back().energy == doctest::Approx(3.0).epsilon(1e-7));
  // One closed family near each extremum, two open families in between.
  CHECK(r.edges_crossing(-2.0) == 1);
  CHECK(r.edges_crossing(0.0) == 2);
  CHECK(r.edges_crossing(2.0) == 1);
}

TEST_CASE("equalize_saddles tunes an amplitude until saddle values agree") {
  TrigSymbol H = parse_symbol(
      R"({"terms":[{"cos":[1,0],"amp":2},{"cos":[0,2],"amp":0.6},
                   {"cos":[0,1],"amp":0.2}]})");
  TrigSymbol G = equalize_saddles(H, Freq{0, 1}, Point2(kPi, kPi),
                                  Point2(kPi, 0.0), -0.5, 0.5, 1e-10);
  auto cps = find_critical_points(G);
  std::vector<double> saddle_vals;
  for (const auto& c : cps) {
    if (c.kind == CriticalKind::Saddle && c.value < 0.0) {
      saddle_vals.push_back(c.value);
    }
  }
  REQUIRE(saddle_vals.size() == 2);
  CHECK(std::abs(saddle_vals[0] - saddle_vals[1]) < 1e-8);
  CHECK(std::abs(G.cosine_amp(Freq{0, 1})) < 1e-8);
}
