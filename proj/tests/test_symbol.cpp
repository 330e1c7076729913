#include <doctest.h>

#include "harperband/symbol.hpp"

using namespace harperband;

TEST_CASE("harper symbol evaluates to 2 cos p + 2 alpha cos x") {
  TrigSymbol H = TrigSymbol::harper(0.7);
  for (double p : {0.0, 0.3, 1.9, 4.4}) {
    for (double x : {0.0, 0.8, 2.7, 5.9}) {
      double want = 2.0 * std::cos(p) + 1.4 * std::cos(x);
      CHECK(H.evaluate(Point2(p, x)) == doctest::Approx(want).epsilon(1e-14));
    }
  }
  CHECK(H.cosine_amp(Freq{1, 0}) == doctest::Approx(2.0));
  CHECK(H.cosine_amp(Freq{0, 1}) == doctest::Approx(1.4));
  CHECK(H.coeff_scale() == doctest::Approx(3.4));
}

TEST_CASE("gradient and hessian match finite differences") {
  TrigSymbol H = parse_symbol(
      R"({"terms":[{"cos":[1,0],"amp":2},{"cos":[0,2],"amp":0.6},
                   {"sin":[1,1],"amp":0.31},{"cos":[2,-1],"amp":0.11}]})");
  const double d = 1e-5;
  for (double p : {0.21, 2.9}) {
    for (double x : {1.1, 5.3}) {
      Vec2 g = H.gradient(Point2(p, x));
      double gp = (H.evaluate(Point2(p + d, x)) - H.evaluate(Point2(p - d, x))) /
                  (2.0 * d);
      double gx = (H.evaluate(Point2(p, x + d)) - H.evaluate(Point2(p, x - d))) /
                  (2.0 * d);
      CHECK(g.p == doctest::Approx(gp).epsilon(1e-8));
      CHECK(g.x == doctest::Approx(gx).epsilon(1e-8));
      Mat2 h = H.hessian(Point2(p, x));
      double hpp = (H.gradient(Point2(p + d, x)).p -
                    H.gradient(Point2(p - d, x)).p) / (2.0 * d);
      double hpx = (H.gradient(Point2(p, x + d)).p -
                    H.gradient(Point2(p, x - d)).p) / (2.0 * d);
      double hxx = (H.gradient(Point2(p, x + d)).x -
                    H.gradient(Point2(p, x - d)).x) / (2.0 * d);
      CHECK(h.pp == doctest::Approx(hpp).epsilon(1e-7));
      CHECK(h.px == doctest::Approx(hpx).epsilon(1e-7));
      CHECK(h.xx == doctest::Approx(hxx).epsilon(1e-7));
    }
  }
}

TEST_CASE("parse/serialize round trip") {
  TrigSymbol H = parse_symbol(
      R"({"terms":[{"cos":[1,0],"amp":2},{"sin":[0,1],"amp":-0.5},
                   {"m":1,"n":1,"re":0.25,"im":0.1},
                   {"m":-1,"n":-1,"re":0.25,"im":-0.1}]})");
  TrigSymbol G = parse_symbol(serialize_symbol(H));
  for (double p : {0.2, 1.7, 4.0}) {
    for (double x : {0.5, 3.1}) {
      CHECK(G.evaluate(Point2(p, x)) ==
            doctest::Approx(H.evaluate(Point2(p, x))).epsilon(1e-14));
    }
  }
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_symbol("not json"), ParseError);
  CHECK_THROWS_AS(parse_symbol(R"({"nope":1})"), ParseError);
  CHECK_THROWS_AS(parse_symbol(R"({"terms":[{"cos":[1],"amp":1}]})"), ParseError);
  // Explicit coefficient without its conjugate partner.
  CHECK_THROWS_AS(parse_symbol(R"({"terms":[{"m":1,"n":2,"re":0,"im":0.3}]})"),
                  RealityViolation);
  CHECK_THROWS_AS(parse_symbol(R"({"terms":[{"cos":[30,0],"amp":1}]})"),
                  FrequencyCapExceeded);
}

TEST_CASE("canonical transform is a substitution H'(z) = H(Mz)") {
  TrigSymbol H = parse_symbol(
      R"({"terms":[{"cos":[1,0],"amp":2},{"cos":[0,1],"amp":1.2},
                   {"sin":[1,-1],"amp":0.4}]})");
  IMat2 M{2, 1, 1, 1};  // det 1
  TrigSymbol Ht = H.canonical_transform(M);
  for (double p : {0.3, 2.2}) {
    for (double x : {0.9, 4.8}) {
      Vec2 z = M.apply(Vec2{p, x});
      CHECK(Ht.evaluate(Point2(p, x)) ==
            doctest::Approx(H.evaluate(Point2(z.p, z.x))).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(H.canonical_transform(IMat2{1, 0, 0, -1}), NotUnimodular);
}

TEST_CASE("with_cosine replaces one amplitude") {
  TrigSymbol H = TrigSymbol::harper(1.0);
  TrigSymbol G = H.with_cosine(Freq{0, 1}, 0.8);
  CHECK(G.cosine_amp(Freq{0, 1}) == doctest::Approx(0.8));
  CHECK(G.cosine_amp(Freq{1, 0}) == doctest::Approx(2.0));
}
