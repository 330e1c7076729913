#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace harperband {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.1415926535897932384626433832795;

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Error hierarchy.  Every module throws a named subclass of Error so callers
// (and the CLI exit-code mapping) can tag failures by origin.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define HARPERBAND_DEFINE_ERROR(Name)                              \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

HARPERBAND_DEFINE_ERROR(RealityViolation);
HARPERBAND_DEFINE_ERROR(NotUnimodular);
HARPERBAND_DEFINE_ERROR(ParseError);
HARPERBAND_DEFINE_ERROR(FrequencyCapExceeded);
HARPERBAND_DEFINE_ERROR(HermiticityFailure);
HARPERBAND_DEFINE_ERROR(ConvergenceFailure);
HARPERBAND_DEFINE_ERROR(EmptyWindow);
HARPERBAND_DEFINE_ERROR(EmptyLevelSet);
HARPERBAND_DEFINE_ERROR(DegenerateCritical);
HARPERBAND_DEFINE_ERROR(NotASaddleValue);
HARPERBAND_DEFINE_ERROR(TracingDivergence);
HARPERBAND_DEFINE_ERROR(NoBracket);
HARPERBAND_DEFINE_ERROR(NotAClosedCycle);
HARPERBAND_DEFINE_ERROR(NearCritical);
HARPERBAND_DEFINE_ERROR(NoConvergence);
HARPERBAND_DEFINE_ERROR(TangencyAtCorner);
HARPERBAND_DEFINE_ERROR(WindowCrossesCritical);
HARPERBAND_DEFINE_ERROR(OutOfRange);
HARPERBAND_DEFINE_ERROR(BranchOutOfWindow);
HARPERBAND_DEFINE_ERROR(InconsistentIndexing);
HARPERBAND_DEFINE_ERROR(ScenarioUnsupported);
HARPERBAND_DEFINE_ERROR(IoError);

#undef HARPERBAND_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Tiny 2-vector / 2x2 matrix arithmetic used throughout the phase-space code.
// Components are ordered (p, x): p is the momentum, x the position.
// ---------------------------------------------------------------------------

struct Vec2 {
  double p = 0.0;
  double x = 0.0;

  Vec2() = default;
  Vec2(double p_, double x_) : p(p_), x(x_) {}

  Vec2 operator+(const Vec2& o) const { return {p + o.p, x + o.x}; }
  Vec2 operator-(const Vec2& o) const { return {p - o.p, x - o.x}; }
  Vec2 operator*(double s) const { return {p * s, x * s}; }
  Vec2 operator/(double s) const { return {p / s, x / s}; }
  Vec2& operator+=(const Vec2& o) { p += o.p; x += o.x; return *this; }
  Vec2& operator-=(const Vec2& o) { p -= o.p; x -= o.x; return *this; }

  double norm() const { return std::hypot(p, x); }
  double dot(const Vec2& o) const { return p * o.p + x * o.x; }
  Vec2 normalized() const { double n = norm(); return {p / n, x / n}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Cross product z-component in the (x, p) drawing plane (x horizontal,
// p vertical); positive means counterclockwise rotation from a to b.
inline double cross_xp(const Vec2& a, const Vec2& b) {
  return a.x * b.p - a.p * b.x;
}

// Symmetric 2x2 second-derivative matrix (pp, px, xx).
struct Mat2 {
  double pp = 0.0;
  double px = 0.0;
  double xx = 0.0;

  double det() const { return pp * xx - px * px; }
  double trace() const { return pp + xx; }
  // Quadratic form v^T H'' v.
  double quad(const Vec2& v) const {
    return pp * v.p * v.p + 2.0 * px * v.p * v.x + xx * v.x * v.x;
  }
};

// General (not symmetric) 2x2 integer matrix for SL(2,Z) coordinate changes.
struct IMat2 {
  // [[a, b], [c, d]] acting on column vectors (p, x).
  int a = 1, b = 0, c = 0, d = 1;

  int det() const { return a * d - b * c; }
  IMat2 inverse_unimodular() const { return IMat2{d, -b, -c, a}; }
  IMat2 transposed() const { return IMat2{a, c, b, d}; }
  Vec2 apply(const Vec2& v) const { return {a * v.p + b * v.x, c * v.p + d * v.x}; }
  std::array<int, 2> apply(const std::array<int, 2>& v) const {
    return {a * v[0] + b * v[1], c * v[0] + d * v[1]};
  }
};

// Canonical representative of an angle pair in [0, 2pi)^2.
inline double reduce_2pi(double v) {
  double r = std::fmod(v, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod can return exactly 2pi after the correction when v is a tiny
  // negative number.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Phase-space point with both coordinates reduced to [0, 2pi).
struct Point2 {
  double p = 0.0;
  double x = 0.0;

  Point2() = default;
  Point2(double p_, double x_) : p(reduce_2pi(p_)), x(reduce_2pi(x_)) {}

  Vec2 vec() const { return {p, x}; }
};

// Distance on the torus R^2 / (2pi Z)^2.
inline double torus_dist(const Vec2& a, const Vec2& b) {
  double dp = std::remainder(a.p - b.p, kTwoPi);
  double dx = std::remainder(a.x - b.x, kTwoPi);
  return std::hypot(dp, dx);
}

}  // namespace harperband
