#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

#include "harperband/common.hpp"

namespace harperband {

// Bracketed root finding (Brent).  f(a) and f(b) must have opposite signs.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-12, int max_iter = 200);

// Golden-section minimization of a unimodal function on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-10);

// Nelder-Mead on 2 variables; returns argmin.  Used to polish band-edge
// locations in k-space.
std::array<double, 2> nelder_mead_2d(
    const std::function<double(double, double)>& f, double x0, double y0,
    double scale, double ftol = 1e-13, int max_iter = 400);

// Shape-preserving (Fritsch-Carlson) monotone cubic interpolant through
// strictly increasing abscissae.
class PchipInterpolant {
 public:
  PchipInterpolant() = default;
  PchipInterpolant(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  // Inverts a monotone interpolant: solves f(x) = y on [x_min, x_max].
  double invert(double y) const;

 private:
  std::vector<double> xs_, ys_, slopes_;
};

// Deterministic parallel map over [0, n): results are written by index, so
// the outcome is independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  int threads = 0);

// Thread count resolution: explicit argument > HARPERBAND_THREADS env >
// hardware concurrency.
int resolve_threads(int requested);

}  // namespace harperband
