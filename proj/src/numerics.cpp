#include "harperband/numerics.hpp"

#include <atomic>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <mutex>

namespace harperband {

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw NoBracket("brent_root: no sign change on bracket");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                 0.5 * xtol;
    double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = e = m;
    } else {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        double r = fb / fc, t = fa / fc;
        p = s * (2.0 * m * t * (t - r) - (b - a) * (r - 1.0));
        q = (t - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = e = m;
      }
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; e = d = b - a; }
  }
  return b;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol) {
  const double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

std::array<double, 2> nelder_mead_2d(
    const std::function<double(double, double)>& f, double x0, double y0,
    double scale, double ftol, int max_iter) {
  struct P { double x, y, v; };
  std::array<P, 3> s = {P{x0, y0, f(x0, y0)},
                        P{x0 + scale, y0, f(x0 + scale, y0)},
                        P{x0, y0 + scale, f(x0, y0 + scale)}};
  auto sort = [&] {
    std::sort(s.begin(), s.end(), [](const P& a, const P& b) { return a.v < b.v; });
  };
  sort();
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(s[2].v - s[0].v) < ftol) break;
    double cx = 0.5 * (s[0].x + s[1].x), cy = 0.5 * (s[0].y + s[1].y);
    double rx = cx + (cx - s[2].x), ry = cy + (cy - s[2].y);
    double rv = f(rx, ry);
    if (rv < s[0].v) {
      double ex = cx + 2.0 * (cx - s[2].x), ey = cy + 2.0 * (cy - s[2].y);
      double ev = f(ex, ey);
      s[2] = (ev < rv) ? P{ex, ey, ev} : P{rx, ry, rv};
    } else if (rv < s[1].v) {
      s[2] = {rx, ry, rv};
    } else {
      double kx = cx + 0.5 * (s[2].x - cx), ky = cy + 0.5 * (s[2].y - cy);
      double kv = f(kx, ky);
      if (kv < s[2].v) {
        s[2] = {kx, ky, kv};
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
          s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
          s[i].v = f(s[i].x, s[i].y);
        }
      }
    }
    sort();
  }
  return {s[0].x, s[0].y};
}

PchipInterpolant::PchipInterpolant(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n) {
    throw Error("PchipInterpolant: need >= 2 matching samples");
  }
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double h = xs_[i + 1] - xs_[i];
    if (h <= 0.0) throw Error("PchipInterpolant: abscissae not increasing");
    d[i] = (ys_[i + 1] - ys_[i]) / h;
  }
  slopes_.assign(n, 0.0);
  slopes_[0] = d[0];
  slopes_[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      slopes_[i] = 0.0;
    } else {
      double h0 = xs_[i] - xs_[i - 1], h1 = xs_[i + 1] - xs_[i];
      double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
      slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  // Fritsch-Carlson endpoint limiting keeps the interpolant monotone.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) { slopes_[i] = slopes_[i + 1] = 0.0; continue; }
    double a = slopes_[i] / d[i], b = slopes_[i + 1] / d[i];
    double r = a * a + b * b;
    if (r > 9.0) {
      double t = 3.0 / std::sqrt(r);
      slopes_[i] = t * a * d[i];
      slopes_[i + 1] = t * b * d[i];
    }
  }
}

double PchipInterpolant::operator()(double x) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = (it == xs_.begin()) ? 0
                : std::min<std::size_t>(xs_.size() - 2, (it - xs_.begin()) - 1);
  double h = xs_[i + 1] - xs_[i];
  double t = (x - xs_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * ys_[i] + h * h10 * slopes_[i] + h01 * ys_[i + 1] +
         h * h11 * slopes_[i + 1];
}

double PchipInterpolant::invert(double y) const {
  double lo = xs_.front(), hi = xs_.back();
  double flo = ys_.front() - y, fhi = ys_.back() - y;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw OutOfRange("PchipInterpolant::invert: value outside tabulated range");
  }
  return brent_root([&](double x) { return (*this)(x)-y; }, lo, hi, 1e-13);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HARPERBAND_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  int threads) {
  int t = resolve_threads(threads);
  if (t <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mtx;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mtx);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  pool.reserve(t);
  for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace harperband
