#include "harperband/specfun.hpp"

#include <cmath>
#include <vector>

namespace harperband {

namespace {

// Lanczos approximation (g = 7, 9 terms), valid for Re z >= 1/2.
const double kLanczosG = 7.0;
const double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

std::complex<double> log_gamma_right(std::complex<double> z) {
  std::complex<double> a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + double(i - 1));
  std::complex<double> t = z + (kLanczosG - 0.5);
  return 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(a);
}

// Series on |x| <= 8, evaluated in extended precision; alternating terms
// reach ~430 in magnitude there, which long double absorbs comfortably.
long double j0_series(long double x) {
  long double q = x * x / 4.0L;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (long double)(k * k);
    sum += term;
    if (std::abs(term) < 1e-25L * std::abs(sum) && k > 4) break;
  }
  return sum;
}

// Miller backward recurrence for x > 8, normalized with
// J0 + 2 (J2 + J4 + ...) = 1.
long double j0_miller(long double x) {
  int start = int(1.4L * x) + 60;
  long double jp = 0.0L, jc = 1e-30L;
  long double norm = 0.0L, j0 = 0.0L;
  for (int n = start; n >= 0; --n) {
    long double jm = (2.0L * (n + 1)) / x * jc - jp;
    jp = jc;
    jc = jm;
    if (n == 0) j0 = jc;
    if (n > 0 && n % 2 == 0) norm += jc;
    // Rescale to avoid overflow of the unnormalized recurrence.
    if (std::abs(jc) > 1e20L) {
      jc /= 1e20L;
      jp /= 1e20L;
      norm /= 1e20L;
      if (n == 0) j0 = jc;
    }
  }
  norm = 2.0L * norm + j0;
  return j0 / norm;
}

}  // namespace

double arg_gamma_half(double t) {
  if (!(std::abs(t) <= 50.0)) {
    throw OutOfRange("arg_gamma_half: |t| must be <= 50");
  }
  // The Lanczos factors stay in the right half plane for Re z = 1/2, so the
  // principal-branch imaginary part is already the continuous branch.
  return log_gamma_right({0.5, t}).imag();
}

double bessel_j0(double x) {
  if (!(std::abs(x) <= 1e4)) {
    throw OutOfRange("bessel_j0: |x| must be <= 1e4");
  }
  long double ax = std::abs((long double)x);
  long double v = (ax <= 8.0L) ? j0_series(ax) : j0_miller(ax);
  return double(v);
}

}  // namespace harperband
