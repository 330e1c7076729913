#pragma once

#include "harperband/common.hpp"

namespace harperband {

// arg Gamma(1/2 + i t), principal continuous branch with value 0 at t = 0.
// Accurate to ~1e-13 for |t| <= 50; throws OutOfRange beyond.
double arg_gamma_half(double t);

// Bessel function J0, absolute accuracy ~1e-14 for |x| <= 1e4; throws
// OutOfRange beyond.
double bessel_j0(double x);

}  // namespace harperband
