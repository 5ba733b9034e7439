#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace gapstress {

/// Adaptive Simpson on [a,b] with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 60);

/// Beta function via lgamma.
inline double beta_fn(double x, double y) {
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

}  // namespace gapstress
