#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace gapstress {

/// Least-squares fit of a power law v = C eps^p on log-log data, or of a
/// logarithmic law v = a |log eps| + b when log_mode is set (exponent then
/// holds a).  The coarsest point is dropped once if its residual exceeds
/// three times the median residual.
struct RateFitResult {
  double exponent = 0.0;
  double prefactor = 0.0;
  double conf_half = 0.0;  // ~95% half-width of the slope
  std::vector<double> residuals;
  bool dropped_coarsest = false;
};

RateFitResult fit_rate(std::vector<std::pair<double, double>> series, bool log_mode = false);

/// Least-squares additive constant after subtracting a known leading law.
/// residual_trend_ok reports whether |residual| does not grow as eps
/// decreases (a growing trend signals a wrong law).
struct ConstantFit {
  double constant = 0.0;
  std::vector<double> residuals;  // ordered by decreasing eps
  bool residual_trend_ok = true;
};

ConstantFit estimate_constants(const std::vector<std::pair<double, double>>& series,
                               const std::function<double(double)>& leading_law);

}  // namespace gapstress
