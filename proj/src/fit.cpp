#include "gapstress/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gapstress {

namespace {

struct LsLine {
  double slope, intercept;
  std::vector<double> residuals;
  double slope_se;
};

LsLine ls_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit: degenerate abscissae");
  LsLine out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss = 0;
  out.residuals.resize(n);
  for (int i = 0; i < n; ++i) {
    out.residuals[i] = y[i] - (out.intercept + out.slope * x[i]);
    ss += out.residuals[i] * out.residuals[i];
  }
  out.slope_se = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  return out;
}

}  // namespace

RateFitResult fit_rate(std::vector<std::pair<double, double>> series, bool log_mode) {
  if (series.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  std::sort(series.begin(), series.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  auto build = [&](const std::vector<std::pair<double, double>>& s) {
    std::vector<double> x, y;
    for (const auto& [eps, v] : s) {
      if (!(eps > 0.0)) throw std::invalid_argument("fit_rate: nonpositive eps");
      if (log_mode) {
        x.push_back(std::abs(std::log(eps)));
        y.push_back(v);
      } else {
        if (!(v > 0.0)) throw std::invalid_argument("fit_rate: nonpositive value in power fit");
        x.push_back(std::log(eps));
        y.push_back(std::log(v));
      }
    }
    return ls_fit(x, y);
  };

  LsLine line = build(series);
  RateFitResult out;
  // drop the coarsest point when it is clearly pre-asymptotic
  if (series.size() >= 4) {
    std::vector<double> mags;
    for (double r : line.residuals) mags.push_back(std::abs(r));
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (median > 0.0 && mags.front() > 3.0 * median) {
      series.erase(series.begin());
      line = build(series);
      out.dropped_coarsest = true;
    }
  }
  out.exponent = line.slope;
  out.prefactor = log_mode ? line.slope : std::exp(line.intercept);
  out.conf_half = 2.0 * line.slope_se;
  out.residuals = line.residuals;
  return out;
}

ConstantFit estimate_constants(const std::vector<std::pair<double, double>>& series,
                               const std::function<double(double)>& leading_law) {
  if (series.empty()) throw std::invalid_argument("estimate_constants: empty series");
  std::vector<std::pair<double, double>> s = series;
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  ConstantFit out;
  double acc = 0.0;
  for (const auto& [eps, v] : s) acc += v - leading_law(eps);
  out.constant = acc / static_cast<double>(s.size());
  for (const auto& [eps, v] : s) out.residuals.push_back(v - leading_law(eps) - out.constant);
  // a wrong law shows up as residuals exploding towards small eps
  const double first = std::abs(out.residuals.front());
  const double last = std::abs(out.residuals.back());
  out.residual_trend_ok = last <= 2.0 * first + 1e-10;
  return out;
}

}  // namespace gapstress
