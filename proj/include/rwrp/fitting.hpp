#pragma once

#include <vector>

namespace rwrp::fkmc {

double t_quantile_975(int df);  // two-sided 95% Student t

struct RatePoint {
  double n = 0.0;
  double log_value = 0.0;  // log of the estimated weight at distance n
  double sigma_log = 0.0;  // its standard error
};

struct RateFit {
  double rate = 0.0;        // slope of -log value vs n over the top window
  double rate_sigma = 0.0;  // WLS standard error, inflated by sqrt(chi2/dof)
  double intercept = 0.0;
  double full_rate = 0.0;   // slope using every point
  double window_sensitivity = 0.0;  // |full - window| / |window|
  int window_points = 0;
  bool monotone_ok = false;  // -log value nondecreasing within noise
};

// Weighted least squares of -log value against n through the largest-n
// window (top half of the points, at least three).
RateFit fit_rate(const std::vector<RatePoint>& pts);

}  // namespace rwrp::fkmc
