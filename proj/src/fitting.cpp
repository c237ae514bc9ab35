#include "rwrp/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwrp/numeric.hpp"

namespace rwrp::fkmc {

double t_quantile_975(int df) {
  if (df <= 0) throw std::invalid_argument("t quantile: df must be positive");
  if (df == 31) return kT975Df31;
  static const std::pair<int, double> table[] = {
      {1, 12.706}, {2, 4.303}, {3, 3.182},  {4, 2.776},  {5, 2.571},
      {7, 2.365},  {10, 2.228}, {15, 2.131}, {20, 2.086}, {30, 2.042},
      {40, 2.021}, {60, 2.000}, {120, 1.980}};
  if (df >= 120) return 1.960 + (1.980 - 1.960) * 120.0 / df;
  double prev_df = 1, prev_t = 12.706;
  for (const auto& [dfi, ti] : table) {
    if (df <= dfi) {
      if (df == dfi || prev_df == dfi) return ti;
      // interpolate linearly in 1/df
      const double x = 1.0 / df, x0 = 1.0 / prev_df, x1 = 1.0 / dfi;
      return prev_t + (ti - prev_t) * (x - x0) / (x1 - x0);
    }
    prev_df = dfi;
    prev_t = ti;
  }
  return 1.980;
}

namespace {

struct Wls {
  double slope = 0.0, intercept = 0.0, slope_sigma = 0.0, chi2 = 0.0;
  int points = 0;
};

Wls wls_line(const std::vector<RatePoint>& pts, std::size_t from) {
  Wls out;
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = from; i < pts.size(); ++i) {
    const double y = -pts[i].log_value;
    const double s = std::max(pts[i].sigma_log, 1e-12);
    const double w = 1.0 / (s * s);
    sw += w;
    swx += w * pts[i].n;
    swy += w * y;
    swxx += w * pts[i].n * pts[i].n;
    swxy += w * pts[i].n * y;
    ++out.points;
  }
  const double det = sw * swxx - swx * swx;
  if (!(det > 0.0)) throw std::invalid_argument("rate fit: degenerate design");
  out.slope = (sw * swxy - swx * swy) / det;
  out.intercept = (swxx * swy - swx * swxy) / det;
  double chi2 = 0.0;
  for (std::size_t i = from; i < pts.size(); ++i) {
    const double y = -pts[i].log_value;
    const double s = std::max(pts[i].sigma_log, 1e-12);
    const double r = (y - out.slope * pts[i].n - out.intercept) / s;
    chi2 += r * r;
  }
  out.chi2 = chi2;
  const int dof = out.points - 2;
  const double inflate = dof > 0 ? std::sqrt(std::max(1.0, chi2 / dof)) : 1.0;
  out.slope_sigma = inflate * std::sqrt(sw / det);
  return out;
}

}  // namespace

RateFit fit_rate(const std::vector<RatePoint>& pts_in) {
  if (pts_in.size() < 4) throw std::invalid_argument("rate fit: need at least 4 points");
  std::vector<RatePoint> pts = pts_in;
  std::sort(pts.begin(), pts.end(),
            [](const RatePoint& a, const RatePoint& b) { return a.n < b.n; });
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (!(pts[i + 1].n > pts[i].n))
      throw std::invalid_argument("rate fit: distances must be distinct");

  std::size_t from = pts.size() / 2;
  if (pts.size() - from < 3) from = pts.size() - 3;

  const Wls window = wls_line(pts, from);
  const Wls full = wls_line(pts, 0);

  RateFit out;
  out.rate = window.slope;
  out.rate_sigma = window.slope_sigma;
  out.intercept = window.intercept;
  out.full_rate = full.slope;
  out.window_points = window.points;
  out.window_sensitivity =
      std::abs(full.slope - window.slope) / std::max(std::abs(window.slope), 1e-300);

  out.monotone_ok = true;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double yi = -pts[i].log_value, yj = -pts[i + 1].log_value;
    const double slack = 3.0 * (pts[i].sigma_log + pts[i + 1].sigma_log);
    if (yj < yi - slack) out.monotone_ok = false;
  }
  return out;
}

}  // namespace rwrp::fkmc
