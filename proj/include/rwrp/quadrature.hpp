#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace rwrp {

struct QuadResult {
  double value = 0.0;
  double err = 0.0;       // accumulated error estimate
  std::int64_t evals = 0;
  bool converged = true;
};

// Adaptive Simpson subdivision. Heavy-tailed integrands are expected to be
// substituted by the caller so that [a, b] is finite.
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(double abs_tol = 1e-10, double rel_tol = 1e-8,
                  int max_depth = 52)
      : abs_tol_(abs_tol), rel_tol_(rel_tol), max_depth_(max_depth) {}

  QuadResult integrate(const std::function<double(double)>& f, double a,
                       double b) const {
    QuadResult r;
    double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    r.evals = 3;
    // coarse magnitude estimate for the relative-tolerance floor
    double coarse = std::fabs((b - a) / 6.0 * (fa + 4.0 * fm + fb));
    double tol = std::max(abs_tol_, rel_tol_ * coarse);
    r.value = recurse(f, a, b, fa, fm, fb, tol, max_depth_, r);
    return r;
  }

 private:
  double recurse(const std::function<double(double)>& f, double a, double b,
                 double fa, double fm, double fb, double tol, int depth,
                 QuadResult& r) const {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    r.evals += 2;
    double h = b - a;
    double whole = h / 6.0 * (fa + 4.0 * fm + fb);
    double left = h / 12.0 * (fa + 4.0 * flm + fm);
    double right = h / 12.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
      if (depth <= 0 && std::fabs(delta) > 15.0 * tol) r.converged = false;
      r.err += std::fabs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1, r) +
           recurse(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1, r);
  }

  double abs_tol_, rel_tol_;
  int max_depth_;
};

inline QuadResult integrate_adaptive(const std::function<double(double)>& f,
                                     double a, double b,
                                     double abs_tol = 1e-10,
                                     double rel_tol = 1e-8) {
  return AdaptiveSimpson(abs_tol, rel_tol).integrate(f, a, b);
}

}  // namespace rwrp
