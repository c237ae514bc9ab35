#include "rwrp/hitting.hpp"

#include <cmath>
#include <stdexcept>

#include "rwrp/escape.hpp"
#include "rwrp/numeric.hpp"

namespace rwrp::lattice {

double hitting_prob_exact(int dim, const Site& y, double radius, double tol,
                          CgStats* stats, int workers) {
  if (dim < 3 || dim > kMaxDim) throw std::invalid_argument("hitting solve requires 3 <= d <= 6");
  const std::int64_t y2 = dist2(y, Site::origin(), dim);
  const double r2 = radius * radius;
  if (y2 == 0 || static_cast<double>(y2) >= r2)
    throw std::invalid_argument("target must satisfy 0 < |y| < R");

  Box box;
  box.dim = dim;
  const auto r_int = static_cast<std::int32_t>(std::floor(radius));
  for (int i = 0; i < dim; ++i) {
    box.lo[i] = -r_int;
    box.hi[i] = r_int;
  }
  const std::int64_t n = box.size();
  if (n > (std::int64_t{1} << 27))
    throw std::invalid_argument("hitting solve: ball grid exceeds memory budget");

  std::vector<double> diag(n, 1.0);
  std::vector<std::uint8_t> unknown(n, 0);
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const Site s = box.at(idx);
    if (static_cast<double>(dist2(s, Site::origin(), dim)) <= r2)
      unknown[idx] = 1;
  }
  const std::int64_t y_idx = box.index(y);
  unknown[y_idx] = 0;

  std::vector<double> b(n, 0.0);
  const double hop = 1.0 / (2.0 * dim);
  for (int i = 0; i < dim; ++i) {
    for (int sgn : {-1, 1}) {
      Site nb = y;
      nb.c[i] += sgn;
      if (box.contains(nb)) {
        const std::int64_t idx = box.index(nb);
        if (unknown[idx]) b[idx] += hop;
      }
    }
  }

  StencilSystem sys(box, std::move(diag), std::move(unknown), {}, workers);
  std::vector<double> h;
  CgStats st = pcg_jacobi(sys, b, h, tol);
  if (stats) *stats = st;
  if (!st.converged)
    throw NumericalError("hitting solve did not reach tolerance", st.residual);
  return h[box.index(Site::origin())];
}

double hitting_prob_formula(int dim, double y_norm, double radius, double qd) {
  const double cd = green_asymptotic_constant(dim);
  return cd * qd * (std::pow(y_norm, 2.0 - dim) - std::pow(radius, 2.0 - dim));
}

}  // namespace rwrp::lattice
