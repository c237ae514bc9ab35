#include "rwrp/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef RWRP_HAVE_OPENMP
#include <omp.h>
#endif

namespace rwrp {

StencilSystem::StencilSystem(lattice::Box box, std::vector<double> diag,
                             std::vector<std::uint8_t> unknown,
                             std::array<bool, lattice::kMaxDim> periodic,
                             int workers)
    : box_(box),
      diag_(std::move(diag)),
      unknown_(std::move(unknown)),
      periodic_(periodic),
      workers_(std::max(1, workers)) {
  const std::int64_t n = box_.size();
  if (static_cast<std::int64_t>(diag_.size()) != n ||
      static_cast<std::int64_t>(unknown_.size()) != n)
    throw std::invalid_argument("stencil system: array sizes do not match box");
  hop_ = 1.0 / (2.0 * box_.dim);
  std::int64_t s = 1;
  for (int i = box_.dim - 1; i >= 0; --i) {
    stride_[i] = s;
    s *= box_.extent(i);
  }
}

void StencilSystem::apply(const std::vector<double>& u,
                          std::vector<double>& out) const {
  const std::int64_t n = size();
  out.resize(n);
  const int d = box_.dim;
  const std::int64_t rows = box_.extent(0);
  const std::int64_t row_len = n / rows;

#ifdef RWRP_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(workers_)
#endif
  for (std::int64_t r = 0; r < rows; ++r) {
    std::array<std::int32_t, lattice::kMaxDim> coord{};
    coord[0] = static_cast<std::int32_t>(box_.lo[0] + r);
    for (int i = 1; i < d; ++i) coord[i] = box_.lo[i];
    std::int64_t idx = r * row_len;
    for (std::int64_t t = 0; t < row_len; ++t, ++idx) {
      if (!unknown_[idx]) {
        out[idx] = u[idx];
      } else {
        double acc = diag_[idx] * u[idx];
        for (int i = 0; i < d; ++i) {
          const std::int64_t st = stride_[i];
          // + direction
          if (coord[i] < box_.hi[i]) {
            const std::int64_t nb = idx + st;
            if (unknown_[nb]) acc -= hop_ * u[nb];
          } else if (periodic_[i]) {
            const std::int64_t nb = idx - (box_.extent(i) - 1) * st;
            if (unknown_[nb]) acc -= hop_ * u[nb];
          }
          // - direction
          if (coord[i] > box_.lo[i]) {
            const std::int64_t nb = idx - st;
            if (unknown_[nb]) acc -= hop_ * u[nb];
          } else if (periodic_[i]) {
            const std::int64_t nb = idx + (box_.extent(i) - 1) * st;
            if (unknown_[nb]) acc -= hop_ * u[nb];
          }
        }
        out[idx] = acc;
      }
      // odometer over trailing axes
      for (int i = d - 1; i >= 1; --i) {
        if (coord[i] < box_.hi[i]) {
          ++coord[i];
          break;
        }
        coord[i] = box_.lo[i];
      }
    }
  }
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

CgStats pcg_jacobi(const StencilSystem& sys, const std::vector<double>& b,
                   std::vector<double>& u, double tol, int max_iter) {
  const std::int64_t n = sys.size();
  if (static_cast<std::int64_t>(b.size()) != n)
    throw std::invalid_argument("pcg: rhs size mismatch");
  u.resize(n, 0.0);

  std::vector<double> r(n), z(n), p(n), ap(n);
  sys.apply(u, ap);
  for (std::int64_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];

  const auto& diag = sys.diag();
  const auto& unknown = sys.unknown();
  auto precond = [&](const std::vector<double>& in, std::vector<double>& outv) {
    for (std::int64_t i = 0; i < n; ++i)
      outv[i] = unknown[i] ? in[i] / diag[i] : in[i];
  };

  const double bnorm = std::sqrt(dot(b, b));
  const double stop = tol * (bnorm > 0.0 ? bnorm : 1.0);

  CgStats stats;
  double rnorm = std::sqrt(dot(r, r));
  if (rnorm <= stop) {
    stats.converged = true;
    stats.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    return stats;
  }

  precond(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    sys.apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;  // loss of positive definiteness
    const double alpha = rz / pap;
    for (std::int64_t i = 0; i < n; ++i) {
      u[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    rnorm = std::sqrt(dot(r, r));
    stats.iterations = it;
    if (rnorm <= stop) {
      stats.converged = true;
      break;
    }
    precond(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::int64_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  stats.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  return stats;
}

}  // namespace rwrp
