#include "rwrp/quenched.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwrp/environment.hpp"
#include "rwrp/numeric.hpp"

#ifdef RWRP_HAVE_OPENMP
#include <omp.h>
#endif

namespace rwrp::fkmc {

namespace {

double solve_one(double beta, int n, const env::Potential& mu, int axis,
                 int dim, std::uint64_t env_seed, double tol, int max_iter,
                 bool& ok) {
  lattice::Box box;
  box.dim = dim;
  for (int i = 0; i < dim; ++i) {
    if (i == axis) {
      box.lo[i] = -4 * n + 1;
      box.hi[i] = n - 1;
    } else {
      box.lo[i] = 0;
      box.hi[i] = 4 * n - 1;
    }
  }
  const env::Field field = env::sample_field_reference(mu, box, env_seed);

  const std::int64_t size = box.size();
  std::vector<double> diag(size);
  for (std::int64_t i = 0; i < size; ++i)
    diag[i] = std::exp(std::min(beta * field.values[i], 700.0));
  std::vector<std::uint8_t> unknown(size, 1);

  std::array<bool, lattice::kMaxDim> periodic{};
  for (int i = 0; i < dim; ++i) periodic[i] = (i != axis);

  // (e^{beta V} - P) u = P 1_{target}: only sites one step short of the
  // target plane pick up a source term
  std::vector<double> b(size, 0.0);
  const double hop = 1.0 / (2.0 * dim);
  lattice::Site s;
  s.c[axis] = n - 1;
  std::array<std::int32_t, lattice::kMaxDim> tr{};
  for (;;) {
    for (int i = 0; i < dim; ++i)
      if (i != axis) s.c[i] = tr[i];
    b[box.index(s)] = hop;
    int i = dim - 1;
    for (; i >= 0; --i) {
      if (i == axis) continue;
      if (tr[i] + 1 < 4 * n) {
        ++tr[i];
        break;
      }
      tr[i] = 0;
    }
    if (i < 0) break;
  }

  StencilSystem sys(box, std::move(diag), std::move(unknown), periodic, 1);
  std::vector<double> u;
  const CgStats st = pcg_jacobi(sys, b, u, tol, max_iter);
  ok = st.converged;
  return u[box.index(lattice::Site::origin())];
}

QuenchedResult quenched_impl(double beta, int n, const env::Potential& mu,
                             int axis, int dim, const QuenchedOptions& opt,
                             bool parallel) {
  if (n < 1) throw std::invalid_argument("quenched: n must be >= 1");
  if (dim < 1 || dim > lattice::kMaxDim || axis < 0 || axis >= dim)
    throw std::invalid_argument("quenched: bad dimension/axis");
  if (opt.environments < 1) throw std::invalid_argument("quenched: need environments >= 1");

  std::vector<double> u0(opt.environments, 0.0);
  std::vector<std::uint8_t> ok(opt.environments, 0);
  auto run = [&](std::int64_t e) {
    bool conv = false;
    const double v = solve_one(beta, n, mu, axis, dim,
                               derive_seed(opt.seed, static_cast<std::uint64_t>(e)),
                               opt.tol, opt.max_iter, conv);
    u0[e] = v;
    ok[e] = conv && v > 0.0 ? 1 : 0;
  };
#ifdef RWRP_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, opt.workers))
    for (std::int64_t e = 0; e < opt.environments; ++e) run(e);
  } else
#else
  (void)parallel;
#endif
  {
    for (std::int64_t e = 0; e < opt.environments; ++e) run(e);
  }

  QuenchedResult out;
  out.environments = opt.environments;
  out.u0 = u0;
  std::vector<double> vals, logs;
  for (std::int64_t e = 0; e < opt.environments; ++e) {
    if (!ok[e]) {
      ++out.failed;
      continue;
    }
    vals.push_back(u0[e]);
    logs.push_back(std::log(u0[e]));
  }
  if (vals.empty()) throw NumericalError("quenched: no environment solved");

  const MeanSd mv = mean_sd(vals);
  const MeanSd ml = mean_sd(logs);
  const double count = static_cast<double>(vals.size());
  out.annealed_mean = mv.mean;
  out.annealed_sigma = mv.sd / std::sqrt(count);
  out.mean_log = ml.mean;
  out.mean_log_sigma = ml.sd / std::sqrt(count);
  out.rate_annealed = -std::log(mv.mean) / n;
  out.rate_quenched = -ml.mean / n;
  return out;
}

}  // namespace

QuenchedResult estimate_quenched(double beta, int n, const env::Potential& mu,
                                 int axis, int dim, const QuenchedOptions& opt) {
  return quenched_impl(beta, n, mu, axis, dim, opt, true);
}

QuenchedResult estimate_quenched_reference(double beta, int n,
                                           const env::Potential& mu, int axis,
                                           int dim, const QuenchedOptions& opt) {
  return quenched_impl(beta, n, mu, axis, dim, opt, false);
}

}  // namespace rwrp::fkmc
