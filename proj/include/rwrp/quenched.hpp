#pragma once

#include <cstdint>
#include <vector>

#include "rwrp/linsolve.hpp"
#include "rwrp/potential.hpp"

namespace rwrp::fkmc {

struct QuenchedOptions {
  std::int64_t environments = 100;
  std::uint64_t seed = 1;
  int workers = 1;
  double tol = 1e-10;
  int max_iter = 20000;
};

struct QuenchedResult {
  double annealed_mean = 0.0;  // mean over environments of u_V(0)
  double annealed_sigma = 0.0;
  double mean_log = 0.0;  // mean over environments of log u_V(0)
  double mean_log_sigma = 0.0;
  double rate_annealed = 0.0;  // -(1/n) log annealed_mean
  double rate_quenched = 0.0;  // -(1/n) mean_log
  std::int64_t environments = 0;
  std::int64_t failed = 0;
  std::vector<double> u0;  // per-environment values, environment order
};

// Per-environment Dirichlet problem on a slab: u = 0 behind the start
// (distance 4n), target plane at distance n, transverse torus of period 4n.
// u_V(0) is the quenched weight E_0[exp(-beta sum_{k<T} V(S_k)); T finite].
QuenchedResult estimate_quenched(double beta, int n, const env::Potential& mu,
                                 int axis, int dim, const QuenchedOptions& opt);
QuenchedResult estimate_quenched_reference(double beta, int n,
                                           const env::Potential& mu, int axis,
                                           int dim, const QuenchedOptions& opt);

}  // namespace rwrp::fkmc
