#pragma once

#include <cstdint>

#include "rwrp/annealed.hpp"
#include "rwrp/lattice.hpp"
#include "rwrp/potential.hpp"

namespace rwrp::fkmc {

// Importance-sampling tilt along the target direction. The optimal drift for
// a rate integral I is v = sqrt(2 I / d), reached at step tilt d v.
struct TiltPolicy {
  double lambda = 0.0;
};

TiltPolicy make_tilt(double rate_integral, int dim);

struct EstimateOptions {
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::int64_t step_cap = 0;  // 0: 200 * d * n^2, floor 100000
  int batches = 32;
};

struct Estimate {
  double log_mean = 0.0;      // log of the averaged annealed weight
  double sigma_log = 0.0;     // batch-means standard error on log scale
  double ci_log_half = 0.0;   // 95% half-width (t, batches-1 df)
  std::int64_t samples = 0;
  std::int64_t censored = 0;
  double lambda = 0.0;
  double beta = 0.0;
  double level = 0.0;
};

// Monte Carlo estimate of the annealed point-to-hyperplane weight
//   E E_0[ exp(-beta sum_{k<T} V(S_k)) ],
// with the environment average done in closed form per local-time profile.
// Censored walks contribute zero weight, so censoring only lowers the
// estimate, never raises it.
Estimate estimate_passage_weight(double beta, double level,
                                 const env::Potential& mu,
                                 const lattice::Direction& ell,
                                 const EstimateOptions& opt,
                                 const TiltPolicy& tilt = {});
Estimate estimate_passage_weight_reference(double beta, double level,
                                           const env::Potential& mu,
                                           const lattice::Direction& ell,
                                           const EstimateOptions& opt,
                                           const TiltPolicy& tilt = {});

}  // namespace rwrp::fkmc
