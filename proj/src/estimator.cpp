#include "rwrp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwrp/fitting.hpp"
#include "rwrp/numeric.hpp"

#ifdef RWRP_HAVE_OPENMP
#include <omp.h>
#endif

namespace rwrp::fkmc {

TiltPolicy make_tilt(double rate_integral, int dim) {
  if (!(rate_integral >= 0.0))
    throw std::invalid_argument("tilt: rate integral must be >= 0");
  return TiltPolicy{std::sqrt(2.0 * dim * rate_integral)};
}

namespace {

Estimate estimate_impl(double beta, double level, const env::Potential& mu,
                       const lattice::Direction& ell, const EstimateOptions& opt,
                       const TiltPolicy& tilt, bool parallel) {
  if (!(beta >= 0.0))
    throw std::invalid_argument("estimate: beta must be >= 0");
  if (opt.samples < opt.batches || opt.batches < 2)
    throw std::invalid_argument("estimate: need samples >= batches >= 2");
  if (beta == 0.0) {
    // every walk reaches the level with total weight one
    Estimate out;
    out.samples = opt.samples;
    out.lambda = tilt.lambda;
    out.level = level;
    return out;
  }

  std::int64_t cap = opt.step_cap;
  if (cap <= 0)
    cap = std::max<std::int64_t>(
        100000, static_cast<std::int64_t>(200.0 * ell.dim * level * level));

  const LaplaceTable table(mu, beta, std::min<std::int64_t>(cap, 4096));
  const lattice::StepSampler sampler =
      lattice::StepSampler::tilted(ell.dim, ell, tilt.lambda);

  std::vector<double> logw(opt.samples);
  auto replica = [&](std::int64_t r) {
    SplitMix64 rng(derive_seed(opt.seed, static_cast<std::uint64_t>(r)));
    const lattice::PassageProfile prof =
        lattice::first_passage(sampler, ell, level, rng, cap);
    if (prof.censored) {
      logw[r] = kNegInf;
      return;
    }
    double lw = log_annealed_weight(prof, table);
    if (tilt.lambda != 0.0)
      lw += static_cast<double>(prof.duration) * sampler.log_step_norm -
            tilt.lambda * prof.end_projection;
    logw[r] = lw;
  };

#ifdef RWRP_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64) num_threads(std::max(1, opt.workers))
    for (std::int64_t r = 0; r < opt.samples; ++r) replica(r);
  } else
#else
  (void)parallel;
#endif
  {
    for (std::int64_t r = 0; r < opt.samples; ++r) replica(r);
  }

  Estimate out;
  out.samples = opt.samples;
  out.lambda = tilt.lambda;
  out.beta = beta;
  out.level = level;
  for (double v : logw)
    if (v == kNegInf) ++out.censored;

  out.log_mean = log_sum_exp(logw) - std::log(static_cast<double>(opt.samples));

  const int nb = opt.batches;
  const std::int64_t m = opt.samples / nb;
  std::vector<double> batch_means(nb);
  for (int b = 0; b < nb; ++b) {
    const std::int64_t lo = b * m;
    const std::int64_t hi = (b == nb - 1) ? opt.samples : lo + m;
    std::vector<double> slice(logw.begin() + lo, logw.begin() + hi);
    batch_means[b] = log_sum_exp(slice) - std::log(static_cast<double>(hi - lo));
  }
  const MeanSd ms = mean_sd(batch_means);
  out.sigma_log = ms.sd / std::sqrt(static_cast<double>(nb));
  out.ci_log_half = t_quantile_975(nb - 1) * out.sigma_log;
  return out;
}

}  // namespace

Estimate estimate_passage_weight(double beta, double level,
                                 const env::Potential& mu,
                                 const lattice::Direction& ell,
                                 const EstimateOptions& opt,
                                 const TiltPolicy& tilt) {
  return estimate_impl(beta, level, mu, ell, opt, tilt, true);
}

Estimate estimate_passage_weight_reference(double beta, double level,
                                           const env::Potential& mu,
                                           const lattice::Direction& ell,
                                           const EstimateOptions& opt,
                                           const TiltPolicy& tilt) {
  return estimate_impl(beta, level, mu, ell, opt, tilt, false);
}

}  // namespace rwrp::fkmc
