#pragma once

#include <cstdint>
#include <vector>

#include "rwrp/environment.hpp"
#include "rwrp/fitting.hpp"
#include "rwrp/linsolve.hpp"

namespace rwrp::green {

// Dirichlet Green function of the discrete Schroedinger operator
//   (1 + beta V(x)) g(x) - (1/2d) sum_{y ~ x} g(y) = delta_source(x)
// on the field's box; equals the walk series with per-visit damping
// 1/(1 + beta V), the visit at the endpoint included.
std::vector<double> solve_green(const env::Field& field, double beta,
                                const lattice::Site& source, double tol = 1e-12,
                                CgStats* stats = nullptr, int workers = 1);

// Compares the truncated path series against the solver column for every
// source in the box; the geometric tail bound certifies the truncation.
struct FkCheckResult {
  double max_abs_dev = 0.0;
  double tail_bound = 0.0;
  double contraction = 0.0;  // largest late-term ratio seen
  int terms_used = 0;
};

FkCheckResult fk_equivalence_check(const env::Field& field, double beta,
                                   int max_terms = 400, double tol = 1e-13);

struct GreenDecayResult {
  std::vector<fkmc::RatePoint> points;       // log mean g at each distance
  fkmc::RateFit fit;                         // from the doubled-margin run
  fkmc::RateFit fit_narrow;                  // from the base-margin run
  double margin_rate_shift = 0.0;            // |narrow - doubled|
  std::int64_t environments = 0;
};

// Environment-averaged Green decay along an axis: solves one Dirichlet
// problem per environment on a box with the given margin and again with the
// margin doubled, then fits the decay rate of mean g against distance.
GreenDecayResult averaged_green_decay(const env::Potential& mu, double beta,
                                      int dim, int axis,
                                      const std::vector<int>& distances,
                                      std::int64_t environments, int margin,
                                      std::uint64_t seed, int workers = 1,
                                      double tol = 1e-12);
GreenDecayResult averaged_green_decay_reference(
    const env::Potential& mu, double beta, int dim, int axis,
    const std::vector<int>& distances, std::int64_t environments, int margin,
    std::uint64_t seed, double tol = 1e-12);

}  // namespace rwrp::green
