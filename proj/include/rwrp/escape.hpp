#pragma once

#include <cstdint>
#include <vector>

namespace rwrp::lattice {

// Simple-walk escape probability q_d = 1/G_d(0,0) for d >= 3, via the
// zero-mode-excluded momentum sum on the discrete torus with Richardson
// extrapolation across grid levels.
struct EscapeQuadResult {
  double q = 0.0;
  double green = 0.0;  // G_d(0,0)
  double achieved_tol = 0.0;
  std::vector<int> grid_levels;
};

EscapeQuadResult escape_probability_quadrature(int dim, double tol = 1e-6,
                                               int workers = 1);

// Raw torus sum (1/N^d) sum_{k != 0} 1/D(k) with D(k) = (1/d) sum_i (1 - cos k_i).
double momentum_green_sum(int dim, int level, int workers = 1);

// Monte Carlo estimate: walks run to return-or-escape at a finite radius,
// with the resolvable return mass beyond the radius removed through the
// Green-function asymptotics, leaving only the relative asymptotic error.
struct EscapeMcResult {
  double q = 0.0;
  double sigma = 0.0;
  double raw_escape_fraction = 0.0;  // uncorrected P[no return before radius]
  double correction_bound = 0.0;     // bound on the removed tail mass
  double radius = 0.0;
  std::int64_t walks = 0;
  std::int64_t censored = 0;
};

EscapeMcResult escape_probability_mc(int dim, std::int64_t walks,
                                     std::uint64_t seed, double radius = 0.0,
                                     int workers = 1,
                                     std::int64_t step_cap = 1'000'000);
EscapeMcResult escape_probability_mc_reference(int dim, std::int64_t walks,
                                               std::uint64_t seed,
                                               double radius = 0.0,
                                               std::int64_t step_cap = 1'000'000);

// (d/2) Gamma(d/2 - 1) pi^{-d/2}: G_d(0,x) ~ c_d |x|^{2-d}
double green_asymptotic_constant(int dim);

}  // namespace rwrp::lattice
