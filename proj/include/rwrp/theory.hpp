#pragma once

#include <cstdint>

#include "rwrp/potential.hpp"

namespace rwrp::theory {

// Effective per-encounter cost of a site of strength z >= 0, for a walk with
// escape probability qd: qd (1 - e^{-z}) / (1 - (1-qd) e^{-z}).
double site_cost(double z, double qd);
// algebraically equivalent second closed form, kept for cross-checks
double site_cost_alt(double z, double qd);
// inverse of site_cost in z for w in [0, qd)
double site_cost_inverse(double w, double qd);

// F_beta = int site_cost(beta z) d mu(z)
double rate_integral(double beta, const env::Potential& mu, double qd);
// restriction to beta z >= a
double rate_integral_above(double beta, const env::Potential& mu, double qd,
                           double a);
// restriction to z in [z_lo, z_hi)
double rate_integral_between(double beta, const env::Potential& mu, double qd,
                             double z_lo, double z_hi);

// int (1/qd + 1/(beta z))^{-1} d mu(z); equals the rate integral of the
// log-transformed spec
double mobility_edge_integral(double beta, const env::Potential& mu, double qd);

// Cramer rate for Bernoulli(p): psi_p(eta) = sup_l [l(p+eta) - log(1-p+p e^l)]
// with the 0 log 0 = 0 convention at the endpoints; +inf outside [-p, 1-p].
double bernoulli_rate(double p, double eta);
// numerically maximized variational form (independent route)
double bernoulli_rate_sup(double p, double eta);

enum class TailSide { upper, lower };
// upper: bound on P[Sum >= (p+eta) n]; lower: bound on P[Sum <= (p-eta) n]
double chernoff_bound(std::int64_t n, double p, double eta, TailSide side);

// log of the chain-count bound: n [2c' log(1 + c/(2c')) + 2c']
double surgery_log_count_bound(double c, double c_prime, double n);
// log C(K + 2j, 2j), the exact-count pre-bound
double surgery_log_binomial(std::int64_t K, std::int64_t j);

struct SpeedCost {
  double v_star;  // sqrt(2 I / d)
  double cost;    // sqrt(2 d I)
};
SpeedCost optimal_speed(double rate_integral, int d);
// d v / 2 + I / v, minimized at v_star
double travel_cost(double v, double rate_integral, int d);

}  // namespace rwrp::theory
