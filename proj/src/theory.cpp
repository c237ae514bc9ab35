#include "rwrp/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rwrp::theory {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_qd(double qd) {
  if (!(qd > 0.0 && qd < 1.0))
    throw std::invalid_argument("site_cost: qd must be in (0,1)");
}
}  // namespace

double site_cost(double z, double qd) {
  check_qd(qd);
  if (!(z >= 0.0)) throw std::invalid_argument("site_cost: z must be >= 0");
  double u = -std::expm1(-z);  // 1 - e^{-z}, accurate for small z
  return qd * u / (qd + (1.0 - qd) * u);
}

double site_cost_alt(double z, double qd) {
  check_qd(qd);
  if (!(z >= 0.0)) throw std::invalid_argument("site_cost: z must be >= 0");
  double ez = std::exp(-z);
  return qd / (1.0 - qd) * (1.0 - qd / (1.0 - (1.0 - qd) * ez));
}

double site_cost_inverse(double w, double qd) {
  check_qd(qd);
  if (!(w >= 0.0) || w >= qd)
    throw std::invalid_argument("site_cost_inverse: w must be in [0, qd)");
  double x = (qd - w) / (qd - w + w * qd);  // e^{-z}
  return -std::log(x);
}

double rate_integral(double beta, const env::Potential& mu, double qd) {
  if (!(beta > 0.0)) throw std::invalid_argument("rate_integral: beta > 0");
  return mu.expect([&](double z) { return site_cost(beta * z, qd); }, qd);
}

double rate_integral_above(double beta, const env::Potential& mu, double qd,
                           double a) {
  if (!(beta > 0.0) || !(a > 0.0))
    throw std::invalid_argument("rate_integral_above: beta, a > 0");
  return mu.expect_interval([&](double z) { return site_cost(beta * z, qd); },
                            a / beta, env::kInf, qd);
}

double rate_integral_between(double beta, const env::Potential& mu, double qd,
                             double z_lo, double z_hi) {
  if (!(beta > 0.0)) throw std::invalid_argument("rate_integral_between: beta > 0");
  return mu.expect_interval([&](double z) { return site_cost(beta * z, qd); },
                            z_lo, z_hi, qd);
}

double mobility_edge_integral(double beta, const env::Potential& mu,
                              double qd) {
  if (!(beta > 0.0)) throw std::invalid_argument("mobility_edge_integral: beta > 0");
  check_qd(qd);
  // harmonic-mean form qd beta z / (beta z + qd), stable at z = 0
  return mu.expect(
      [&](double z) { return qd * beta * z / (beta * z + qd); }, qd);
}

double bernoulli_rate(double p, double eta) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("bernoulli_rate: p in (0,1)");
  double x = p + eta;
  if (x < 0.0 || x > 1.0) return kInf;
  double t1 = (x == 0.0) ? 0.0 : x * std::log(x / p);
  double t2 = (x == 1.0) ? 0.0 : (1.0 - x) * std::log((1.0 - x) / (1.0 - p));
  return t1 + t2;
}

double bernoulli_rate_sup(double p, double eta) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("bernoulli_rate_sup: p in (0,1)");
  double x = p + eta;
  if (x < 0.0 || x > 1.0) return kInf;
  auto h = [&](double l) {
    // log(1 - p + p e^l) evaluated without overflow
    double lse = (l > 0.0) ? l + std::log(p + (1.0 - p) * std::exp(-l))
                           : std::log1p(p * std::expm1(l));
    return l * x - lse;
  };
  // golden-section maximization of a concave function
  double a = -70.0, b = 70.0;
  const double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = h(c), fd = h(d);
  for (int it = 0; it < 220 && (b - a) > 1e-13; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = h(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = h(d);
    }
  }
  double v = h(0.5 * (a + b));
  return v < 0.0 ? 0.0 : v;
}

double chernoff_bound(std::int64_t n, double p, double eta, TailSide side) {
  if (n <= 0) throw std::invalid_argument("chernoff_bound: n > 0");
  double rate = bernoulli_rate(p, side == TailSide::upper ? eta : -eta);
  if (rate == kInf) return 0.0;
  return std::exp(-static_cast<double>(n) * rate);
}

double surgery_log_count_bound(double c, double c_prime, double n) {
  if (!(c > 0.0) || !(c_prime > 0.0) || !(n > 0.0))
    throw std::invalid_argument("surgery_log_count_bound: positive args");
  return n * (2.0 * c_prime * std::log(1.0 + c / (2.0 * c_prime)) +
              2.0 * c_prime);
}

double surgery_log_binomial(std::int64_t K, std::int64_t j) {
  if (K < 0 || j < 0) throw std::invalid_argument("surgery_log_binomial: K, j >= 0");
  double n = static_cast<double>(K + 2 * j), k = static_cast<double>(2 * j);
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

SpeedCost optimal_speed(double rate_integral, int d) {
  if (!(rate_integral > 0.0) || d < 1)
    throw std::invalid_argument("optimal_speed: I > 0, d >= 1");
  SpeedCost sc;
  sc.v_star = std::sqrt(2.0 * rate_integral / d);
  sc.cost = std::sqrt(2.0 * d * rate_integral);
  return sc;
}

double travel_cost(double v, double rate_integral, int d) {
  if (!(v > 0.0)) throw std::invalid_argument("travel_cost: v > 0");
  return 0.5 * d * v + rate_integral / v;
}

}  // namespace rwrp::theory
