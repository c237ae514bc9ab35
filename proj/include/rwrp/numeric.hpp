#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwrp {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Raised when an iterative scheme fails to reach its tolerance.
struct NumericalError : std::runtime_error {
  double achieved;
  explicit NumericalError(const std::string& what, double achieved_tol = NAN)
      : std::runtime_error(what), achieved(achieved_tol) {}
};

struct KahanSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// Pairwise tree sum: deterministic for a fixed input order and numerically
// robust for long accumulations.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    KahanSum k;
    for (double x : v) k.add(x);
    return k.value();
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

// log(sum exp(v_i)) over entries that may include -inf
inline double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v)
    if (x > m) m = x;
  if (!(m > kNegInf)) return kNegInf;
  std::vector<double> e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    e[i] = (v[i] > kNegInf) ? std::exp(v[i] - m) : 0.0;
  return m + std::log(pairwise_sum(e));
}

// Mean and (sample) standard deviation.
struct MeanSd {
  double mean = 0.0, sd = 0.0;
  std::size_t n = 0;
};

inline MeanSd mean_sd(std::span<const double> v) {
  MeanSd r;
  r.n = v.size();
  if (r.n == 0) return r;
  r.mean = pairwise_sum(v) / static_cast<double>(r.n);
  if (r.n < 2) return r;
  KahanSum q;
  for (double x : v) q.add((x - r.mean) * (x - r.mean));
  r.sd = std::sqrt(q.value() / static_cast<double>(r.n - 1));
  return r;
}

// two-sided 97.5% t quantile for 31 degrees of freedom (32 batches)
inline constexpr double kT975Df31 = 2.0395134463964077;

}  // namespace rwrp
