#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rwrp/rng.hpp"

namespace rwrp::env {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Distribution of the nonnegative site potential. Immutable; value type with
// shared internals so transformed specs can hold their base cheaply.
class Potential {
 public:
  enum class Family { point_mass, atoms, pareto, exponential, transformed_log };

  static Potential point_mass(double v0);
  // atom positions with masses; masses must sum to 1 within 1e-9
  static Potential atoms(std::vector<double> z, std::vector<double> mass);
  // tail over threshold: P[V >= t] = (t/z_min)^{-alpha} for t >= z_min
  static Potential pareto(double alpha, double z_min);
  static Potential exponential(double rate);
  // W = log(1 + beta V) / beta applied to a base spec
  static Potential transformed_log(Potential base, double beta);

  Family family() const;
  std::string describe() const;  // config-style "family=... key=value ..."

  // key=value pairs, e.g. {family: pareto, alpha: 0.5, zmin: 1}
  static Potential parse(const std::map<std::string, std::string>& kv);

  double quantile(double u) const;  // inverse CDF, u in (0,1)
  double sample(SplitMix64& rng) const;
  // deterministic per-site draw; dense and lazy sampling agree by construction
  double site_value(std::uint64_t seed, std::uint64_t site_key) const;

  double tail_mass(double t) const;          // mu([t, inf))
  double interval_mass(double lo, double hi) const;  // mu([lo, hi))
  double truncated_mean(double m) const;     // E[V 1{V <= m}]
  std::optional<double> mean() const;        // nullopt when infinite
  double laplace(double t) const;            // E[exp(-t V)]
  double log_laplace(double t) const;        // log E[exp(-t V)], safe for large t

  bool atomic() const;
  // present only for point_mass/atoms (and transforms of those)
  std::vector<std::pair<double, double>> atom_list() const;

  // integral of g over mu restricted to [lo, hi); pass a finite g_sup when g
  // is bounded so the quadrature can cut the tail rigorously
  double expect_interval(const std::function<double(double)>& g, double lo,
                         double hi, double g_sup = kInf) const;
  double expect(const std::function<double(double)>& g,
                double g_sup = kInf) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  explicit Potential(std::shared_ptr<const Impl> impl)
      : impl_(std::move(impl)) {}
};

}  // namespace rwrp::env
