#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rwrp/rng.hpp"

namespace rwrp::lattice {

inline constexpr int kMaxDim = 6;

struct Site {
  std::array<std::int32_t, kMaxDim> c{};

  static Site origin() { return Site{}; }
  bool operator==(const Site&) const = default;
};

std::int64_t dist2(const Site& a, const Site& b, int dim);

// packed 64-bit key; coordinate budget per axis depends on the dimension
std::uint64_t pack_site(const Site& s, int dim);
std::int32_t pack_range(int dim);  // max |coordinate| representable

// axis-aligned box, inclusive bounds, row-major indexing
struct Box {
  int dim = 0;
  std::array<std::int32_t, kMaxDim> lo{}, hi{};

  std::int64_t extent(int axis) const { return hi[axis] - lo[axis] + 1; }
  std::int64_t size() const;
  bool contains(const Site& s) const;
  std::int64_t index(const Site& s) const;
  Site at(std::int64_t idx) const;
};

struct Direction {
  int dim = 0;
  std::array<double, kMaxDim> v{};  // unit vector
  bool is_axis = false;
  int axis = 0, sign = 1;

  static Direction axis_dir(int dim, int axis, int sign = 1);
  static Direction of(int dim, const std::vector<double>& comps);  // normalizes
  double dot(const Site& s) const;
};

// Nearest-neighbour step distribution, optionally exponentially tilted along
// a direction. Moves are indexed j in [0, 2 dim): axis j>>1, sign -1 if j odd.
struct StepSampler {
  int dim = 0;
  double lambda = 0.0;
  Direction ell;
  std::array<double, 2 * kMaxDim> cum{};  // cumulative probabilities
  std::array<double, 2 * kMaxDim> proj{};  // e_j . ell
  double log_step_norm = 0.0;  // log((1/2d) sum_j e^{lambda e_j . ell})

  static StepSampler uniform(int dim);
  static StepSampler tilted(int dim, const Direction& ell, double lambda);
  int sample(SplitMix64& rng) const;
};

// Local-time record of a walk run to a hyperplane crossing. Counts cover
// times 0..T-1; the crossing site itself is never counted (it cannot have
// been visited earlier).
struct PassageProfile {
  std::unordered_map<std::uint64_t, std::int32_t> counts;
  std::int64_t duration = 0;  // T_n, or the cap when censored
  bool censored = false;
  double end_projection = 0.0;  // S_T . ell
  Site end_site;
};

// First passage of S . ell >= level, started at the origin.
PassageProfile first_passage(const StepSampler& step, const Direction& ell,
                             double level, SplitMix64& rng,
                             std::int64_t step_cap);

// Position-recording variant for small-scale work.
struct WalkPath {
  int dim = 0;
  std::vector<Site> positions;  // S_0 .. S_T
  std::int64_t duration = 0;
  bool censored = false;
};

WalkPath first_passage_path(const StepSampler& step, const Direction& ell,
                            double level, SplitMix64& rng,
                            std::int64_t step_cap);

// First exit from the closed Euclidean ball D(start, R): stops at the first
// k with |S_k - start| > R (strictly).
struct ExitRecord {
  Site exit_site;
  std::int64_t exit_time = 0;
  std::int64_t exit_dist2 = 0;
  bool censored = false;
};

ExitRecord exit_ball(int dim, const Site& start, double radius,
                     SplitMix64& rng, std::int64_t step_cap = 1'000'000'000);

// Exit indices j_0 = 0 < j_1 < ... of successive R-ball exits along a stored
// path; j_{k+1} is the first index past j_k with |S_j - S_{j_k}| > R.
std::vector<std::int64_t> coarse_grain(const WalkPath& path, double radius);

// --- sampling statistics kernels (OpenMP with serial references) ---

struct ProjectionStats {
  double mean_proj2_over_r2 = 0.0;  // E[(X . ell)^2] / R^2
  double sigma = 0.0;
  std::int64_t samples = 0;
};

ProjectionStats exit_projection_stats(int dim, double radius,
                                      const Direction& ell,
                                      std::int64_t samples, std::uint64_t seed,
                                      int workers);
ProjectionStats exit_projection_stats_reference(int dim, double radius,
                                                const Direction& ell,
                                                std::int64_t samples,
                                                std::uint64_t seed);

struct SubstepStats {
  double mean = 0.0;   // complete fine-scale exits before the coarse exit
  double sigma = 0.0;  // std error of the mean
  std::int64_t samples = 0;
};

SubstepStats coarse_substep_stats(int dim, double radius_big,
                                  double radius_small, std::int64_t samples,
                                  std::uint64_t seed, int workers);
SubstepStats coarse_substep_stats_reference(int dim, double radius_big,
                                            double radius_small,
                                            std::int64_t samples,
                                            std::uint64_t seed);

}  // namespace rwrp::lattice
