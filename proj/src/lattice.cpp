#include "rwrp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "rwrp/numeric.hpp"

#ifdef RWRP_HAVE_OPENMP
#include <omp.h>
#endif

namespace rwrp::lattice {

std::int64_t dist2(const Site& a, const Site& b, int dim) {
  std::int64_t s = 0;
  for (int i = 0; i < dim; ++i) {
    const std::int64_t d = static_cast<std::int64_t>(a.c[i]) - b.c[i];
    s += d * d;
  }
  return s;
}

namespace {

int bits_per_axis(int dim) {
  if (dim <= 3) return 21;
  if (dim == 4) return 16;
  if (dim == 5) return 12;
  return 10;
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range [1,6]");
}

}  // namespace

std::int32_t pack_range(int dim) {
  check_dim(dim);
  return (std::int32_t{1} << (bits_per_axis(dim) - 1)) - 1;
}

std::uint64_t pack_site(const Site& s, int dim) {
  const int bits = bits_per_axis(dim);
  const std::int32_t range = (std::int32_t{1} << (bits - 1)) - 1;
  std::uint64_t key = 0;
  for (int i = 0; i < dim; ++i) {
    const std::int32_t c = s.c[i];
    if (c < -range || c > range) throw std::out_of_range("site coordinate exceeds packing range");
    key = (key << bits) | static_cast<std::uint64_t>(c + range);
  }
  return key;
}

std::int64_t Box::size() const {
  std::int64_t n = 1;
  for (int i = 0; i < dim; ++i) n *= extent(i);
  return n;
}

bool Box::contains(const Site& s) const {
  for (int i = 0; i < dim; ++i)
    if (s.c[i] < lo[i] || s.c[i] > hi[i]) return false;
  return true;
}

std::int64_t Box::index(const Site& s) const {
  std::int64_t idx = 0;
  for (int i = 0; i < dim; ++i) idx = idx * extent(i) + (s.c[i] - lo[i]);
  return idx;
}

Site Box::at(std::int64_t idx) const {
  Site s;
  for (int i = dim - 1; i >= 0; --i) {
    const std::int64_t e = extent(i);
    s.c[i] = static_cast<std::int32_t>(lo[i] + idx % e);
    idx /= e;
  }
  return s;
}

Direction Direction::axis_dir(int dim, int axis, int sign) {
  check_dim(dim);
  if (axis < 0 || axis >= dim) throw std::invalid_argument("axis out of range");
  Direction d;
  d.dim = dim;
  d.v[axis] = sign >= 0 ? 1.0 : -1.0;
  d.is_axis = true;
  d.axis = axis;
  d.sign = sign >= 0 ? 1 : -1;
  return d;
}

Direction Direction::of(int dim, const std::vector<double>& comps) {
  check_dim(dim);
  if (static_cast<int>(comps.size()) != dim) throw std::invalid_argument("direction size mismatch");
  double norm2 = 0.0;
  for (double x : comps) norm2 += x * x;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw std::invalid_argument("direction must be nonzero and finite");
  const double inv = 1.0 / std::sqrt(norm2);
  Direction d;
  d.dim = dim;
  int nonzero = -1, count = 0;
  for (int i = 0; i < dim; ++i) {
    d.v[i] = comps[i] * inv;
    if (d.v[i] != 0.0) {
      nonzero = i;
      ++count;
    }
  }
  if (count == 1) {
    d.is_axis = true;
    d.axis = nonzero;
    d.sign = d.v[nonzero] > 0.0 ? 1 : -1;
    d.v[nonzero] = d.sign;  // exact unit component
  }
  return d;
}

double Direction::dot(const Site& s) const {
  double acc = 0.0;
  for (int i = 0; i < dim; ++i) acc += v[i] * s.c[i];
  return acc;
}

StepSampler StepSampler::uniform(int dim) {
  check_dim(dim);
  StepSampler st;
  st.dim = dim;
  return st;
}

StepSampler StepSampler::tilted(int dim, const Direction& ell, double lambda) {
  check_dim(dim);
  if (ell.dim != dim) throw std::invalid_argument("direction dimension mismatch");
  if (!std::isfinite(lambda)) throw std::invalid_argument("tilt parameter must be finite");
  if (lambda == 0.0) return uniform(dim);

  StepSampler st;
  st.dim = dim;
  st.lambda = lambda;
  st.ell = ell;
  double zsum = 0.0, wmax = 0.0;
  std::array<double, 2 * kMaxDim> w{};
  for (int j = 0; j < 2 * dim; ++j) {
    const int axis = j >> 1;
    const double sign = (j & 1) ? -1.0 : 1.0;
    st.proj[j] = sign * ell.v[axis];
    const double e = lambda * st.proj[j];
    if (e > 700.0) throw std::invalid_argument("tilt overflows step weights");
    w[j] = std::exp(e);
    zsum += w[j];
    wmax = std::max(wmax, w[j]);
  }
  if (!std::isfinite(zsum) || zsum <= 0.0) throw std::invalid_argument("degenerate tilt normalization");
  double acc = 0.0;
  for (int j = 0; j < 2 * dim; ++j) {
    acc += w[j] / zsum;
    st.cum[j] = acc;
  }
  st.cum[2 * dim - 1] = 1.0;
  st.log_step_norm = std::log(zsum / (2.0 * dim));
  return st;
}

int StepSampler::sample(SplitMix64& rng) const {
  if (lambda == 0.0) return static_cast<int>(rng.next_below(2 * static_cast<std::uint64_t>(dim)));
  const double u = rng.next_unit();
  int j = 0;
  while (j < 2 * dim - 1 && u > cum[j]) ++j;
  return j;
}

namespace {

// projection table for untilted samplers, where StepSampler::proj is unset
void fill_proj(const Direction& ell, std::array<double, 2 * kMaxDim>& proj) {
  for (int j = 0; j < 2 * ell.dim; ++j) {
    const int axis = j >> 1;
    proj[j] = ((j & 1) ? -1.0 : 1.0) * ell.v[axis];
  }
}

}  // namespace

PassageProfile first_passage(const StepSampler& step, const Direction& ell,
                             double level, SplitMix64& rng,
                             std::int64_t step_cap) {
  if (step.dim != ell.dim) throw std::invalid_argument("sampler/direction dimension mismatch");
  std::array<double, 2 * kMaxDim> proj;
  fill_proj(ell, proj);

  PassageProfile out;
  out.counts.reserve(64);
  Site pos;
  double s_dot_ell = 0.0;
  std::int64_t k = 0;
  for (;;) {
    if (s_dot_ell >= level) {
      out.duration = k;
      break;
    }
    if (k >= step_cap) {
      out.duration = step_cap;
      out.censored = true;
      break;
    }
    ++out.counts[pack_site(pos, step.dim)];
    const int j = step.sample(rng);
    pos.c[j >> 1] += (j & 1) ? -1 : 1;
    s_dot_ell += proj[j];
    ++k;
  }
  out.end_projection = s_dot_ell;
  out.end_site = pos;
  return out;
}

WalkPath first_passage_path(const StepSampler& step, const Direction& ell,
                            double level, SplitMix64& rng,
                            std::int64_t step_cap) {
  if (step.dim != ell.dim) throw std::invalid_argument("sampler/direction dimension mismatch");
  std::array<double, 2 * kMaxDim> proj;
  fill_proj(ell, proj);

  WalkPath out;
  out.dim = step.dim;
  Site pos;
  double s_dot_ell = 0.0;
  std::int64_t k = 0;
  out.positions.push_back(pos);
  for (;;) {
    if (s_dot_ell >= level) {
      out.duration = k;
      break;
    }
    if (k >= step_cap) {
      out.duration = step_cap;
      out.censored = true;
      break;
    }
    const int j = step.sample(rng);
    pos.c[j >> 1] += (j & 1) ? -1 : 1;
    s_dot_ell += proj[j];
    ++k;
    out.positions.push_back(pos);
  }
  return out;
}

ExitRecord exit_ball(int dim, const Site& start, double radius,
                     SplitMix64& rng, std::int64_t step_cap) {
  check_dim(dim);
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw std::invalid_argument("radius must be finite and nonnegative");
  const double r2 = radius * radius;
  std::array<std::int64_t, kMaxDim> off{};
  std::int64_t d2 = 0;
  ExitRecord out;
  for (std::int64_t k = 0;; ++k) {
    if (static_cast<double>(d2) > r2) {
      out.exit_time = k;
      out.exit_dist2 = d2;
      break;
    }
    if (k >= step_cap) {
      out.exit_time = step_cap;
      out.exit_dist2 = d2;
      out.censored = true;
      break;
    }
    const auto j = rng.next_below(2 * static_cast<std::uint64_t>(dim));
    const int axis = static_cast<int>(j >> 1);
    const std::int64_t delta = (j & 1) ? -1 : 1;
    d2 += 2 * delta * off[axis] + 1;
    off[axis] += delta;
  }
  out.exit_site = start;
  for (int i = 0; i < dim; ++i) out.exit_site.c[i] += static_cast<std::int32_t>(off[i]);
  return out;
}

std::vector<std::int64_t> coarse_grain(const WalkPath& path, double radius) {
  const double r2 = radius * radius;
  std::vector<std::int64_t> exits{0};
  std::int64_t anchor = 0;
  for (std::int64_t k = 1; k < static_cast<std::int64_t>(path.positions.size()); ++k) {
    if (static_cast<double>(dist2(path.positions[k], path.positions[anchor], path.dim)) > r2) {
      exits.push_back(k);
      anchor = k;
    }
  }
  return exits;
}

// --- statistics kernels ---

namespace {

constexpr int kStatChunks = 512;

struct ChunkMoments {
  double sum = 0.0, sumsq = 0.0;
  std::int64_t n = 0;
};

template <typename PerWalk>
ChunkMoments run_chunk(std::int64_t walks, std::uint64_t chunk_seed, PerWalk&& per_walk) {
  SplitMix64 rng(chunk_seed);
  ChunkMoments m;
  for (std::int64_t i = 0; i < walks; ++i) {
    const double x = per_walk(rng);
    m.sum += x;
    m.sumsq += x * x;
    ++m.n;
  }
  return m;
}

template <typename PerWalk>
void run_all_chunks(std::int64_t samples, std::uint64_t seed, int workers,
                    bool parallel, std::vector<ChunkMoments>& parts,
                    PerWalk per_walk) {
  parts.assign(kStatChunks, ChunkMoments{});
  const std::int64_t base = samples / kStatChunks;
  const std::int64_t extra = samples % kStatChunks;
#ifdef RWRP_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
    for (int c = 0; c < kStatChunks; ++c) {
      const std::int64_t walks = base + (c < extra ? 1 : 0);
      parts[c] = run_chunk(walks, derive_seed(seed, static_cast<std::uint64_t>(c)), per_walk);
    }
    return;
  }
#else
  (void)workers;
  (void)parallel;
#endif
  for (int c = 0; c < kStatChunks; ++c) {
    const std::int64_t walks = base + (c < extra ? 1 : 0);
    parts[c] = run_chunk(walks, derive_seed(seed, static_cast<std::uint64_t>(c)), per_walk);
  }
}

// merged in fixed chunk order, so thread count never changes the result
void reduce_moments(const std::vector<ChunkMoments>& parts, double& mean,
                    double& sd_of_mean, std::int64_t& n) {
  KahanSum sum, sumsq;
  n = 0;
  for (const auto& p : parts) {
    sum.add(p.sum);
    sumsq.add(p.sumsq);
    n += p.n;
  }
  if (n == 0) {
    mean = 0.0;
    sd_of_mean = 0.0;
    return;
  }
  mean = sum.value() / static_cast<double>(n);
  const double var = std::max(0.0, sumsq.value() / static_cast<double>(n) - mean * mean);
  sd_of_mean = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
}

ProjectionStats projection_stats_impl(int dim, double radius, const Direction& ell,
                                      std::int64_t samples, std::uint64_t seed,
                                      int workers, bool parallel) {
  check_dim(dim);
  const double r2 = radius * radius;
  std::vector<ChunkMoments> parts;
  run_all_chunks(samples, seed, workers, parallel, parts, [&](SplitMix64& rng) {
    const ExitRecord rec = exit_ball(dim, Site::origin(), radius, rng);
    const double p = ell.dot(rec.exit_site);
    return p * p / r2;
  });
  ProjectionStats out;
  reduce_moments(parts, out.mean_proj2_over_r2, out.sigma, out.samples);
  return out;
}

SubstepStats substep_stats_impl(int dim, double radius_big, double radius_small,
                                std::int64_t samples, std::uint64_t seed,
                                int workers, bool parallel) {
  check_dim(dim);
  if (!(radius_small > 0.0) || !(radius_big > radius_small))
    throw std::invalid_argument("need 0 < fine radius < coarse radius");
  const double rb2 = radius_big * radius_big;
  const double rs2 = radius_small * radius_small;
  std::vector<ChunkMoments> parts;
  run_all_chunks(samples, seed, workers, parallel, parts, [&](SplitMix64& rng) {
    std::array<std::int64_t, kMaxDim> pos{}, anchor{};
    std::int64_t renewals = 0;
    for (;;) {
      std::int64_t db = 0, ds = 0;
      for (int i = 0; i < dim; ++i) {
        db += pos[i] * pos[i];
        const std::int64_t d = pos[i] - anchor[i];
        ds += d * d;
      }
      if (static_cast<double>(db) > rb2) break;
      if (static_cast<double>(ds) > rs2) {
        ++renewals;
        anchor = pos;
      }
      const auto j = rng.next_below(2 * static_cast<std::uint64_t>(dim));
      pos[j >> 1] += (j & 1) ? -1 : 1;
    }
    return static_cast<double>(renewals);
  });
  SubstepStats out;
  reduce_moments(parts, out.mean, out.sigma, out.samples);
  return out;
}

}  // namespace

ProjectionStats exit_projection_stats(int dim, double radius, const Direction& ell,
                                      std::int64_t samples, std::uint64_t seed,
                                      int workers) {
  return projection_stats_impl(dim, radius, ell, samples, seed, workers, true);
}

ProjectionStats exit_projection_stats_reference(int dim, double radius,
                                                const Direction& ell,
                                                std::int64_t samples,
                                                std::uint64_t seed) {
  return projection_stats_impl(dim, radius, ell, samples, seed, 1, false);
}

SubstepStats coarse_substep_stats(int dim, double radius_big, double radius_small,
                                  std::int64_t samples, std::uint64_t seed,
                                  int workers) {
  return substep_stats_impl(dim, radius_big, radius_small, samples, seed, workers, true);
}

SubstepStats coarse_substep_stats_reference(int dim, double radius_big,
                                            double radius_small,
                                            std::int64_t samples,
                                            std::uint64_t seed) {
  return substep_stats_impl(dim, radius_big, radius_small, samples, seed, 1, false);
}

}  // namespace rwrp::lattice
