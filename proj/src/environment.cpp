#include "rwrp/environment.hpp"

#include <algorithm>
#include <stdexcept>

#include "rwrp/rng.hpp"

#ifdef RWRP_HAVE_OPENMP
#include <omp.h>
#endif

namespace rwrp::env {

std::uint64_t site_key(const lattice::Site& s, int dim) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(dim);
  for (int i = 0; i < dim; ++i) {
    const auto c = static_cast<std::uint64_t>(
        static_cast<std::int64_t>(s.c[i]));
    h = mix64(h ^ c);
  }
  return h;
}

double site_value(const Potential& mu, std::uint64_t seed,
                  const lattice::Site& s, int dim) {
  return mu.site_value(seed, site_key(s, dim));
}

namespace {

Field sample_impl(const Potential& mu, const lattice::Box& box,
                  std::uint64_t seed, int workers, bool parallel) {
  const std::int64_t n = box.size();
  if (n <= 0) throw std::invalid_argument("field: empty box");
  if (n > (std::int64_t{1} << 28))
    throw std::invalid_argument("field: box exceeds memory budget");
  Field f;
  f.box = box;
  f.seed = seed;
  f.values.resize(n);
#ifdef RWRP_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static) num_threads(std::max(1, workers))
    for (std::int64_t idx = 0; idx < n; ++idx)
      f.values[idx] = mu.site_value(seed, site_key(box.at(idx), box.dim));
    return f;
  }
#else
  (void)workers;
  (void)parallel;
#endif
  for (std::int64_t idx = 0; idx < n; ++idx)
    f.values[idx] = mu.site_value(seed, site_key(box.at(idx), box.dim));
  return f;
}

}  // namespace

Field sample_field(const Potential& mu, const lattice::Box& box,
                   std::uint64_t seed, int workers) {
  return sample_impl(mu, box, seed, workers, true);
}

Field sample_field_reference(const Potential& mu, const lattice::Box& box,
                             std::uint64_t seed) {
  return sample_impl(mu, box, seed, 1, false);
}

}  // namespace rwrp::env
