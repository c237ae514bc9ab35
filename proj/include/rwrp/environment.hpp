#pragma once

#include <cstdint>
#include <vector>

#include "rwrp/lattice.hpp"
#include "rwrp/potential.hpp"

namespace rwrp::env {

// stable per-site hash fed into the potential's deterministic draw; dense
// sampling and lazy lookups agree because both go through this key
std::uint64_t site_key(const lattice::Site& s, int dim);

double site_value(const Potential& mu, std::uint64_t seed,
                  const lattice::Site& s, int dim);

// iid potential values over a box, materialized in box index order
struct Field {
  lattice::Box box;
  std::uint64_t seed = 0;
  std::vector<double> values;

  double at(const lattice::Site& s) const { return values[box.index(s)]; }
};

Field sample_field(const Potential& mu, const lattice::Box& box,
                   std::uint64_t seed, int workers = 1);
Field sample_field_reference(const Potential& mu, const lattice::Box& box,
                             std::uint64_t seed);

}  // namespace rwrp::env
