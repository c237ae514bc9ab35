#pragma once

#include <cstdint>
#include <vector>

#include "rwrp/lattice.hpp"
#include "rwrp/potential.hpp"

namespace rwrp::fkmc {

// Precomputed log E[exp(-beta k V)] for local times k = 1..premax; larger
// counts fall back to a direct stable evaluation.
class LaplaceTable {
 public:
  LaplaceTable(const env::Potential& mu, double beta, std::int64_t premax = 4096);

  double log_laplace_count(std::int64_t k) const;
  double beta() const { return beta_; }
  const env::Potential& potential() const { return mu_; }

 private:
  env::Potential mu_;
  double beta_;
  std::vector<double> table_;  // index k, [0] unused = 0
};

// log of the annealed weight prod_x E[exp(-beta L_x V)] for the local-time
// profile of a single walk
double log_annealed_weight(const lattice::PassageProfile& profile,
                           const LaplaceTable& table);

}  // namespace rwrp::fkmc
