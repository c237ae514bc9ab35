#include "rwrp/annealed.hpp"

#include <stdexcept>

namespace rwrp::fkmc {

LaplaceTable::LaplaceTable(const env::Potential& mu, double beta,
                           std::int64_t premax)
    : mu_(mu), beta_(beta) {
  if (!(beta >= 0.0))
    throw std::invalid_argument("laplace table: beta must be >= 0");
  if (premax < 1) premax = 1;
  if (premax > (std::int64_t{1} << 22)) premax = std::int64_t{1} << 22;
  table_.resize(premax + 1);
  table_[0] = 0.0;
  for (std::int64_t k = 1; k <= premax; ++k)
    table_[k] = mu_.log_laplace(beta * static_cast<double>(k));
}

double LaplaceTable::log_laplace_count(std::int64_t k) const {
  if (k < 0) throw std::invalid_argument("laplace table: negative count");
  if (k < static_cast<std::int64_t>(table_.size())) return table_[k];
  return mu_.log_laplace(beta_ * static_cast<double>(k));
}

double log_annealed_weight(const lattice::PassageProfile& profile,
                           const LaplaceTable& table) {
  double acc = 0.0;
  for (const auto& kv : profile.counts) acc += table.log_laplace_count(kv.second);
  return acc;
}

}  // namespace rwrp::fkmc
