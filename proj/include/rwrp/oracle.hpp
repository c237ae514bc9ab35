#pragma once

#include <cstdint>

#include "rwrp/potential.hpp"
#include "rwrp/theory.hpp"

namespace rwrp::oracle {

// Exact bracket of the annealed passage weight at tiny distances by full
// path enumeration up to a length cutoff: every path either crosses (its
// weight enters the lower bound) or survives uncrossed (weights are <= 1,
// so the leftover probability mass bounds the remainder).
struct EnumBracket {
  double lower = 0.0;
  double upper = 0.0;
  double crossed_prob = 0.0;  // P[T <= cutoff]
  std::uint64_t nodes = 0;
  int max_len = 0;
};

EnumBracket exact_passage_weight(double beta, int level,
                                 const env::Potential& mu, int dim,
                                 int max_len);

// P[Bin(n, p) >= k] (upper) or <= k (lower), by compensated summation
double exact_binomial_tail(int n, double p, int k, theory::TailSide side);

// number of monotone chains 0 <= u_1 <= ... <= u_{2j} <= K, counted by
// direct recursion; equals C(K + 2j, 2j)
std::uint64_t enumerate_surgeries(int K, int j,
                                  std::uint64_t node_budget = 200'000'000);

std::uint64_t binomial_coeff(int n, int k);  // exact via Pascal's rule

}  // namespace rwrp::oracle
