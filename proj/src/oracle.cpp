#include "rwrp/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rwrp/lattice.hpp"
#include "rwrp/numeric.hpp"

namespace rwrp::oracle {

namespace {

struct EnumState {
  int dim = 0;
  int level = 0;
  int max_len = 0;
  int half = 0;  // coordinate offset
  std::vector<std::int64_t> stride;
  std::vector<std::int8_t> count;
  std::vector<double> lap;   // lap[k] = E[e^{-beta k V}]
  std::vector<double> prob;  // prob[k] = (2d)^{-k}
  KahanSum lower, upper_extra, crossed;
  std::uint64_t nodes = 0;
  std::uint64_t budget = 0;
};

void enum_dfs(EnumState& st, std::array<int, lattice::kMaxDim>& pos, int depth,
              std::int64_t flat, double weight) {
  if (++st.nodes > st.budget)
    throw std::invalid_argument("enumeration: node budget exceeded");
  if (pos[0] >= st.level) {
    const double p = st.prob[depth];
    st.lower.add(p * weight);
    st.crossed.add(p);
    return;
  }
  if (depth == st.max_len) {
    st.upper_extra.add(st.prob[depth] * weight);
    return;
  }
  const std::int8_t c = st.count[flat];
  st.count[flat] = static_cast<std::int8_t>(c + 1);
  const double w = weight * st.lap[c + 1] / st.lap[c];
  for (int ax = 0; ax < st.dim; ++ax) {
    for (int sgn : {1, -1}) {
      pos[ax] += sgn;
      enum_dfs(st, pos, depth + 1, flat + sgn * st.stride[ax], w);
      pos[ax] -= sgn;
    }
  }
  st.count[flat] = c;
}

}  // namespace

EnumBracket exact_passage_weight(double beta, int level,
                                 const env::Potential& mu, int dim,
                                 int max_len) {
  if (dim < 1 || dim > lattice::kMaxDim)
    throw std::invalid_argument("enumeration: dimension out of range");
  if (level < 0 || max_len < 0 || max_len > 14)
    throw std::invalid_argument("enumeration: need level >= 0 and max_len in [0,14]");

  EnumState st;
  st.dim = dim;
  st.level = level;
  st.max_len = max_len;
  st.half = max_len;
  st.budget = 600'000'000;

  const int side = 2 * max_len + 1;
  st.stride.resize(dim);
  std::int64_t sz = 1;
  for (int i = dim - 1; i >= 0; --i) {
    st.stride[i] = sz;
    sz *= side;
  }
  st.count.assign(sz, 0);

  st.lap.resize(max_len + 2);
  st.lap[0] = 1.0;
  for (int k = 1; k <= max_len + 1; ++k) st.lap[k] = mu.laplace(beta * k);

  st.prob.resize(max_len + 1);
  st.prob[0] = 1.0;
  for (int k = 1; k <= max_len; ++k) st.prob[k] = st.prob[k - 1] / (2.0 * dim);

  std::array<int, lattice::kMaxDim> pos{};
  std::int64_t flat = 0;
  for (int i = 0; i < dim; ++i) flat += st.half * st.stride[i];
  enum_dfs(st, pos, 0, flat, 1.0);

  EnumBracket out;
  out.lower = st.lower.value();
  out.upper = st.lower.value() + st.upper_extra.value();
  out.crossed_prob = st.crossed.value();
  out.nodes = st.nodes;
  out.max_len = max_len;
  return out;
}

double exact_binomial_tail(int n, double p, int k, theory::TailSide side) {
  if (n < 0 || n > 100000) throw std::invalid_argument("binomial tail: n out of range");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("binomial tail: p in (0,1)");
  k = std::max(0, std::min(k, n));
  const double lp = std::log(p), lq = std::log1p(-p);
  auto log_term = [&](int j) {
    return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
           j * lp + (n - j) * lq;
  };
  KahanSum acc;
  if (side == theory::TailSide::upper) {
    // P[X >= k]; terms typically shrink toward j = n, so add those first
    for (int j = n; j >= k; --j) acc.add(std::exp(log_term(j)));
  } else {
    for (int j = 0; j <= k; ++j) acc.add(std::exp(log_term(j)));
  }
  return std::min(1.0, acc.value());
}

namespace {

std::uint64_t chain_dfs(int pos, int total, int minval, int cap,
                        std::uint64_t& nodes, std::uint64_t budget) {
  if (++nodes > budget)
    throw std::invalid_argument("surgery enumeration: node budget exceeded");
  if (pos == total) return 1;
  std::uint64_t acc = 0;
  for (int v = minval; v <= cap; ++v)
    acc += chain_dfs(pos + 1, total, v, cap, nodes, budget);
  return acc;
}

}  // namespace

std::uint64_t enumerate_surgeries(int K, int j, std::uint64_t node_budget) {
  if (K < 0 || j < 0) throw std::invalid_argument("surgery enumeration: negative input");
  if (j == 0) return 1;
  std::uint64_t nodes = 0;
  return chain_dfs(0, 2 * j, 0, K, nodes, node_budget);
}

std::uint64_t binomial_coeff(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("binomial: bad arguments");
  if (n > 66) throw std::invalid_argument("binomial: n too large for exact 64-bit");
  std::vector<std::uint64_t> row(n + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int c = i; c >= 1; --c) row[c] += row[c - 1];
  return row[k];
}

}  // namespace rwrp::oracle
