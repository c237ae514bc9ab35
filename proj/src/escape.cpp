#include "rwrp/escape.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rwrp/lattice.hpp"
#include "rwrp/numeric.hpp"
#include "rwrp/rng.hpp"

#ifdef RWRP_HAVE_OPENMP
#include <omp.h>
#endif

namespace rwrp::lattice {

namespace {

double slice_sum(const std::vector<double>& c, int remaining, double partial,
                 bool allzero) {
  const int n = static_cast<int>(c.size());
  if (remaining == 1) {
    double s = 0.0;
    for (int k = allzero ? 1 : 0; k < n; ++k) s += 1.0 / (partial + c[k]);
    return s;
  }
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    s += slice_sum(c, remaining - 1, partial + c[k], allzero && k == 0);
  return s;
}

// vals_i = limit + sum_j a_j N_i^{-orders_j}; returns the limit by solving
// the square Vandermonde-like system
double richardson_limit(const std::vector<int>& levels,
                        const std::vector<double>& vals,
                        const std::vector<int>& orders) {
  const int m = static_cast<int>(levels.size());
  if (static_cast<int>(orders.size()) + 1 != m || static_cast<int>(vals.size()) != m)
    throw std::invalid_argument("richardson: size mismatch");
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    a[i][0] = 1.0;
    for (int j = 1; j < m; ++j)
      a[i][j] = std::pow(static_cast<double>(levels[i]), -orders[j - 1]);
    a[i][m] = vals[i];
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0.0) throw std::runtime_error("richardson: singular system");
    for (int r = col + 1; r < m; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int j = col; j <= m; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<double> x(m);
  for (int r = m - 1; r >= 0; --r) {
    double s = a[r][m];
    for (int j = r + 1; j < m; ++j) s -= a[r][j] * x[j];
    x[r] = s / a[r][r];
  }
  return x[0];
}

void quad_plan(int dim, std::vector<int>& levels, std::vector<int>& orders) {
  switch (dim) {
    case 3:
      levels = {16, 32, 64, 128, 192};
      orders = {1, 2, 3};
      break;
    case 4:
      levels = {24, 32, 48, 64, 96};
      orders = {1, 2, 3};
      break;
    case 5:
      levels = {12, 16, 24, 32, 48};
      orders = {2, 3, 4};
      break;
    case 6:
      levels = {8, 10, 12, 16, 20};
      orders = {2, 3, 4};
      break;
    default:
      throw std::invalid_argument("escape probability requires 3 <= d <= 6");
  }
}

}  // namespace

double momentum_green_sum(int dim, int level, int workers) {
  if (dim < 3 || dim > kMaxDim) throw std::invalid_argument("dimension out of range [3,6]");
  if (level < 2) throw std::invalid_argument("grid level must be at least 2");
  std::vector<double> c(level);
  for (int i = 0; i < level; ++i)
    c[i] = 1.0 - std::cos(2.0 * std::numbers::pi * i / level);
  c[0] = 0.0;

  std::vector<double> slices(level, 0.0);
#ifdef RWRP_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
#else
  (void)workers;
#endif
  for (int k0 = 0; k0 < level; ++k0)
    slices[k0] = slice_sum(c, dim - 1, c[k0], k0 == 0);

  const double total = pairwise_sum(slices);
  return dim * total / std::pow(static_cast<double>(level), dim);
}

EscapeQuadResult escape_probability_quadrature(int dim, double tol, int workers) {
  std::vector<int> levels, orders;
  quad_plan(dim, levels, orders);

  std::vector<double> vals(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i)
    vals[i] = momentum_green_sum(dim, levels[i], workers);

  const int w = static_cast<int>(orders.size()) + 1;
  std::vector<int> lv0(levels.begin(), levels.begin() + w);
  std::vector<double> va0(vals.begin(), vals.begin() + w);
  std::vector<int> lv1(levels.end() - w, levels.end());
  std::vector<double> va1(vals.end() - w, vals.end());
  const double g0 = richardson_limit(lv0, va0, orders);
  const double g1 = richardson_limit(lv1, va1, orders);

  EscapeQuadResult out;
  out.green = g1;
  out.q = 1.0 / g1;
  out.achieved_tol = std::abs(1.0 / g1 - 1.0 / g0);
  out.grid_levels = levels;
  if (!(out.achieved_tol <= tol))
    throw NumericalError("escape quadrature extrapolants disagree beyond tolerance",
                         out.achieved_tol);
  return out;
}

double green_asymptotic_constant(int dim) {
  if (dim < 3) throw std::invalid_argument("asymptotic constant requires d >= 3");
  return 0.5 * dim * std::tgamma(0.5 * dim - 1.0) *
         std::pow(std::numbers::pi, -0.5 * dim);
}

namespace {

constexpr int kMcChunks = 512;

struct McPartial {
  std::int64_t walks = 0, escaped = 0, censored = 0;
  double corr = 0.0;  // sum over escaped walks of c_d |S_tau|^{2-d}
};

McPartial mc_chunk(int dim, std::int64_t walks, double r2, double cd,
                   double exponent, std::uint64_t chunk_seed,
                   std::int64_t step_cap) {
  SplitMix64 rng(chunk_seed);
  McPartial p;
  const auto two_d = 2 * static_cast<std::uint64_t>(dim);
  for (std::int64_t i = 0; i < walks; ++i) {
    std::array<std::int64_t, kMaxDim> off{};
    std::int64_t d2 = 0;
    std::int64_t k = 0;
    int outcome = -1;  // 0 returned, 1 escaped
    for (;;) {
      if (k >= step_cap) break;
      const auto j = rng.next_below(two_d);
      const int axis = static_cast<int>(j >> 1);
      const std::int64_t delta = (j & 1) ? -1 : 1;
      d2 += 2 * delta * off[axis] + 1;
      off[axis] += delta;
      ++k;
      if (d2 == 0) {
        outcome = 0;
        break;
      }
      if (static_cast<double>(d2) > r2) {
        outcome = 1;
        break;
      }
    }
    ++p.walks;
    if (outcome == 1) {
      ++p.escaped;
      p.corr += cd * std::pow(static_cast<double>(d2), exponent);
    } else if (outcome == -1) {
      ++p.censored;
    }
  }
  return p;
}

EscapeMcResult mc_impl(int dim, std::int64_t walks, std::uint64_t seed,
                       double radius, int workers, std::int64_t step_cap,
                       bool parallel) {
  if (dim < 3 || dim > kMaxDim) throw std::invalid_argument("escape MC requires 3 <= d <= 6");
  if (walks < 1) throw std::invalid_argument("need at least one walk");
  if (radius <= 0.0) radius = dim == 3 ? 25.0 : (dim == 4 ? 15.0 : 8.0);

  const double r2 = radius * radius;
  const double cd = green_asymptotic_constant(dim);
  const double exponent = 0.5 * (2.0 - dim);  // applied to |S|^2

  std::vector<McPartial> parts(kMcChunks);
  const std::int64_t base = walks / kMcChunks;
  const std::int64_t extra = walks % kMcChunks;
  auto run = [&](int c) {
    const std::int64_t n = base + (c < extra ? 1 : 0);
    parts[c] = mc_chunk(dim, n, r2, cd, exponent,
                        derive_seed(seed, static_cast<std::uint64_t>(c)), step_cap);
  };
#ifdef RWRP_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
    for (int c = 0; c < kMcChunks; ++c) run(c);
  } else
#else
  (void)workers;
  (void)parallel;
#endif
  {
    for (int c = 0; c < kMcChunks; ++c) run(c);
  }

  std::int64_t nesc = 0, ncen = 0, ntot = 0;
  KahanSum corr;
  for (const auto& p : parts) {
    nesc += p.escaped;
    ncen += p.censored;
    ntot += p.walks;
    corr.add(p.corr);
  }
  const std::int64_t resolved = ntot - ncen;
  EscapeMcResult out;
  out.walks = ntot;
  out.censored = ncen;
  out.radius = radius;
  if (resolved <= 0) {
    out.sigma = std::numeric_limits<double>::infinity();
    return out;
  }
  const double nn = static_cast<double>(resolved);
  out.raw_escape_fraction = static_cast<double>(nesc) / nn;
  // E[1_escape] = q + q E[1_escape G(0, S_tau)]: solve with G replaced by
  // its asymptotic form, so only the relative asymptotic error survives
  out.q = static_cast<double>(nesc) / (nn + corr.value());
  out.sigma = std::sqrt(std::max(0.0, out.q * (1.0 - out.q) / nn));
  out.correction_bound = cd * std::pow(radius, 2.0 - dim);
  return out;
}

}  // namespace

EscapeMcResult escape_probability_mc(int dim, std::int64_t walks,
                                     std::uint64_t seed, double radius,
                                     int workers, std::int64_t step_cap) {
  return mc_impl(dim, walks, seed, radius, workers, step_cap, true);
}

EscapeMcResult escape_probability_mc_reference(int dim, std::int64_t walks,
                                               std::uint64_t seed, double radius,
                                               std::int64_t step_cap) {
  return mc_impl(dim, walks, seed, radius, 1, step_cap, false);
}

}  // namespace rwrp::lattice
