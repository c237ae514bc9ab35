#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reference.hpp"
#include "rwrp/environment.hpp"
#include "rwrp/green.hpp"
#include "rwrp/numeric.hpp"
#include "rwrp/potential.hpp"

using namespace rwrp;
using env::Potential;
using lattice::Site;

namespace {
lattice::Box cube(int dim, int lo, int hi) {
  lattice::Box box;
  box.dim = dim;
  for (int ax = 0; ax < dim; ++ax) {
    box.lo[ax] = lo;
    box.hi[ax] = hi;
  }
  return box;
}
}  // namespace

TEST_CASE("green solve: symmetry, positivity, delta normalization") {
  const auto box = cube(3, -3, 3);
  const auto field = env::sample_field(Potential::exponential(1.0), box, 404, 2);
  Site x, y;
  x.c = {-1, 0, 2, 0, 0, 0};
  y.c = {2, -1, 0, 0, 0, 0};
  const double tol = 1e-12;
  const auto gx = green::solve_green(field, 0.4, x, tol);
  const auto gy = green::solve_green(field, 0.4, y, tol);
  CHECK(std::fabs(gx[box.index(y)] - gy[box.index(x)]) < 1e-10);
  for (double v : gx) CHECK(v >= -1e-11);
  // row of the operator at the source: (1 + beta V) g - (1/2d) sum g_nbr = 1
  double acc = (1.0 + 0.4 * field.at(x)) * gx[box.index(x)];
  for (int ax = 0; ax < 3; ++ax)
    for (int s : {-1, 1}) {
      Site nb = x;
      nb.c[ax] += s;
      if (box.contains(nb)) acc -= gx[box.index(nb)] / 6.0;
    }
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("negative potentials are rejected") {
  const auto box = cube(3, 0, 2);
  auto field = env::sample_field(Potential::exponential(1.0), box, 1, 1);
  field.values[4] = -0.25;
  CHECK_THROWS_AS(green::solve_green(field, 0.5, box.at(0)), std::invalid_argument);
}

TEST_CASE("source must lie inside the box") {
  const auto box = cube(3, 0, 2);
  const auto field = env::sample_field(Potential::exponential(1.0), box, 2, 1);
  Site out;
  out.c = {5, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(green::solve_green(field, 0.5, out), std::invalid_argument);
}

TEST_CASE("walk series agrees with the solver within its tail bound") {
  const auto box = cube(3, 0, 2);
  for (std::uint64_t seed : {11ull, 12ull}) {
    const auto field = env::sample_field(Potential::pareto(0.5, 1.0), box, seed, 1);
    const auto fk = green::fk_equivalence_check(field, 0.5);
    CHECK(fk.max_abs_dev <= fk.tail_bound + 1e-10);
    CHECK(fk.max_abs_dev < 1e-8);
    CHECK(fk.contraction < 1.0);
    CHECK(fk.terms_used > 10);
  }
}

TEST_CASE("free green function matches a direct walk simulation") {
  const auto box = cube(3, -3, 3);
  const Potential zero = Potential::point_mass(0.0);
  const auto field = env::sample_field(zero, box, 7, 1);
  Site src = Site::origin();
  const auto g = green::solve_green(field, 1.0, src, 1e-13);
  const auto occ = ref::mc_occupation(box, src, 400000, 2024);
  for (std::int64_t i = 0; i < box.size(); ++i) {
    const double band = 4.0 * occ.sigma[i] + 1e-4;
    CHECK(std::fabs(g[i] - occ.mean[i]) < band);
  }
  // visits at the origin of a transient-in-the-box walk exceed one
  CHECK(g[box.index(src)] > 1.0);
}

TEST_CASE("stronger coupling speeds up the averaged decay") {
  const Potential mu = Potential::exponential(1.0);
  const std::vector<int> dist = {4, 6, 8, 10};
  const auto slow = green::averaged_green_decay(mu, 0.05, 3, 0, dist, 20, 6, 55, 2);
  const auto fast = green::averaged_green_decay(mu, 0.3, 3, 0, dist, 20, 6, 55, 2);
  CHECK(slow.environments == 20);
  CHECK(fast.fit.rate > slow.fit.rate);
  CHECK(slow.fit.rate > 0.0);
  // reruns with the same seed reproduce exactly
  const auto again = green::averaged_green_decay(mu, 0.05, 3, 0, dist, 20, 6, 55, 2);
  CHECK(again.fit.rate == slow.fit.rate);
  CHECK(again.margin_rate_shift == slow.margin_rate_shift);
}

TEST_CASE("homogeneous decay follows the dispersion relation") {
  // (1 + beta v0) = (cosh k + d - 1)/d fixes the axis decay exponent k
  const double beta = 0.5, v0 = 2.0;
  const double k = std::acosh(3.0 * (1.0 + beta * v0) - 2.0);
  const Potential mu = Potential::point_mass(v0);
  const std::vector<int> dist = {5, 7, 9, 11, 13};
  const auto res = green::averaged_green_decay(mu, beta, 3, 0, dist, 1, 7, 1, 2, 1e-13);
  CHECK(res.fit.rate >= k - 0.02);
  CHECK(res.fit.rate <= k + 0.25);
  CHECK(res.margin_rate_shift < 0.05);
}
