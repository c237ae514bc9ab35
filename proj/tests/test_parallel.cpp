// Every OpenMP kernel must reproduce its serial reference bitwise for any
// worker count: work is split into fixed chunks with per-chunk seeds and
// merged in chunk order.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rwrp/environment.hpp"
#include "rwrp/escape.hpp"
#include "rwrp/estimator.hpp"
#include "rwrp/green.hpp"
#include "rwrp/hitting.hpp"
#include "rwrp/lattice.hpp"
#include "rwrp/potential.hpp"
#include "rwrp/quenched.hpp"

using namespace rwrp;
using env::Potential;

TEST_CASE("escape MC is worker-count independent") {
  const auto serial = lattice::escape_probability_mc_reference(3, 200000, 31, 0.0);
  for (int w : {1, 3, 8}) {
    const auto par = lattice::escape_probability_mc(3, 200000, 31, 0.0, w);
    CHECK(par.q == serial.q);
    CHECK(par.sigma == serial.sigma);
    CHECK(par.censored == serial.censored);
  }
}

TEST_CASE("field sampling is worker-count independent") {
  lattice::Box box;
  box.dim = 3;
  for (int ax = 0; ax < 3; ++ax) {
    box.lo[ax] = -6;
    box.hi[ax] = 6;
  }
  const auto serial = env::sample_field_reference(Potential::pareto(0.5, 1.0), box, 77);
  for (int w : {1, 4, 8}) {
    const auto par = env::sample_field(Potential::pareto(0.5, 1.0), box, 77, w);
    CHECK(par.values == serial.values);
  }
}

TEST_CASE("passage estimator is worker-count independent") {
  const Potential mu = Potential::exponential(1.0);
  const auto ell = lattice::Direction::axis_dir(3, 0);
  fkmc::EstimateOptions opt;
  opt.samples = 8000;
  opt.seed = 19;
  const auto tilt = fkmc::make_tilt(0.05, 3);
  const auto serial = fkmc::estimate_passage_weight_reference(0.1, 6.0, mu, ell, opt, tilt);
  for (int w : {1, 2, 8}) {
    opt.workers = w;
    const auto par = fkmc::estimate_passage_weight(0.1, 6.0, mu, ell, opt, tilt);
    CHECK(par.log_mean == serial.log_mean);
    CHECK(par.sigma_log == serial.sigma_log);
    CHECK(par.censored == serial.censored);
  }
}

TEST_CASE("exit statistics are worker-count independent") {
  const auto ell = lattice::Direction::axis_dir(3, 0);
  const auto serial = lattice::exit_projection_stats_reference(3, 20.0, ell, 3000, 5);
  for (int w : {1, 8}) {
    const auto par = lattice::exit_projection_stats(3, 20.0, ell, 3000, 5, w);
    CHECK(par.mean_proj2_over_r2 == serial.mean_proj2_over_r2);
    CHECK(par.sigma == serial.sigma);
  }
  const auto sub_serial = lattice::coarse_substep_stats_reference(3, 18.0, 6.0, 800, 6);
  for (int w : {1, 8}) {
    const auto par = lattice::coarse_substep_stats(3, 18.0, 6.0, 800, 6, w);
    CHECK(par.mean == sub_serial.mean);
    CHECK(par.sigma == sub_serial.sigma);
  }
}

TEST_CASE("averaged green decay is worker-count independent") {
  const Potential mu = Potential::pareto(0.5, 1.0);
  const std::vector<int> dist = {4, 6, 8, 10};
  const auto serial = green::averaged_green_decay_reference(mu, 0.05, 3, 0, dist, 12, 6, 9);
  for (int w : {1, 8}) {
    const auto par = green::averaged_green_decay(mu, 0.05, 3, 0, dist, 12, 6, 9, w);
    CHECK(par.fit.rate == serial.fit.rate);
    CHECK(par.margin_rate_shift == serial.margin_rate_shift);
    REQUIRE(par.points.size() == serial.points.size());
    for (std::size_t i = 0; i < par.points.size(); ++i) {
      CHECK(par.points[i].log_value == serial.points[i].log_value);
      CHECK(par.points[i].sigma_log == serial.points[i].sigma_log);
    }
  }
}

TEST_CASE("quenched slab estimates are worker-count independent") {
  const Potential mu = Potential::atoms({1.0, 4.0}, {0.5, 0.5});
  fkmc::QuenchedOptions opt;
  opt.environments = 12;
  opt.seed = 14;
  const auto serial = fkmc::estimate_quenched_reference(0.5, 3, mu, 0, 3, opt);
  for (int w : {1, 8}) {
    opt.workers = w;
    const auto par = fkmc::estimate_quenched(0.5, 3, mu, 0, 3, opt);
    CHECK(par.annealed_mean == serial.annealed_mean);
    CHECK(par.mean_log == serial.mean_log);
    CHECK(par.u0 == serial.u0);
  }
}

TEST_CASE("deterministic solvers ignore the worker count") {
  const auto q1 = lattice::escape_probability_quadrature(3, 1e-6, 1);
  const auto q8 = lattice::escape_probability_quadrature(3, 1e-6, 8);
  CHECK(q1.q == q8.q);
  CHECK(q1.green == q8.green);

  lattice::Site y;
  y.c = {5, 0, 0, 0, 0, 0};
  const double h1 = lattice::hitting_prob_exact(3, y, 10.0, 1e-10, nullptr, 1);
  const double h8 = lattice::hitting_prob_exact(3, y, 10.0, 1e-10, nullptr, 8);
  CHECK(h1 == h8);
}
