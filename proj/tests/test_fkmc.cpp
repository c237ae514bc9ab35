#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rwrp/annealed.hpp"
#include "rwrp/estimator.hpp"
#include "rwrp/fitting.hpp"
#include "rwrp/lattice.hpp"
#include "rwrp/numeric.hpp"
#include "rwrp/oracle.hpp"
#include "rwrp/potential.hpp"
#include "rwrp/quenched.hpp"

using namespace rwrp;
using env::Potential;

TEST_CASE("annealed weight is the product of per-site laplace factors") {
  const Potential mu = Potential::atoms({1.0, 4.0}, {0.5, 0.5});
  const double beta = 0.7;
  const fkmc::LaplaceTable table(mu, beta, 16);

  lattice::PassageProfile prof;
  lattice::Site s1;
  s1.c = {1, 0, 0, 0, 0, 0};
  prof.counts[lattice::pack_site(lattice::Site::origin(), 3)] = 2;
  prof.counts[lattice::pack_site(s1, 3)] = 1;
  prof.duration = 3;

  auto lap = [&](double t) {
    return 0.5 * std::exp(-t * 1.0) + 0.5 * std::exp(-t * 4.0);
  };
  const double want = std::log(lap(2 * beta)) + std::log(lap(beta));
  CHECK(fkmc::log_annealed_weight(prof, table) == doctest::Approx(want).epsilon(1e-12));
  CHECK(table.log_laplace_count(0) == 0.0);
  // counts past the precomputed range fall back to direct evaluation
  CHECK(table.log_laplace_count(40) == doctest::Approx(std::log(lap(40 * beta))).epsilon(1e-12));
}

TEST_CASE("zero coupling gives weight one with no variance") {
  const Potential mu = Potential::pareto(0.5, 1.0);
  fkmc::EstimateOptions opt;
  opt.samples = 64;
  const auto est = fkmc::estimate_passage_weight(
      0.0, 5.0, mu, lattice::Direction::axis_dir(3, 0), opt);
  CHECK(est.log_mean == 0.0);
  CHECK(est.sigma_log == 0.0);
  CHECK(est.censored == 0);
}

TEST_CASE("estimator lands inside the exact enumeration bracket") {
  const Potential mu = Potential::atoms({1.0, 4.0}, {0.5, 0.5});
  const double beta = 0.5;
  const auto br = oracle::exact_passage_weight(beta, 2, mu, 3, 10);
  REQUIRE(br.lower > 0.0);
  REQUIRE(br.upper >= br.lower);

  fkmc::EstimateOptions opt;
  opt.samples = 40000;
  opt.seed = 21;
  opt.workers = 2;
  const auto est = fkmc::estimate_passage_weight(
      beta, 2.0, mu, lattice::Direction::axis_dir(3, 0), opt);
  CHECK(est.log_mean + 3.0 * est.sigma_log >= std::log(br.lower));
  CHECK(est.log_mean - 3.0 * est.sigma_log <= std::log(br.upper));
}

TEST_CASE("same-seed estimates are monotone in coupling and distance") {
  const Potential mu = Potential::atoms({1.0, 4.0}, {0.5, 0.5});
  const auto ell = lattice::Direction::axis_dir(3, 0);
  fkmc::EstimateOptions opt;
  opt.samples = 4000;
  opt.seed = 33;
  const auto weak = fkmc::estimate_passage_weight(0.3, 3.0, mu, ell, opt);
  const auto strong = fkmc::estimate_passage_weight(0.6, 3.0, mu, ell, opt);
  CHECK(strong.log_mean <= weak.log_mean + 1e-12);
  const auto nearby = fkmc::estimate_passage_weight(0.3, 2.0, mu, ell, opt);
  CHECK(weak.log_mean <= nearby.log_mean + 1e-12);
}

TEST_CASE("tilting reduces variance without moving the estimate") {
  const Potential mu = Potential::exponential(1.0);
  const auto ell = lattice::Direction::axis_dir(3, 0);
  fkmc::EstimateOptions opt;
  opt.samples = 30000;
  opt.seed = 5;
  opt.workers = 2;
  const auto plain = fkmc::estimate_passage_weight(0.1, 8.0, mu, ell, opt);
  const auto driven = fkmc::estimate_passage_weight(
      0.1, 8.0, mu, ell, opt, fkmc::make_tilt(0.09, 3));
  CHECK(driven.lambda == doctest::Approx(std::sqrt(2.0 * 3 * 0.09)).epsilon(1e-12));
  CHECK(std::fabs(driven.log_mean - plain.log_mean) <=
        3.0 * (driven.sigma_log + plain.sigma_log));
  CHECK(driven.sigma_log < plain.sigma_log);
}

TEST_CASE("censoring only removes weight and is flagged") {
  const Potential mu = Potential::atoms({1.0}, {1.0});
  const auto ell = lattice::Direction::axis_dir(3, 0);
  fkmc::EstimateOptions opt;
  opt.samples = 4000;
  opt.seed = 8;
  opt.step_cap = 20;
  const auto est = fkmc::estimate_passage_weight(0.2, 8.0, mu, ell, opt,
                                                 fkmc::make_tilt(0.3, 3));
  CHECK(est.censored > 0);
  CHECK(est.censored < est.samples);
  opt.step_cap = 0;  // default cap clears the censoring at this depth
  const auto full = fkmc::estimate_passage_weight(0.2, 8.0, mu, ell, opt,
                                                  fkmc::make_tilt(0.3, 3));
  CHECK(full.censored == 0);
  CHECK(full.log_mean >= est.log_mean - 3.0 * (full.sigma_log + est.sigma_log));
}

TEST_CASE("rate fit recovers an exact linear decay") {
  std::vector<fkmc::RatePoint> pts;
  for (int n = 4; n <= 40; n += 4)
    pts.push_back({static_cast<double>(n), 1.3 - 0.62 * n, 0.01});
  const auto fit = fkmc::fit_rate(pts);
  CHECK(fit.rate == doctest::Approx(0.62).epsilon(1e-12));
  CHECK(fit.full_rate == doctest::Approx(0.62).epsilon(1e-12));
  // the fit works on -log values, so the reported intercept is negated
  CHECK(fit.intercept == doctest::Approx(-1.3).epsilon(1e-10));
  CHECK(fit.window_sensitivity < 1e-10);
  CHECK(fit.monotone_ok);
  CHECK(fit.window_points >= 3);
}

TEST_CASE("rate fit flags short or ragged inputs") {
  std::vector<fkmc::RatePoint> three = {
      {4, -1, 0.1}, {8, -2, 0.1}, {12, -3, 0.1}};
  CHECK_THROWS_AS(fkmc::fit_rate(three), std::invalid_argument);

  std::vector<fkmc::RatePoint> ragged;
  for (int n = 4; n <= 32; n += 4) {
    const double bump = (n == 20) ? 3.0 : 0.0;  // big upward excursion
    ragged.push_back({static_cast<double>(n), -0.5 * n + bump, 0.01});
  }
  const auto fit = fkmc::fit_rate(ragged);
  CHECK(!fit.monotone_ok);
}

TEST_CASE("noisy synthetic decay is recovered within its error bar") {
  SplitMix64 rng(1001);
  std::vector<fkmc::RatePoint> pts;
  for (int n = 6; n <= 48; n += 6) {
    const double noise = (rng.next_unit() - 0.5) * 0.06;
    pts.push_back({static_cast<double>(n), 0.4 - 0.31 * n + noise, 0.03});
  }
  const auto fit = fkmc::fit_rate(pts);
  CHECK(std::fabs(fit.rate - 0.31) < 4.0 * std::max(fit.rate_sigma, 1e-3));
}

TEST_CASE("t quantiles match the standard table") {
  CHECK(fkmc::t_quantile_975(31) == kT975Df31);
  CHECK(std::fabs(fkmc::t_quantile_975(1) - 12.706) < 5e-3);
  CHECK(std::fabs(fkmc::t_quantile_975(2) - 4.303) < 5e-3);
  CHECK(std::fabs(fkmc::t_quantile_975(10) - 2.228) < 5e-3);
  CHECK(std::fabs(fkmc::t_quantile_975(100000) - 1.95996) < 1e-3);
  double prev = 13.0;
  for (int df = 1; df <= 200; ++df) {
    const double t = fkmc::t_quantile_975(df);
    CHECK(t < prev);
    CHECK(t > 1.9599);
    prev = t;
  }
}

TEST_CASE("a deterministic environment makes quenched equal annealed") {
  fkmc::QuenchedOptions opt;
  opt.environments = 4;
  opt.seed = 3;
  const auto res = fkmc::estimate_quenched(0.5, 3, Potential::point_mass(2.0), 0, 3, opt);
  REQUIRE(res.failed == 0);
  CHECK(res.environments == 4);
  CHECK(res.annealed_sigma == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::fabs(std::log(res.annealed_mean) - res.mean_log) < 1e-10);
  CHECK(std::fabs(res.rate_annealed - res.rate_quenched) < 1e-10);
  for (double u : res.u0) CHECK(u == doctest::Approx(res.u0[0]).epsilon(1e-12));
  CHECK(res.u0[0] > 0.0);
  CHECK(res.u0[0] < 1.0);
}

TEST_CASE("random environments order quenched below annealed") {
  fkmc::QuenchedOptions opt;
  opt.environments = 24;
  opt.seed = 9;
  opt.workers = 2;
  const auto res = fkmc::estimate_quenched(0.5, 4, Potential::atoms({1.0, 4.0}, {0.5, 0.5}),
                                           0, 3, opt);
  REQUIRE(res.failed == 0);
  // Jensen: E[u] >= exp(E[log u]), allow three sigmas of combined noise
  CHECK(res.annealed_mean + 3.0 * res.annealed_sigma >= std::exp(res.mean_log));
  CHECK(res.rate_quenched + 1e-12 >=
        res.rate_annealed - 3.0 * (res.annealed_sigma / res.annealed_mean +
                                   res.mean_log_sigma) / 4.0);
}
