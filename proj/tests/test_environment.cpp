#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "reference.hpp"
#include "rwrp/environment.hpp"
#include "rwrp/escape.hpp"
#include "rwrp/potential.hpp"
#include "rwrp/rng.hpp"
#include "rwrp/theory.hpp"

using namespace rwrp;
using env::Potential;

namespace {
std::map<std::string, std::string> kv_of(const std::string& described) {
  std::map<std::string, std::string> out;
  std::istringstream ss(described);
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}
}  // namespace

TEST_CASE("laplace transform: pinned value, bounds, log-convexity") {
  const Potential par = Potential::pareto(0.5, 1.0);
  CHECK(std::fabs(par.laplace(1.0) - 0.08907385589078035) < 1e-9);
  for (const Potential& mu :
       {par, Potential::exponential(1.3), Potential::atoms({0.3, 2.0}, {0.6, 0.4})}) {
    CHECK(mu.laplace(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    double prev_log = 0.0, prev_diff = 1e300;
    for (int i = 1; i <= 12; ++i) {
      const double t = 0.25 * i;
      const double lg = mu.log_laplace(t);
      CHECK(lg <= prev_log + 1e-12);               // monotone decreasing
      CHECK(lg == doctest::Approx(std::log(mu.laplace(t))).epsilon(1e-10));
      const double diff = lg - prev_log;
      if (i > 1) CHECK(diff >= prev_diff - 1e-9);  // log-convex: slopes rise
      prev_diff = diff;
      prev_log = lg;
    }
  }
}

TEST_CASE("exponential laplace agrees with the closed form") {
  const Potential ex = Potential::exponential(2.0);
  for (double t : {0.1, 0.7, 3.0})
    CHECK(ex.laplace(t) == doctest::Approx(2.0 / (2.0 + t)).epsilon(1e-12));
}

TEST_CASE("log transform of the potential reproduces the mobility integral") {
  const double qd = lattice::escape_probability_quadrature(3).q;
  for (const Potential& base :
       {Potential::atoms({1.0, 4.0}, {0.5, 0.5}), Potential::pareto(0.7, 0.5),
        Potential::exponential(1.0)}) {
    for (double beta : {0.05, 0.6}) {
      // w = log(1 + beta z)/beta, so the transformed rate integral at the
      // same coupling reproduces the mobility integrand f(log(1 + beta z))
      const Potential tl = Potential::transformed_log(base, beta);
      CHECK(std::fabs(theory::rate_integral(beta, tl, qd) -
                      theory::mobility_edge_integral(beta, base, qd)) < 1e-8);
    }
  }
}

TEST_CASE("truncated mean grows like the integrated tail") {
  const Potential par = Potential::pareto(0.5, 1.0);
  for (double m : {2.0, 10.0, 400.0})
    CHECK(std::fabs(par.truncated_mean(m) - ref::truncated_mean_pareto(0.5, 1.0, m)) <
          1e-8 * std::max(1.0, std::sqrt(m)));
  CHECK(par.truncated_mean(0.5) == 0.0);
  CHECK(!par.mean().has_value());

  const Potential ex = Potential::exponential(0.5);
  REQUIRE(ex.mean().has_value());
  CHECK(*ex.mean() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ex.truncated_mean(1e9) == doctest::Approx(2.0).epsilon(1e-9));

  const Potential at = Potential::atoms({1.0, 3.0}, {0.25, 0.75});
  CHECK(at.truncated_mean(2.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(at.truncated_mean(3.0) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("tail and interval masses are consistent") {
  const Potential par = Potential::pareto(0.5, 2.0);
  CHECK(par.tail_mass(1.0) == doctest::Approx(1.0));
  CHECK(par.tail_mass(8.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(par.interval_mass(2.0, 8.0) == doctest::Approx(0.5).epsilon(1e-12));
  const Potential at = Potential::atoms({1.0, 2.0, 5.0}, {0.2, 0.3, 0.5});
  CHECK(at.interval_mass(2.0, 5.0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(at.interval_mass(1.5, 5.5) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("samples are quantile transforms of the unit stream") {
  const Potential par = Potential::pareto(0.5, 1.0);
  SplitMix64 a(77), b(77);
  for (int i = 0; i < 50; ++i)
    CHECK(par.sample(a) == par.quantile(b.next_unit()));
  // median of Pareto(1/2, zmin) sits at 4 zmin
  SplitMix64 rng(5);
  int above = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    if (par.sample(rng) > 4.0) ++above;
  CHECK(std::fabs(above / static_cast<double>(n) - 0.5) < 0.01);
}

TEST_CASE("field sampling is lazy-consistent and seed-stable") {
  const Potential mu = Potential::exponential(1.0);
  lattice::Box box;
  box.dim = 3;
  for (int ax = 0; ax < 3; ++ax) {
    box.lo[ax] = -3;
    box.hi[ax] = 3;
  }
  const auto field = env::sample_field(mu, box, 1234, 2);
  CHECK(field.values.size() == static_cast<std::size_t>(box.size()));
  for (std::int64_t i = 0; i < box.size(); ++i) {
    const auto s = box.at(i);
    CHECK(field.values[i] == env::site_value(mu, 1234, s, 3));
    CHECK(field.at(s) == field.values[i]);
    CHECK(field.values[i] >= 0.0);
  }
  // a different seed decorrelates, the same seed reproduces
  const auto same = env::sample_field(mu, box, 1234, 2);
  CHECK(same.values == field.values);
  const auto other = env::sample_field(mu, box, 1235, 2);
  CHECK(other.values != field.values);
}

TEST_CASE("describe round-trips through parse for the flat families") {
  const Potential cases[] = {
      Potential::point_mass(2.5),
      Potential::atoms({0.5, 2.0, 7.5}, {0.25, 0.5, 0.25}),
      Potential::pareto(0.5, 1.0),
      Potential::exponential(1.75),
  };
  for (const auto& mu : cases) {
    const Potential back = Potential::parse(kv_of(mu.describe()));
    CHECK(back.describe() == mu.describe());
  }
  // translog parses from prefixed base keys
  const Potential tl = Potential::parse({{"family", "translog"},
                                         {"beta", "0.5"},
                                         {"base.family", "pareto"},
                                         {"base.alpha", "0.5"},
                                         {"base.zmin", "1"}});
  const Potential want =
      Potential::transformed_log(Potential::pareto(0.5, 1.0), 0.5);
  CHECK(tl.describe() == want.describe());
  CHECK_THROWS_AS(Potential::parse({{"family", "nonesuch"}}), std::invalid_argument);
}
