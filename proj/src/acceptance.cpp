#include "rwrp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rwrp/environment.hpp"
#include "rwrp/escape.hpp"
#include "rwrp/estimator.hpp"
#include "rwrp/fitting.hpp"
#include "rwrp/green.hpp"
#include "rwrp/hitting.hpp"
#include "rwrp/lattice.hpp"
#include "rwrp/numeric.hpp"
#include "rwrp/oracle.hpp"
#include "rwrp/potential.hpp"
#include "rwrp/quenched.hpp"
#include "rwrp/rng.hpp"
#include "rwrp/splitting.hpp"
#include "rwrp/theory.hpp"

namespace rwrp {

namespace {

// Escape probability of the simple walk on Z^3, pinned from the closed
// product-of-Gamma form of the d=3 lattice Green function at the origin;
// independent of every numeric path exercised below.
constexpr double kQ3 = 0.659462670449000857;

struct Ctx {
  std::uint64_t seed = 1;
  int workers = 1;
};

std::string num(double v, int prec = 6) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << v;
  return ss.str();
}

// --- 1: escape probability, quadrature vs pinned oracle vs Monte Carlo ---
bool c01_escape(const Ctx& ctx, std::ostream& out) {
  const auto quad = lattice::escape_probability_quadrature(3, 1e-6, ctx.workers);
  const auto mc = lattice::escape_probability_mc(
      3, 10'000'000, derive_seed(ctx.seed, 101), 0.0, ctx.workers);
  const double dev_oracle = std::abs(quad.q - kQ3);
  const double dev_round = std::abs(quad.q - 0.6595);
  const double dev_mc = std::abs(quad.q - mc.q);
  out << "q=" << num(quad.q, 9) << " dq_oracle=" << num(dev_oracle, 3)
      << " q_mc=" << num(mc.q, 6) << " dq_mc=" << num(dev_mc, 3)
      << " mc_sigma=" << num(mc.sigma, 3);
  return dev_oracle <= 1e-3 && dev_round <= 1e-3 && dev_mc <= 3e-3;
}

// --- 2: site-cost shape, bounds and small-z expansion ---
bool c02_site_cost(const Ctx&, std::ostream& out) {
  const double qd = kQ3;
  const int m = 1000;
  const double z_lo = 1e-8, z_hi = 50.0;
  std::vector<double> z(m), f(m);
  for (int i = 0; i < m; ++i) {
    z[i] = std::exp(std::log(z_lo) +
                    (std::log(z_hi) - std::log(z_lo)) * i / (m - 1));
    f[i] = theory::site_cost(z[i], qd);
  }
  bool monotone = true, bounded = true, concave = true, small_z = true,
       forms = true, inverse = true;
  for (int i = 0; i + 1 < m; ++i)
    if (f[i] > f[i + 1] + 1e-15) monotone = false;
  for (int i = 0; i < m; ++i) {
    if (f[i] > std::min(z[i], qd) + 1e-15) bounded = false;
    if (std::abs(theory::site_cost_alt(z[i], qd) - f[i]) > 1e-12) forms = false;
    if (z[i] <= 1e-3 && std::abs(f[i] / z[i] - 1.0) > z[i] / qd)
      small_z = false;
  }
  // nonuniform grid: concavity = nonincreasing secant slopes
  double prev_slope = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < m; ++i) {
    const double s = (f[i + 1] - f[i]) / (z[i + 1] - z[i]);
    if (s > prev_slope + 1e-12) concave = false;
    prev_slope = s;
  }
  for (double zz : {1e-6, 1e-3, 0.1, 1.0, 5.0, 20.0}) {
    const double w = theory::site_cost(zz, qd);
    const double back = theory::site_cost_inverse(w, qd);
    if (std::abs(back - zz) > 1e-8 * std::max(1.0, zz)) inverse = false;
  }
  out << "monotone=" << monotone << " bounded=" << bounded
      << " concave=" << concave << " small_z=" << small_z
      << " forms_agree=" << forms << " inverse=" << inverse;
  return monotone && bounded && concave && small_z && forms && inverse;
}

// --- 3: rate function closed form vs sup form; tail domination ---
bool c03_rate_function(const Ctx&, std::ostream& out) {
  double max_dev = 0.0;
  for (int pi = 1; pi <= 20; ++pi) {
    const double p = pi / 21.0;
    for (int j = 1; j <= 20; ++j) {
      const double eta = -p + j / 21.0;
      const double a = theory::bernoulli_rate(p, eta);
      const double b = theory::bernoulli_rate_sup(p, eta);
      max_dev = std::max(max_dev, std::abs(a - b));
    }
  }
  bool dominated = true;
  for (int n = 1; n <= 30; ++n) {
    for (const double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (int k = 0; k <= n; ++k) {
        const double eta_up = static_cast<double>(k) / n - p;
        if (eta_up >= 0.0) {
          const double exact =
              oracle::exact_binomial_tail(n, p, k, theory::TailSide::upper);
          const double bound =
              theory::chernoff_bound(n, p, eta_up, theory::TailSide::upper);
          if (exact > bound * (1.0 + 1e-12)) dominated = false;
        }
        const double eta_dn = p - static_cast<double>(k) / n;
        if (eta_dn >= 0.0) {
          const double exact =
              oracle::exact_binomial_tail(n, p, k, theory::TailSide::lower);
          const double bound =
              theory::chernoff_bound(n, p, eta_dn, theory::TailSide::lower);
          if (exact > bound * (1.0 + 1e-12)) dominated = false;
        }
      }
    }
  }
  bool quadratic = true;
  for (int pi = 1; pi <= 20; ++pi) {
    const double p = pi / 21.0;
    for (int j = 1; j <= 20; ++j) {
      const double eta = p * j / 20.0;
      if (theory::bernoulli_rate(p, -eta) + 1e-12 < eta * eta / (2.0 * p))
        quadratic = false;
    }
  }
  out << "max|closed-sup|=" << num(max_dev, 3) << " tails_dominated="
      << dominated << " quadratic_floor=" << quadratic;
  return max_dev <= 1e-9 && dominated && quadratic;
}

// --- 4: surgery chain counting ---
bool c04_surgery(const Ctx&, std::ostream& out) {
  bool exact_ok = true, bound_ok = true, log_ok = true;
  for (int K = 0; K <= 12; ++K) {
    for (int j = 0; j <= 4; ++j) {
      const std::uint64_t cnt = oracle::enumerate_surgeries(K, j);
      if (cnt != oracle::binomial_coeff(K + 2 * j, 2 * j)) exact_ok = false;
      const double lg = std::log(static_cast<double>(cnt));
      if (std::abs(theory::surgery_log_binomial(K, j) - lg) > 1e-9)
        log_ok = false;
      if (j >= 1 && K >= 1) {
        // count with c = K, c' = j per unit length
        const double bound = theory::surgery_log_count_bound(K, j, 1.0);
        if (lg > bound + 1e-9) bound_ok = false;
      }
    }
  }
  out << "enumeration=closed_form:" << exact_ok << " log_form=" << log_ok
      << " within_exp_bound=" << bound_ok;
  return exact_ok && bound_ok && log_ok;
}

env::Potential random_atoms(SplitMix64& rng) {
  const int k = 3 + static_cast<int>(rng.next_below(6));
  std::vector<double> z(k), m(k);
  double tot = 0.0;
  for (int i = 0; i < k; ++i) {
    z[i] = std::exp(std::log(1e-3) + rng.next_unit() * std::log(1e6));
    m[i] = 0.05 + rng.next_unit();
    tot += m[i];
  }
  for (double& x : m) x /= tot;
  return env::Potential::atoms(z, m);
}

// --- 5: splitting lower bounds ---
bool c05_splitting(const Ctx& ctx, std::ostream& out) {
  const double qd = kQ3;
  const double eps_grid[] = {0.05, 0.1, 0.2};
  SplitMix64 rng(derive_seed(ctx.seed, 501));
  bool retained_ok = true;
  int tested = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 24; ++rep) {
    env::Potential mu =
        rep < 16  ? random_atoms(rng)
        : rep < 20 ? env::Potential::pareto(0.3 + 0.4 * rng.next_unit(),
                                            0.5 + 1.5 * rng.next_unit())
                   : env::Potential::exponential(0.5 + 1.5 * rng.next_unit());
    const double beta = 0.25 + 1.75 * rng.next_unit();
    for (const double eps : eps_grid) {
      const double a = 0.5;
      const auto split = theory::riemann_split(beta, mu, eps, a, qd);
      const double important = theory::rate_integral_above(beta, mu, qd, a);
      const double floor = (1.0 - eps) * (1.0 - eps) * important;
      if (split.integral < floor - 1e-12) retained_ok = false;
      if (important > 0.0)
        worst_margin = std::min(worst_margin, split.integral / important);
    }
    ++tested;
  }

  // balanced two-range instances: one light important atom, one heavier
  // intermediate atom, remainder at zero so nothing is truncated away
  bool balanced_ok = true, case_ok = true;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 20; ++rep) {
    const double a = 0.5, beta = 1.0;
    const double s =
        std::exp(std::log(0.02) + rng.next_unit() * std::log(0.15 / 0.02));
    const double r = 1.5 + 2.5 * rng.next_unit();
    const double base = 1e-4 + 4e-4 * rng.next_unit();
    const double z_imp = 0.6 + 2.4 * rng.next_unit();
    const double m1 = base / theory::site_cost(z_imp, qd);
    const double m2 = r * base / theory::site_cost(s, qd);
    const env::Potential mu =
        env::Potential::atoms({0.0, s, z_imp}, {1.0 - m1 - m2, m2, m1});
    const double m_beta = s / 2.0;
    for (const double eps : eps_grid) {
      const auto rs = theory::riemann_split(beta, mu, eps, a, qd);
      const auto gs = theory::rho_grid_split(beta, mu, eps, a, m_beta, qd);
      const auto cs = theory::classify_case(beta, mu, eps, a, m_beta, qd);
      if (cs.label != theory::CaseLabel::balanced) case_ok = false;
      const double frak = theory::rate_integral(beta, mu, qd);
      const double combined = rs.integral + gs.integral;
      if (combined < (1.0 - 5.0 * eps) * frak - 1e-15) balanced_ok = false;
      if (frak > 0.0) worst_ratio = std::min(worst_ratio, combined / frak);
    }
  }
  out << "distributions=" << tested << " retained_floor=" << retained_ok
      << " min_I/calI=" << num(worst_margin, 4) << " balanced_floor="
      << balanced_ok << " min_comb/frak=" << num(worst_ratio, 4)
      << " case2=" << case_ok;
  return retained_ok && balanced_ok && case_ok && tested >= 20;
}

// --- 6: ball hitting probability vs potential-theory formula ---
bool c06_hitting(const Ctx& ctx, std::ostream& out) {
  const double radius = 40.0;
  const lattice::Site targets[] = {
      {{8, 0, 0}},  {{12, 0, 0}},   {{16, 0, 0}},
      {{20, 0, 0}}, {{7, 7, 7}},    {{10, 10, 10}},
  };
  double worst = 0.0;
  for (const auto& y : targets) {
    const double exact =
        lattice::hitting_prob_exact(3, y, radius, 1e-10, nullptr, ctx.workers);
    const double ynorm =
        std::sqrt(static_cast<double>(dist2(y, lattice::Site::origin(), 3)));
    const double pred = lattice::hitting_prob_formula(3, ynorm, radius, kQ3);
    worst = std::max(worst, std::abs(exact - pred) / pred);
  }
  out << "max_rel_dev=" << num(worst, 4) << " over " << std::size(targets)
      << " targets";
  return worst <= 0.15;
}

// --- 7: exit geometry ---
bool c07_exit_geometry(const Ctx& ctx, std::ostream& out) {
  const auto ps = lattice::exit_projection_stats(
      3, 50.0, lattice::Direction::axis_dir(3, 0), 100000,
      derive_seed(ctx.seed, 701), ctx.workers);
  const double third_dev = std::abs(ps.mean_proj2_over_r2 - 1.0 / 3.0) /
                           (1.0 / 3.0);
  const auto ss = lattice::coarse_substep_stats(
      3, 60.0, 12.0, 20000, derive_seed(ctx.seed, 702), ctx.workers);
  const double expected = (60.0 / 12.0) * (60.0 / 12.0);
  const bool substeps_ok =
      ss.mean > 0.9 * expected && ss.mean < 1.1 * expected;
  out << "proj2/R2=" << num(ps.mean_proj2_over_r2, 5) << " rel_dev="
      << num(third_dev, 3) << " substeps=" << num(ss.mean, 4) << " (se "
      << num(ss.sigma, 2) << ", band " << num(0.9 * expected, 4) << ".."
      << num(1.1 * expected, 4) << ")";
  return third_dev <= 0.05 && substeps_ok;
}

// --- 8: log-transform integral identity; Green solver vs path series ---
bool c08_identity(const Ctx& ctx, std::ostream& out) {
  const double qd = kQ3;
  const env::Potential atoms = env::Potential::atoms({1.0, 4.0}, {0.5, 0.5});
  const double lhs_a = theory::mobility_edge_integral(0.7, atoms, qd);
  const double rhs_a = theory::rate_integral(
      0.7, env::Potential::transformed_log(atoms, 0.7), qd);
  const double dev_atoms = std::abs(lhs_a - rhs_a);

  const env::Potential point = env::Potential::point_mass(2.0);
  const double closed = 1.0 / (1.0 / qd + 1.0 / (0.7 * 2.0));
  const double dev_point =
      std::abs(theory::mobility_edge_integral(0.7, point, qd) - closed);

  const env::Potential pareto = env::Potential::pareto(0.5, 1.0);
  const double lhs_p = theory::mobility_edge_integral(0.05, pareto, qd);
  const double rhs_p = theory::rate_integral(
      0.05, env::Potential::transformed_log(pareto, 0.05), qd);
  const double dev_pareto = std::abs(lhs_p - rhs_p) / lhs_p;

  double dev_fk = 0.0;
  lattice::Box box;
  box.dim = 3;
  box.lo = {0, 0, 0};
  box.hi = {2, 2, 2};
  const env::Potential fields[] = {atoms, pareto,
                                   env::Potential::exponential(1.0)};
  int idx = 0;
  for (const auto& mu : fields) {
    const env::Field field =
        env::sample_field(mu, box, derive_seed(ctx.seed, 801 + idx++));
    const auto fk = green::fk_equivalence_check(field, 0.5);
    dev_fk = std::max(dev_fk, fk.max_abs_dev);
  }
  out << "atoms_dev=" << num(dev_atoms, 3) << " point_dev=" << num(dev_point, 3)
      << " pareto_rel_dev=" << num(dev_pareto, 3) << " fk_dev=" << num(dev_fk, 3);
  return dev_atoms <= 1e-8 && dev_point <= 1e-10 && dev_pareto <= 1e-6 &&
         dev_fk <= 1e-6;
}

// --- 9: estimators against the exact enumeration bracket ---
bool c09_bracket(const Ctx& ctx, std::ostream& out) {
  const env::Potential mu = env::Potential::atoms({1.0, 4.0}, {0.5, 0.5});
  const double beta = 0.5;
  const auto br = oracle::exact_passage_weight(beta, 2, mu, 3, 10);
  const double lo = std::log(br.lower), hi = std::log(br.upper);

  const lattice::Direction ell = lattice::Direction::axis_dir(3, 0);
  const double frak = theory::rate_integral(beta, mu, kQ3);
  fkmc::EstimateOptions opt;
  opt.samples = 200000;
  opt.workers = ctx.workers;

  opt.seed = derive_seed(ctx.seed, 901);
  const auto tilted =
      fkmc::estimate_passage_weight(beta, 2.0, mu, ell, opt, fkmc::make_tilt(frak, 3));
  opt.seed = derive_seed(ctx.seed, 902);
  const auto plain = fkmc::estimate_passage_weight(beta, 2.0, mu, ell, opt);

  const auto inside = [&](const fkmc::Estimate& e) {
    return e.log_mean + 3.0 * e.sigma_log >= lo &&
           e.log_mean - 3.0 * e.sigma_log <= hi;
  };
  out << "bracket=[" << num(br.lower, 7) << "," << num(br.upper, 7)
      << "] tilted=" << num(std::exp(tilted.log_mean), 7) << "(se "
      << num(tilted.sigma_log, 2) << ") untilted="
      << num(std::exp(plain.log_mean), 7) << "(se " << num(plain.sigma_log, 2)
      << ")";
  return inside(tilted) && inside(plain);
}

struct SweepResult {
  fkmc::RateFit fit;
  double censor_frac = 0.0;
};

SweepResult rate_sweep(const Ctx& ctx, const env::Potential& mu, double beta,
                       const std::vector<int>& ns, std::uint64_t salt,
                       std::int64_t samples) {
  const lattice::Direction ell = lattice::Direction::axis_dir(3, 0);
  const double frak = theory::rate_integral(beta, mu, kQ3);
  const fkmc::TiltPolicy tilt = fkmc::make_tilt(frak, 3);
  std::vector<fkmc::RatePoint> pts;
  std::int64_t censored = 0, total = 0;
  for (const int n : ns) {
    fkmc::EstimateOptions opt;
    opt.samples = samples;
    opt.workers = ctx.workers;
    opt.seed = derive_seed(ctx.seed, salt + static_cast<std::uint64_t>(n));
    const auto est = fkmc::estimate_passage_weight(
        beta, static_cast<double>(n), mu, ell, opt, tilt);
    pts.push_back({static_cast<double>(n), est.log_mean,
                   std::max(est.sigma_log, 1e-8)});
    censored += est.censored;
    total += est.samples;
  }
  SweepResult out;
  out.fit = fkmc::fit_rate(pts);
  out.censor_frac = static_cast<double>(censored) / static_cast<double>(total);
  return out;
}

// --- 10: heavy-tail decay rate against the conjectured floor ---
bool c10_heavy_tail(const Ctx& ctx, std::ostream& out) {
  const env::Potential mu = env::Potential::pareto(0.5, 1.0);
  const double beta = 0.05;
  const double frak = theory::rate_integral(beta, mu, kQ3);
  const double floor = 0.75 * std::sqrt(6.0 * frak);
  const std::vector<int> ns = {8, 12, 16, 20, 24, 28, 32, 36, 40};
  const SweepResult sw = rate_sweep(ctx, mu, beta, ns, 1000, 100000);
  out << "alpha_hat=" << num(sw.fit.rate, 5) << "(se "
      << num(sw.fit.rate_sigma, 2) << ") floor=" << num(floor, 6)
      << " censor=" << num(sw.censor_frac, 3)
      << " window_sens=" << num(sw.fit.window_sensitivity, 3);
  return sw.fit.rate >= floor && sw.censor_frac < 0.01 &&
         sw.fit.window_sensitivity < 0.10;
}

// --- 11: finite-mean rate ratio and its small-beta trend ---
bool c11_finite_mean(const Ctx& ctx, std::ostream& out) {
  const env::Potential mu = env::Potential::exponential(1.0);
  const std::vector<int> ns05 = {8, 12, 16, 20, 24, 28, 32, 36, 40};
  const std::vector<int> ns02 = {12, 18, 24, 30, 36, 42, 48, 54, 60};
  const SweepResult s05 = rate_sweep(ctx, mu, 0.05, ns05, 1100, 100000);
  const SweepResult s02 = rate_sweep(ctx, mu, 0.02, ns02, 1150, 100000);
  const double r05 = s05.fit.rate / std::sqrt(6.0 * 0.05);
  const double r02 = s02.fit.rate / std::sqrt(6.0 * 0.02);
  const bool in_band = r05 >= 0.7 && r05 <= 1.3 && r02 >= 0.7 && r02 <= 1.3;
  const bool toward_one = std::abs(1.0 - r02) < std::abs(1.0 - r05);
  out << "ratio(b=0.05)=" << num(r05, 4) << " ratio(b=0.02)=" << num(r02, 4)
      << " toward_one=" << toward_one;
  return in_band && toward_one;
}

// --- 12: averaged Green decay rate floor with margin control ---
bool c12_green_decay(const Ctx& ctx, std::ostream& out) {
  const env::Potential mu = env::Potential::pareto(0.5, 1.0);
  const double beta = 0.05;
  const double frak_bar = theory::mobility_edge_integral(beta, mu, kQ3);
  const double floor = 0.75 * std::sqrt(6.0 * frak_bar);
  const std::vector<int> distances = {8, 10, 12, 14, 16, 18, 20, 22, 24};
  const auto res = green::averaged_green_decay(
      mu, beta, 3, 0, distances, 160, 10, derive_seed(ctx.seed, 1201),
      ctx.workers, 1e-14);
  const double ci =
      fkmc::t_quantile_975(std::max(res.fit.window_points - 2, 1)) *
      res.fit.rate_sigma;
  out << "rate=" << num(res.fit.rate, 5) << "(se " << num(res.fit.rate_sigma, 2)
      << ") floor=" << num(floor, 6) << " margin_shift="
      << num(res.margin_rate_shift, 3) << " ci=" << num(ci, 3);
  return res.fit.rate >= floor && res.margin_rate_shift <= ci;
}

// --- 13: annealed mean dominates the geometric mean of quenched weights ---
bool c13_ordering(const Ctx& ctx, std::ostream& out) {
  struct Case {
    env::Potential mu;
    double beta;
    int n;
  };
  const Case cases[] = {
      {env::Potential::atoms({1.0, 4.0}, {0.5, 0.5}), 0.5, 4},
      {env::Potential::exponential(1.0), 0.05, 6},
      {env::Potential::pareto(0.5, 1.0), 0.05, 6},
  };
  bool ok = true;
  double min_gap = std::numeric_limits<double>::infinity();
  int idx = 0;
  for (const auto& c : cases) {
    fkmc::QuenchedOptions opt;
    opt.environments = 64;
    opt.seed = derive_seed(ctx.seed, 1301 + idx++);
    opt.workers = ctx.workers;
    const auto res = fkmc::estimate_quenched(c.beta, c.n, c.mu, 0, 3, opt);
    if (res.failed != 0) ok = false;
    const double geo = std::exp(res.mean_log);
    if (res.annealed_mean + 3.0 * res.annealed_sigma < geo) ok = false;
    min_gap = std::min(min_gap, res.annealed_mean - geo);
  }
  out << "cases=" << std::size(cases) << " min(mean-geomean)=" << num(min_gap, 3);
  return ok;
}

}  // namespace

AcceptanceSummary run_acceptance(std::uint64_t seed, int workers,
                                 std::ostream& out) {
  const Ctx ctx{seed, workers};
  struct Item {
    const char* name;
    double budget_s;
    std::function<bool(const Ctx&, std::ostream&)> fn;
  };
  const Item items[] = {
      {"escape probability: quadrature vs oracle vs MC", 120, c01_escape},
      {"site-cost shape, bounds, small-z expansion", 1, c02_site_cost},
      {"binomial rate function and tail domination", 10, c03_rate_function},
      {"surgery chain counting vs closed form and bound", 10, c04_surgery},
      {"strength-grid splitting lower bounds", 30, c05_splitting},
      {"ball hitting probability vs asymptotic formula", 120, c06_hitting},
      {"exit geometry: projection moment and sub-steps", 180, c07_exit_geometry},
      {"log-transform integral identity and walk series", 60, c08_identity},
      {"passage-weight estimators inside exact bracket", 120, c09_bracket},
      {"heavy-tail annealed decay rate above floor", 600, c10_heavy_tail},
      {"finite-mean decay ratio trend", 600, c11_finite_mean},
      {"averaged Green decay rate floor", 900, c12_green_decay},
      {"annealed mean vs quenched geometric mean", 300, c13_ordering},
  };

  AcceptanceSummary summary;
  int k = 0;
  for (const auto& item : items) {
    ++k;
    ++summary.total;
    std::ostringstream detail;
    bool pass = false;
    std::string error;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      pass = item.fn(ctx, detail);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (secs > item.budget_s) pass = false;
    if (!pass) ++summary.failed;
    out << "[" << (k < 10 ? " " : "") << k << "/13] "
        << (pass ? "PASS" : "FAIL") << " " << item.name << "  ";
    if (!error.empty())
      out << "error: " << error;
    else
      out << detail.str();
    out << "  [" << num(secs, 3) << "s/" << num(item.budget_s, 4) << "s]"
        << std::endl;
  }
  out << (summary.failed == 0 ? "acceptance: all criteria passed"
                              : "acceptance: FAILURES present")
      << " (" << (summary.total - summary.failed) << "/" << summary.total
      << ")" << std::endl;
  return summary;
}

}  // namespace rwrp
