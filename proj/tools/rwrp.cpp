// Experiment runner: wires the library modules to sectioned key=value
// configs and emits CSV + JSON-lines artifacts under --out.
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwrp/acceptance.hpp"
#include "rwrp/config.hpp"
#include "rwrp/csvout.hpp"
#include "rwrp/environment.hpp"
#include "rwrp/escape.hpp"
#include "rwrp/estimator.hpp"
#include "rwrp/fitting.hpp"
#include "rwrp/green.hpp"
#include "rwrp/lattice.hpp"
#include "rwrp/numeric.hpp"
#include "rwrp/oracle.hpp"
#include "rwrp/potential.hpp"
#include "rwrp/quenched.hpp"
#include "rwrp/rng.hpp"
#include "rwrp/splitting.hpp"
#include "rwrp/theory.hpp"
#include "rwrp/version.hpp"

namespace {

using nlohmann::json;

struct Run {
  rwrp::Config cfg;
  std::uint64_t seed = 1;
  int workers = 1;
  std::filesystem::path out_dir;
  rwrp::RunMeta meta;

  std::ofstream csv_file(const std::string& name) const {
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + name);
    return f;
  }

  void log_record(json j) const {
    std::filesystem::create_directories(out_dir);
    j["config_hash"] = meta.config_hash;
    j["seed"] = seed;
    j["versions"] = meta.versions;
    std::ofstream f(out_dir / "run.jsonl", std::ios::app | std::ios::binary);
    f << j.dump() << '\n';
  }
};

Run make_run(const std::string& config_path, std::optional<std::uint64_t> seed,
             std::optional<int> workers, const std::string& out_dir) {
  Run run;
  if (!config_path.empty()) run.cfg = rwrp::Config::load(config_path);
  run.seed = seed ? *seed : run.cfg.get_u64("run.seed", 1);
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  run.workers = workers ? *workers
                        : static_cast<int>(run.cfg.get_int(
                              "run.workers", hw > 0 ? hw : 1));
  if (run.workers < 1) run.workers = 1;
  run.out_dir = out_dir.empty() ? run.cfg.get("run.out", "out") : out_dir;
  run.meta = {run.cfg.hash_hex(), run.seed, rwrp::kModuleVersions};
  return run;
}

rwrp::env::Potential potential_from(const Run& run) {
  auto kv = run.cfg.section("potential");
  if (kv.empty()) kv = {{"family", "pareto"}, {"alpha", "0.5"}, {"zmin", "1"}};
  return rwrp::env::Potential::parse(kv);
}

std::vector<double> beta_list(const Run& run, const std::string& key,
                              const std::vector<double>& fallback) {
  const std::vector<double> betas = run.cfg.get_list(key, fallback);
  if (betas.empty())
    throw std::invalid_argument("empty beta list under '" + key + "'");
  for (const double b : betas)
    if (!(b >= 0.0))
      throw std::invalid_argument("beta must be nonnegative in '" + key + "'");
  return betas;
}

double escape_prob(const Run& run, int d) {
  const double tol = run.cfg.get_double("qd.tol", 1e-6);
  return rwrp::lattice::escape_probability_quadrature(d, tol, run.workers).q;
}

const char* case_name(rwrp::theory::CaseLabel label) {
  switch (label) {
    case rwrp::theory::CaseLabel::important_dominated: return "important";
    case rwrp::theory::CaseLabel::balanced: return "balanced";
    case rwrp::theory::CaseLabel::intermediate_dominated: return "intermediate";
  }
  return "?";
}

int cmd_theory(const Run& run) {
  using namespace rwrp;
  const env::Potential mu = potential_from(run);
  const int d = static_cast<int>(run.cfg.get_int("run.d", 3));
  const double qd = escape_prob(run, d);
  const double eps = run.cfg.get_double("theory.eps", 0.1);
  const double delta = run.cfg.get_double("theory.delta", 0.05);
  const double a =
      run.cfg.get_double("theory.a", std::pow(eps, 8));
  const std::vector<double> betas =
      beta_list(run, "theory.beta", {0.05, 0.1, 0.2, 0.5});

  {
    std::ofstream f = run.csv_file("site_cost.csv");
    CsvWriter csv(f, {"z", "f"}, run.meta);
    const int m = 128;
    for (int i = 0; i < m; ++i) {
      const double z = std::exp(std::log(1e-6) +
                                (std::log(1e3) - std::log(1e-6)) * i / (m - 1));
      csv.row({fmt_double(z), fmt_double(theory::site_cost(z, qd))});
    }
  }

  std::ofstream f = run.csv_file("theory.csv");
  CsvWriter csv(f,
                {"beta", "frak_I", "I_beta", "I_prime", "I_tilde", "case",
                 "m_beta", "L", "L_hat", "r_prime", "r", "R", "eta", "v_star",
                 "cost", "mobility"},
                run.meta);
  std::cout << "potential: " << mu.describe() << "\n"
            << "d=" << d << " qd=" << fmt_double(qd) << " eps=" << eps
            << " a=" << fmt_double(a) << " delta=" << delta << "\n";
  for (const double beta : betas) {
    const double frak = theory::rate_integral(beta, mu, qd);
    const auto tl = theory::truncation_level(beta, mu, eps, qd);
    const auto split = theory::riemann_split(beta, mu, eps, a, qd);
    const auto rho = theory::rho_grid_split(beta, mu, eps, a, tl.m_beta, qd);
    const auto cs = theory::classify_case(beta, mu, eps, a, tl.m_beta, qd);
    const double mob = theory::mobility_edge_integral(beta, mu, qd);
    const auto speed = theory::optimal_speed(frak, d);
    theory::ScaleSet sc;
    if (!split.degenerate)
      sc = theory::scales(split, delta, d, tl.m_beta, cs.label);
    csv.row({fmt_double(beta), fmt_double(frak), fmt_double(split.integral),
             fmt_double(rho.integral),
             fmt_double(split.integral + rho.integral), case_name(cs.label),
             fmt_double(tl.m_beta), fmt_double(sc.L), fmt_double(sc.L_hat),
             fmt_double(sc.r_prime), fmt_double(sc.r), fmt_double(sc.R),
             fmt_double(sc.eta), fmt_double(speed.v_star),
             fmt_double(speed.cost), fmt_double(mob)});
    std::cout << "beta=" << beta << " frak_I=" << fmt_double(frak)
              << " I=" << fmt_double(split.integral)
              << " I'=" << fmt_double(rho.integral) << " case "
              << case_name(cs.label) << " cost=" << fmt_double(speed.cost)
              << " mobility=" << fmt_double(mob);
    if (!tl.warning.empty()) std::cout << "  (" << tl.warning << ")";
    std::cout << "\n";
  }
  run.log_record({{"command", "theory"}, {"potential", mu.describe()},
                  {"betas", betas}, {"qd", qd}});
  return 0;
}

int cmd_qd(const Run& run) {
  using namespace rwrp;
  const std::vector<int> dims = run.cfg.get_int_list("qd.d", {3, 4});
  const double tol = run.cfg.get_double("qd.tol", 1e-6);
  const std::int64_t walks = run.cfg.get_int("qd.walks", 1'000'000);
  std::ofstream f = run.csv_file("qd.csv");
  CsvWriter csv(f,
                {"d", "q_quad", "achieved_tol", "q_mc", "mc_sigma", "abs_dev",
                 "walks", "censored"},
                run.meta);
  for (const int d : dims) {
    const auto quad = lattice::escape_probability_quadrature(d, tol, run.workers);
    const auto mc = lattice::escape_probability_mc(
        d, walks, derive_seed(run.seed, 40 + static_cast<std::uint64_t>(d)),
        0.0, run.workers);
    const double dev = std::abs(quad.q - mc.q);
    csv.row({fmt_int(d), fmt_double(quad.q), fmt_double(quad.achieved_tol),
             fmt_double(mc.q), fmt_double(mc.sigma), fmt_double(dev),
             fmt_int(mc.walks), fmt_int(mc.censored)});
    std::cout << "d=" << d << " q_quad=" << fmt_double(quad.q)
              << " q_mc=" << fmt_double(mc.q) << " |dev|=" << fmt_double(dev)
              << " (3 sigma = " << fmt_double(3 * mc.sigma) << ")\n";
  }
  run.log_record({{"command", "qd"}, {"dims", dims}, {"walks", walks}});
  return 0;
}

int cmd_mc(const Run& run) {
  using namespace rwrp;
  const env::Potential mu = potential_from(run);
  const int d = static_cast<int>(run.cfg.get_int("run.d", 3));
  const double qd = escape_prob(run, d);
  const std::vector<double> betas = beta_list(run, "mc.beta", {0.05});
  const std::vector<int> ns =
      run.cfg.get_int_list("mc.n", {8, 12, 16, 20, 24, 28, 32, 36, 40});
  const std::int64_t samples = run.cfg.get_int("mc.samples", 100000);
  const double eps = run.cfg.get_double("mc.eps", 0.25);
  const bool tilted = run.cfg.get_bool("mc.tilt", true);
  const lattice::Direction ell = lattice::Direction::axis_dir(d, 0);

  std::ofstream f = run.csv_file("decay.csv");
  CsvWriter csv(f,
                {"beta", "n", "log_e_hat", "e_hat", "sigma_log", "ci_log_half",
                 "censored", "samples", "lambda"},
                run.meta);
  std::ofstream fr = run.csv_file("rates.csv");
  CsvWriter rates(fr,
                  {"beta", "alpha_hat", "alpha_sigma", "floor",
                   "finite_mean_rate", "censor_frac", "window_sensitivity",
                   "monotone_ok"},
                  run.meta);

  for (const double beta : betas) {
    const double frak = theory::rate_integral(beta, mu, qd);
    const fkmc::TiltPolicy tilt =
        tilted ? fkmc::make_tilt(frak, d) : fkmc::TiltPolicy{};
    std::vector<fkmc::RatePoint> pts;
    std::int64_t censored = 0, total = 0;
    for (const int n : ns) {
      fkmc::EstimateOptions opt;
      opt.samples = samples;
      opt.workers = run.workers;
      opt.step_cap = run.cfg.get_int("mc.cap", 0);
      opt.seed = derive_seed(run.seed,
                             static_cast<std::uint64_t>(n) * 1000 +
                                 static_cast<std::uint64_t>(beta * 1e6));
      const auto est = fkmc::estimate_passage_weight(
          beta, static_cast<double>(n), mu, ell, opt, tilt);
      csv.row({fmt_double(beta), fmt_int(n), fmt_double(est.log_mean),
               fmt_double(std::exp(est.log_mean)), fmt_double(est.sigma_log),
               fmt_double(est.ci_log_half), fmt_int(est.censored),
               fmt_int(est.samples), fmt_double(est.lambda)});
      pts.push_back({static_cast<double>(n), est.log_mean,
                     std::max(est.sigma_log, 1e-8)});
      censored += est.censored;
      total += est.samples;
    }
    const auto fit = fkmc::fit_rate(pts);
    const double floor = (1.0 - eps) * std::sqrt(2.0 * d * frak);
    const auto mean = mu.mean();
    const double kmz = mean ? std::sqrt(2.0 * d * beta * *mean) : 0.0;
    const double censor_frac =
        static_cast<double>(censored) / static_cast<double>(total);
    rates.row({fmt_double(beta), fmt_double(fit.rate),
               fmt_double(fit.rate_sigma), fmt_double(floor), fmt_double(kmz),
               fmt_double(censor_frac), fmt_double(fit.window_sensitivity),
               fit.monotone_ok ? "1" : "0"});
    std::cout << "beta=" << beta << " alpha_hat=" << fmt_double(fit.rate)
              << " (se " << fmt_double(fit.rate_sigma) << ")  floor (1-eps)sqrt(2d frak_I)="
              << fmt_double(floor)
              << (fit.rate >= floor ? "  [above]" : "  [BELOW]") << "\n";
    if (mean)
      std::cout << "        finite-mean comparison sqrt(2d beta E[V])="
                << fmt_double(kmz) << " ratio=" << fmt_double(fit.rate / kmz)
                << "\n";
    run.log_record({{"command", "mc"}, {"beta", beta},
                    {"alpha_hat", fit.rate}, {"floor", floor},
                    {"censor_frac", censor_frac}});
  }
  return 0;
}

int cmd_green(const Run& run) {
  using namespace rwrp;
  const env::Potential mu = potential_from(run);
  const int d = static_cast<int>(run.cfg.get_int("run.d", 3));
  const double qd = escape_prob(run, d);
  const std::vector<double> betas = beta_list(run, "green.beta", {0.05});
  const std::vector<int> ns =
      run.cfg.get_int_list("green.n", {8, 10, 12, 14, 16, 18, 20, 22, 24});
  const std::int64_t envs = run.cfg.get_int("green.environments", 160);
  const int margin = static_cast<int>(run.cfg.get_int("green.margin", 10));
  const double tol = run.cfg.get_double("green.tol", 1e-14);

  std::ofstream f = run.csv_file("green_decay.csv");
  CsvWriter csv(f, {"beta", "n", "log_mean_g", "sigma_log"}, run.meta);
  std::ofstream fr = run.csv_file("green_rates.csv");
  CsvWriter rates(fr,
                  {"beta", "rate", "rate_sigma", "floor", "margin_shift",
                   "fk_max_dev", "fk_tail_bound"},
                  run.meta);
  for (const double beta : betas) {
    const auto res = green::averaged_green_decay(
        mu, beta, d, 0, ns, envs, margin,
        derive_seed(run.seed, 60 + static_cast<std::uint64_t>(beta * 1e6)),
        run.workers, tol);
    for (const auto& p : res.points)
      csv.row({fmt_double(beta), fmt_double(p.n), fmt_double(p.log_value),
               fmt_double(p.sigma_log)});
    const double frak_bar = theory::mobility_edge_integral(beta, mu, qd);
    const double eps = run.cfg.get_double("green.eps", 0.25);
    const double floor = (1.0 - eps) * std::sqrt(2.0 * d * frak_bar);

    lattice::Box box;
    box.dim = d;
    for (int ax = 0; ax < d; ++ax) {
      box.lo[ax] = 0;
      box.hi[ax] = 2;
    }
    const env::Field field =
        env::sample_field(mu, box, derive_seed(run.seed, 61), run.workers);
    const auto fk = green::fk_equivalence_check(field, beta);
    rates.row({fmt_double(beta), fmt_double(res.fit.rate),
               fmt_double(res.fit.rate_sigma), fmt_double(floor),
               fmt_double(res.margin_rate_shift), fmt_double(fk.max_abs_dev),
               fmt_double(fk.tail_bound)});
    std::cout << "beta=" << beta << " green rate=" << fmt_double(res.fit.rate)
              << " (se " << fmt_double(res.fit.rate_sigma)
              << ")  floor=" << fmt_double(floor)
              << (res.fit.rate >= floor ? "  [above]" : "  [BELOW]")
              << "\n  margin shift=" << fmt_double(res.margin_rate_shift)
              << "  fk series max dev=" << fmt_double(fk.max_abs_dev) << "\n";
    run.log_record({{"command", "green"}, {"beta", beta},
                    {"rate", res.fit.rate}, {"floor", floor}});
  }
  return 0;
}

int cmd_oracle(const Run& run) {
  using namespace rwrp;
  const double beta = run.cfg.get_double("oracle.beta", 0.5);
  const int level = static_cast<int>(run.cfg.get_int("oracle.n", 2));
  const int max_len = static_cast<int>(run.cfg.get_int("oracle.max_len", 10));
  env::Potential mu = env::Potential::atoms({1.0, 4.0}, {0.5, 0.5});
  if (!run.cfg.section("potential").empty()) mu = potential_from(run);

  std::ofstream f = run.csv_file("oracle.csv");
  CsvWriter csv(f, {"quantity", "value"}, run.meta);
  const auto br = oracle::exact_passage_weight(beta, level, mu, 3, max_len);
  csv.row({"bracket_lower", fmt_double(br.lower)});
  csv.row({"bracket_upper", fmt_double(br.upper)});
  csv.row({"crossed_prob", fmt_double(br.crossed_prob)});
  csv.row({"nodes", fmt_u64(br.nodes)});
  for (int K : {2, 8, 12})
    for (int j : {1, 2, 4})
      csv.row({"surgeries_K" + std::to_string(K) + "_j" + std::to_string(j),
               fmt_u64(oracle::enumerate_surgeries(K, j))});
  csv.row({"binom_tail_n20_p0.3_k10",
           fmt_double(oracle::exact_binomial_tail(20, 0.3, 10,
                                                  theory::TailSide::upper))});
  std::cout << "exact bracket for e(beta=" << beta << ", n=" << level
            << "): [" << fmt_double(br.lower) << ", " << fmt_double(br.upper)
            << "] with " << br.nodes << " nodes\n";
  run.log_record({{"command", "oracle"}, {"beta", beta}, {"n", level},
                  {"lower", br.lower}, {"upper", br.upper}});
  return 0;
}

int cmd_selftest(const Run& run) {
  const auto summary = rwrp::run_acceptance(run.seed, run.workers, std::cout);
  run.log_record({{"command", "selftest"}, {"total", summary.total},
                  {"failed", summary.failed}});
  return summary.failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-walk-in-random-potential experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  app.add_option("--config", config_path, "config file (sectioned key=value)");
  app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker thread count");

  auto* theory = app.add_subcommand("theory", "rate integrals, splits, scales");
  auto* qd = app.add_subcommand("qd", "escape probability by two methods");
  auto* mc = app.add_subcommand("mc", "annealed decay Monte Carlo sweeps");
  auto* green = app.add_subcommand("green", "averaged Green decay and series check");
  auto* oracle = app.add_subcommand("oracle", "exact small-scale enumerations");
  auto* selftest = app.add_subcommand("selftest", "oracle-backed acceptance battery");
  for (auto* sub : {theory, qd, mc, green, oracle, selftest})
    sub->fallthrough();  // global flags may follow the subcommand name

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    const Run run = make_run(config_path, seed, workers, out_dir);
    if (theory->parsed()) return cmd_theory(run);
    if (qd->parsed()) return cmd_qd(run);
    if (mc->parsed()) return cmd_mc(run);
    if (green->parsed()) return cmd_green(run);
    if (oracle->parsed()) return cmd_oracle(run);
    if (selftest->parsed()) return cmd_selftest(run);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const rwrp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
