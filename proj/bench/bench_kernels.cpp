// Times the OpenMP kernels against their serial reference twins on fixed
// workloads and reports the speedup. Usage: bench_kernels [workers]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include "rwrp/environment.hpp"
#include "rwrp/escape.hpp"
#include "rwrp/estimator.hpp"
#include "rwrp/green.hpp"
#include "rwrp/lattice.hpp"
#include "rwrp/potential.hpp"
#include "rwrp/rng.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double time_s(F&& f) {
  const auto t0 = clock_type::now();
  f();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial, double parallel, int workers) {
  std::printf("%-24s serial %8.3fs   %2d workers %8.3fs   speedup %.2fx\n",
              name, serial, workers, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rwrp;
  int workers = argc > 1 ? std::atoi(argv[1]) : 0;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 4;
  }
  std::printf("kernel benchmark, %d workers\n\n", workers);

  {
    const std::int64_t walks = 2'000'000;
    double qs = 0, qp = 0;
    const double ts = time_s([&] {
      qs = lattice::escape_probability_mc_reference(3, walks, 7, 0.0).q;
    });
    const double tp = time_s([&] {
      qp = lattice::escape_probability_mc(3, walks, 7, 0.0, workers).q;
    });
    report("escape_mc", ts, tp, workers);
    if (qs != qp) std::printf("  MISMATCH %.17g vs %.17g\n", qs, qp);
  }

  {
    const env::Potential mu = env::Potential::pareto(0.5, 1.0);
    lattice::Box box;
    box.dim = 3;
    for (int ax = 0; ax < 3; ++ax) {
      box.lo[ax] = -40;
      box.hi[ax] = 40;
    }
    double ss = 0, sp = 0;
    const double ts = time_s([&] {
      const auto f = env::sample_field_reference(mu, box, 11);
      for (double v : f.values) ss += v;
    });
    const double tp = time_s([&] {
      const auto f = env::sample_field(mu, box, 11, workers);
      for (double v : f.values) sp += v;
    });
    report("sample_field", ts, tp, workers);
    if (ss != sp) std::printf("  MISMATCH %.17g vs %.17g\n", ss, sp);
  }

  {
    const env::Potential mu = env::Potential::exponential(1.0);
    const auto ell = lattice::Direction::axis_dir(3, 0);
    fkmc::EstimateOptions opt;
    opt.samples = 40000;
    opt.seed = 13;
    fkmc::Estimate es, ep;
    const double ts = time_s([&] {
      es = fkmc::estimate_passage_weight_reference(0.1, 12.0, mu, ell, opt);
    });
    opt.workers = workers;
    const double tp = time_s([&] {
      ep = fkmc::estimate_passage_weight(0.1, 12.0, mu, ell, opt);
    });
    report("passage_estimator", ts, tp, workers);
    if (es.log_mean != ep.log_mean)
      std::printf("  MISMATCH %.17g vs %.17g\n", es.log_mean, ep.log_mean);
  }

  {
    const env::Potential mu = env::Potential::pareto(0.5, 1.0);
    const std::vector<int> dist = {6, 8, 10, 12};
    green::GreenDecayResult rs, rp;
    const double ts = time_s([&] {
      rs = green::averaged_green_decay_reference(mu, 0.05, 3, 0, dist, 24, 8, 17);
    });
    const double tp = time_s([&] {
      rp = green::averaged_green_decay(mu, 0.05, 3, 0, dist, 24, 8, 17, workers);
    });
    report("green_decay", ts, tp, workers);
    if (rs.fit.rate != rp.fit.rate)
      std::printf("  MISMATCH %.17g vs %.17g\n", rs.fit.rate, rp.fit.rate);
  }

  return 0;
}
