#include "rwrp/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwrp/numeric.hpp"

#ifdef RWRP_HAVE_OPENMP
#include <omp.h>
#endif

namespace rwrp::green {

namespace {

StencilSystem make_system(const env::Field& field, double beta, int workers) {
  const std::int64_t n = field.box.size();
  std::vector<double> diag(n);
  for (std::int64_t i = 0; i < n; ++i) diag[i] = 1.0 + beta * field.values[i];
  std::vector<std::uint8_t> unknown(n, 1);
  return StencilSystem(field.box, std::move(diag), std::move(unknown), {},
                       workers);
}

}  // namespace

std::vector<double> solve_green(const env::Field& field, double beta,
                                const lattice::Site& source, double tol,
                                CgStats* stats, int workers) {
  if (!(beta >= 0.0)) throw std::invalid_argument("green: beta must be >= 0");
  if (!field.box.contains(source))
    throw std::invalid_argument("green: source outside box");
  for (double v : field.values)
    if (!(v >= 0.0))
      throw std::invalid_argument("green: potential must be nonnegative");
  StencilSystem sys = make_system(field, beta, workers);
  std::vector<double> b(field.box.size(), 0.0);
  b[field.box.index(source)] = 1.0;
  std::vector<double> g;
  const CgStats st = pcg_jacobi(sys, b, g, tol);
  if (stats) *stats = st;
  if (!st.converged)
    throw NumericalError("green solve did not reach tolerance", st.residual);
  // positivity diagnostic: entries materially below zero mean the iterate is
  // junk even though the residual test passed
  for (double v : g)
    if (v < -10.0 * tol) throw NumericalError("green solve lost positivity", v);
  return g;
}

FkCheckResult fk_equivalence_check(const env::Field& field, double beta,
                                   int max_terms, double tol) {
  const lattice::Box& box = field.box;
  const std::int64_t n = box.size();
  if (n > 20000)
    throw std::invalid_argument("fk check: box too large for the dense series");

  std::vector<double> damp(n);
  for (std::int64_t i = 0; i < n; ++i)
    damp[i] = 1.0 / (1.0 + beta * field.values[i]);

  // one hop of the walk under Dirichlet boundary: (P v)(x) = avg over
  // neighbours inside the box
  const int d = box.dim;
  const double hop = 1.0 / (2.0 * d);
  auto apply_p = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (std::int64_t i = 0; i < n; ++i) {
      const lattice::Site s = box.at(i);
      double acc = 0.0;
      for (int ax = 0; ax < d; ++ax) {
        lattice::Site nb = s;
        nb.c[ax] = s.c[ax] + 1;
        if (nb.c[ax] <= box.hi[ax]) acc += v[box.index(nb)];
        nb.c[ax] = s.c[ax] - 1;
        if (nb.c[ax] >= box.lo[ax]) acc += v[box.index(nb)];
      }
      out[i] = hop * acc;
    }
  };

  FkCheckResult out;
  std::vector<double> term(n), next(n), total(n), g;
  for (std::int64_t yi = 0; yi < n; ++yi) {
    std::fill(term.begin(), term.end(), 0.0);
    std::fill(total.begin(), total.end(), 0.0);
    term[yi] = damp[yi];  // walk of length zero, endpoint visit included
    double tnorm = damp[yi];
    int k = 0;
    double ratio = 0.0;
    while (tnorm > tol && k < max_terms) {
      for (std::int64_t i = 0; i < n; ++i) total[i] += term[i];
      apply_p(term, next);
      double nn = 0.0;
      for (std::int64_t i = 0; i < n; ++i) {
        next[i] *= damp[i];
        nn = std::max(nn, std::abs(next[i]));
      }
      if (tnorm > 0.0) ratio = std::max(ratio, nn / tnorm);
      term.swap(next);
      tnorm = nn;
      ++k;
    }
    for (std::int64_t i = 0; i < n; ++i) total[i] += term[i];
    if (!(ratio < 1.0))
      throw NumericalError("fk check: series is not contracting", ratio);
    out.tail_bound = std::max(out.tail_bound, tnorm * ratio / (1.0 - ratio));
    out.contraction = std::max(out.contraction, ratio);
    out.terms_used = std::max(out.terms_used, k);

    g = solve_green(field, beta, box.at(yi), 1e-14);
    for (std::int64_t i = 0; i < n; ++i)
      out.max_abs_dev = std::max(out.max_abs_dev, std::abs(total[i] - g[i]));
  }
  return out;
}

namespace {

struct DecayRun {
  std::vector<std::vector<double>> g_at;  // [env][distance index]
};

DecayRun decay_run(const env::Potential& mu, double beta, int dim, int axis,
                   const std::vector<int>& distances, std::int64_t environments,
                   int margin, std::uint64_t seed, int workers, double tol,
                   bool parallel) {
  const int n_max = *std::max_element(distances.begin(), distances.end());
  lattice::Box box;
  box.dim = dim;
  const int trans = margin + (n_max + 1) / 2;
  for (int i = 0; i < dim; ++i) {
    if (i == axis) {
      box.lo[i] = -margin;
      box.hi[i] = n_max + margin;
    } else {
      box.lo[i] = -trans;
      box.hi[i] = trans;
    }
  }

  DecayRun run;
  run.g_at.assign(environments, std::vector<double>(distances.size(), 0.0));
  auto one_env = [&](std::int64_t e) {
    const env::Field field =
        env::sample_field_reference(mu, box, derive_seed(seed, static_cast<std::uint64_t>(e)));
    const std::vector<double> g =
        solve_green(field, beta, lattice::Site::origin(), tol);
    for (std::size_t j = 0; j < distances.size(); ++j) {
      lattice::Site t;
      t.c[axis] = distances[j];
      run.g_at[e][j] = g[box.index(t)];
    }
  };
#ifdef RWRP_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
    for (std::int64_t e = 0; e < environments; ++e) one_env(e);
  } else
#else
  (void)workers;
  (void)parallel;
#endif
  {
    for (std::int64_t e = 0; e < environments; ++e) one_env(e);
  }
  return run;
}

std::vector<fkmc::RatePoint> decay_points(const DecayRun& run,
                                          const std::vector<int>& distances) {
  const std::int64_t ne = static_cast<std::int64_t>(run.g_at.size());
  const int nb = ne >= 64 ? 32 : (ne >= 16 ? 8 : (ne >= 4 ? 2 : 1));
  std::vector<fkmc::RatePoint> pts(distances.size());
  for (std::size_t j = 0; j < distances.size(); ++j) {
    std::vector<double> vals(ne);
    for (std::int64_t e = 0; e < ne; ++e) vals[e] = run.g_at[e][j];
    const MeanSd ms = mean_sd(vals);
    // batch means on the log scale for the fit weights
    std::vector<double> bl(nb);
    const std::int64_t m = ne / nb;
    for (int b = 0; b < nb; ++b) {
      const std::int64_t lo = b * m;
      const std::int64_t hi = (b == nb - 1) ? ne : lo + m;
      double s = 0.0;
      for (std::int64_t e = lo; e < hi; ++e) s += vals[e];
      bl[b] = std::log(s / static_cast<double>(hi - lo));
    }
    const MeanSd mb = mean_sd(bl);
    pts[j].n = distances[j];
    pts[j].log_value = std::log(ms.mean);
    pts[j].sigma_log = mb.sd / std::sqrt(static_cast<double>(nb));
  }
  return pts;
}

}  // namespace

GreenDecayResult averaged_green_decay(const env::Potential& mu, double beta,
                                      int dim, int axis,
                                      const std::vector<int>& distances,
                                      std::int64_t environments, int margin,
                                      std::uint64_t seed, int workers,
                                      double tol) {
  if (distances.size() < 3) throw std::invalid_argument("green decay: need 3+ distances");
  const DecayRun narrow = decay_run(mu, beta, dim, axis, distances, environments,
                                    margin, seed, workers, tol, true);
  const DecayRun wide = decay_run(mu, beta, dim, axis, distances, environments,
                                  2 * margin, seed, workers, tol, true);
  GreenDecayResult out;
  out.environments = environments;
  out.points = decay_points(wide, distances);
  out.fit = fkmc::fit_rate(out.points);
  out.fit_narrow = fkmc::fit_rate(decay_points(narrow, distances));
  out.margin_rate_shift = std::abs(out.fit.rate - out.fit_narrow.rate);
  return out;
}

GreenDecayResult averaged_green_decay_reference(
    const env::Potential& mu, double beta, int dim, int axis,
    const std::vector<int>& distances, std::int64_t environments, int margin,
    std::uint64_t seed, double tol) {
  if (distances.size() < 3) throw std::invalid_argument("green decay: need 3+ distances");
  const DecayRun narrow = decay_run(mu, beta, dim, axis, distances, environments,
                                    margin, seed, 1, tol, false);
  const DecayRun wide = decay_run(mu, beta, dim, axis, distances, environments,
                                  2 * margin, seed, 1, tol, false);
  GreenDecayResult out;
  out.environments = environments;
  out.points = decay_points(wide, distances);
  out.fit = fkmc::fit_rate(out.points);
  out.fit_narrow = fkmc::fit_rate(decay_points(narrow, distances));
  out.margin_rate_shift = std::abs(out.fit.rate - out.fit_narrow.rate);
  return out;
}

}  // namespace rwrp::green
