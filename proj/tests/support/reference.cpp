#include "reference.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ref {
namespace {

constexpr double kPi = 3.14159265358979323846;

// log I_0(x): all-positive power series up to x = 30, asymptotic expansion
// beyond (terms a_k with a_k = a_{k-1} (2k-1)^2 / (8k))
double log_bessel_i0(double x) {
  if (x <= 30.0) {
    double term = 1.0, sum = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return std::log(sum);
  }
  double a = 1.0, corr = 1.0, xk = 1.0;
  for (int k = 1; k <= 10; ++k) {
    a *= static_cast<double>((2 * k - 1) * (2 * k - 1)) / (8.0 * k);
    xk *= x;
    corr += a / xk;
  }
  return x - 0.5 * std::log(2.0 * kPi * x) + std::log(corr);
}

template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double simpson(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

template <typename F>
double romberg(const F& f, double a, double b, double tol) {
  constexpr int kMax = 22;
  std::vector<double> row(kMax), prev(kMax);
  double h = b - a;
  prev[0] = 0.5 * h * (f(a) + f(b));
  std::int64_t n = 1;
  for (int k = 1; k < kMax; ++k) {
    h *= 0.5;
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += f(a + (2 * i + 1) * h);
    n *= 2;
    row[0] = 0.5 * prev[0] + h * s;
    double p4 = 4.0;
    for (int j = 1; j <= k; ++j) {
      row[j] = row[j - 1] + (row[j - 1] - prev[j - 1]) / (p4 - 1.0);
      p4 *= 4.0;
    }
    if (k > 3 && std::fabs(row[k] - prev[k - 1]) < tol) return row[k];
    std::swap(row, prev);
  }
  return prev[kMax - 1];
}

}  // namespace

double watson_green(int dim) {
  if (dim < 3) throw std::invalid_argument("watson_green: dim >= 3");
  const double d = dim;
  auto h = [&](double t) {
    return std::exp(d * log_bessel_i0(t / d) - t);
  };
  const double T = 3.0e4;
  const double head = simpson(h, 0.0, 2.0, 1e-13);
  auto h_log = [&](double u) {
    const double t = std::exp(u);
    return t * h(t);
  };
  const double body = simpson(h_log, std::log(2.0), std::log(T), 1e-13);
  // tail of (d/(2 pi t))^{d/2} (1 + b1 d/t + b2 d^2/t^2 + ...)
  const double a1 = 0.125, a2 = 9.0 / 128.0;
  const double b1 = d * a1;
  const double b2 = d * a2 + 0.5 * d * (d - 1.0) * a1 * a1;
  const double c = std::pow(d / (2.0 * kPi), 0.5 * d);
  double tail = 0.0;
  const double e0 = 0.5 * d - 1.0;
  tail += std::pow(T, -e0) / e0;
  tail += b1 * d * std::pow(T, -e0 - 1.0) / (e0 + 1.0);
  tail += b2 * d * d * std::pow(T, -e0 - 2.0) / (e0 + 2.0);
  return head + body + c * tail;
}

double watson_green_gamma3() {
  const double g = std::tgamma(1.0 / 24.0) * std::tgamma(5.0 / 24.0) *
                   std::tgamma(7.0 / 24.0) * std::tgamma(11.0 / 24.0);
  return std::sqrt(6.0) / (32.0 * kPi * kPi * kPi) * g;
}

double site_cost(double z, double qd) {
  const double e = std::exp(-z);
  return qd * (1.0 - e) / (1.0 - (1.0 - qd) * e);
}

double rate_integral_pareto(double beta, double alpha, double zmin, double qd) {
  auto g = [&](double w) {
    if (w <= 0.0) return site_cost(1e308, qd);
    return site_cost(beta * zmin * std::pow(w, -1.0 / alpha), qd);
  };
  return romberg(g, 0.0, 1.0, 1e-11);
}

double mobility_pareto(double beta, double alpha, double zmin, double qd) {
  auto g = [&](double w) {
    if (w <= 0.0) return qd;
    const double z = beta * zmin * std::pow(w, -1.0 / alpha);
    return site_cost(std::log1p(z), qd);
  };
  return romberg(g, 0.0, 1.0, 1e-11);
}

double rate_integral_exponential(double beta, double rate, double qd) {
  const double z_cut = 45.0 / rate;
  auto g = [&](double z) {
    return site_cost(beta * z, qd) * rate * std::exp(-rate * z);
  };
  return simpson(g, 0.0, z_cut, 1e-13) + qd * std::exp(-rate * z_cut);
}

double truncated_mean_pareto(double alpha, double zmin, double m) {
  if (m <= zmin) return 0.0;
  // z = zmin w^{-1/alpha} maps w in (w_m, 1] onto [zmin, m)
  const double wm = std::pow(m / zmin, -alpha);
  auto g = [&](double w) { return zmin * std::pow(w, -1.0 / alpha); };
  return romberg(g, wm, 1.0, 1e-12);
}

Occupation mc_occupation(const rwrp::lattice::Box& box,
                         const rwrp::lattice::Site& source, std::int64_t walks,
                         std::uint64_t seed) {
  using rwrp::lattice::Site;
  const std::int64_t n = box.size();
  if (!box.contains(source))
    throw std::invalid_argument("mc_occupation: source outside box");
  std::vector<double> sum(n, 0.0), sumsq(n, 0.0);
  std::vector<std::int32_t> visits(n, 0);
  std::vector<std::int64_t> touched;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 2 * box.dim - 1);

  for (std::int64_t w = 0; w < walks; ++w) {
    Site pos = source;
    for (;;) {
      const std::int64_t idx = box.index(pos);
      if (visits[idx] == 0) touched.push_back(idx);
      ++visits[idx];
      const int mv = pick(rng);
      pos.c[mv >> 1] += (mv & 1) ? -1 : 1;
      if (!box.contains(pos)) break;
    }
    for (const std::int64_t idx : touched) {
      sum[idx] += visits[idx];
      sumsq[idx] += static_cast<double>(visits[idx]) * visits[idx];
      visits[idx] = 0;
    }
    touched.clear();
  }

  Occupation out;
  out.walks = walks;
  out.mean.resize(n);
  out.sigma.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double m = sum[i] / static_cast<double>(walks);
    const double var =
        (sumsq[i] / static_cast<double>(walks) - m * m) /
        static_cast<double>(walks - 1);
    out.mean[i] = m;
    out.sigma[i] = std::sqrt(std::max(var, 0.0));
  }
  return out;
}

}  // namespace ref
