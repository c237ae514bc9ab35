#include "rwrp/splitting.hpp"

#include <cmath>
#include <stdexcept>

#include "rwrp/numeric.hpp"
#include "rwrp/theory.hpp"

namespace rwrp::theory {

namespace {
constexpr int kMaxFineGrid = 10000;

void check_common(double beta, double eps) {
  if (!(beta > 0.0)) throw std::invalid_argument("split: beta must be > 0");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("split: eps must be in (0,1)");
}
}  // namespace

RiemannSplit riemann_split(double beta, const env::Potential& mu, double eps,
                           double a, double qd) {
  check_common(beta, eps);
  if (!(a > 0.0)) throw std::invalid_argument("riemann_split: a must be > 0");

  RiemannSplit out;
  out.beta = beta;
  out.eps = eps;
  out.a = a;
  out.qd = qd;

  // fine grid: cost grows by a factor 1/(1-eps) per cell until it reaches
  // (1-eps) qd, after which a single unbounded cell closes the grid
  std::vector<double> edges{a};
  double fa = site_cost(a, qd);
  double w = fa;
  while (w < (1.0 - eps) * qd) {
    w /= (1.0 - eps);
    if (w >= qd * (1.0 - 1e-14)) break;
    edges.push_back(site_cost_inverse(w, qd));
    if (static_cast<int>(edges.size()) > kMaxFineGrid)
      throw std::invalid_argument(
          "riemann_split: fine grid exceeds cap (eps or a too small)");
  }
  out.fine_size = static_cast<int>(edges.size());

  double tail = mu.tail_mass(a / beta);
  if (tail <= 0.0) {
    out.degenerate = true;
    out.length_scale = env::kInf;
    return out;
  }
  double weight_floor = (eps / out.fine_size) * fa * tail;

  KahanSum integral, occupied;
  for (std::size_t l = 0; l < edges.size(); ++l) {
    SplitCell cell;
    cell.a = edges[l];
    cell.b = (l + 1 < edges.size()) ? edges[l + 1] : env::kInf;
    cell.cost = site_cost(cell.a, qd);
    cell.mass = (cell.b < env::kInf)
                    ? mu.interval_mass(cell.a / beta, cell.b / beta)
                    : mu.tail_mass(cell.a / beta);
    cell.retained = cell.mass >= weight_floor;
    if (cell.retained) {
      integral.add(cell.cost * cell.mass);
      occupied.add(cell.mass);
    }
    out.cells.push_back(cell);
  }
  out.integral = integral.value();
  out.occupied_mass = occupied.value();
  if (out.occupied_mass <= 0.0) {
    out.degenerate = true;
    out.length_scale = env::kInf;
  } else {
    out.length_scale = 1.0 / std::sqrt(fa * out.occupied_mass);
  }
  return out;
}

RhoGridSplit rho_grid_split(double beta, const env::Potential& mu, double eps,
                            double a, double m_beta, double qd) {
  check_common(beta, eps);
  if (!(a > 0.0)) throw std::invalid_argument("rho_grid_split: a must be > 0");
  if (!(m_beta > 0.0))
    throw std::invalid_argument("rho_grid_split: m_beta must be > 0");

  RhoGridSplit out;
  double rho = 1.0 - eps;
  out.rho = rho;
  out.rate_integral = rate_integral(beta, mu, qd);

  double bm = beta * m_beta;
  if (!(bm < a)) {
    out.empty = true;
    return out;
  }

  // largest l0 with rho^{l0} >= a
  int l0 = static_cast<int>(std::floor(std::log(a) / std::log(rho)));
  while (std::pow(rho, l0) < a) --l0;
  while (std::pow(rho, l0 + 1) >= a) ++l0;
  // smallest l_beta with rho^{l_beta - 1} < beta m_beta
  int lb = static_cast<int>(std::ceil(std::log(bm) / std::log(rho))) + 1;
  while (lb > l0 && std::pow(rho, lb - 2) < bm) --lb;
  while (std::pow(rho, lb - 1) >= bm) ++lb;
  out.l0 = l0;
  out.l_beta = lb;
  if (lb < l0) {
    out.empty = true;
    return out;
  }

  KahanSum integral;
  for (int l = l0; l <= lb; ++l) {
    RhoCell cell;
    cell.level = l;
    double zlo = std::pow(rho, l) / beta;
    double zhi = std::pow(rho, l - 1) / beta;
    cell.mass = mu.interval_mass(zlo, zhi);
    cell.retained =
        cell.mass >= std::pow(rho, -0.5 * l) * out.rate_integral;
    if (cell.retained) integral.add(std::pow(rho, l) * cell.mass);
    out.cells.push_back(cell);
  }
  out.integral = integral.value();
  return out;
}

TruncationLevel truncation_level(double beta, const env::Potential& mu,
                                 double eps, double qd) {
  check_common(beta, eps);
  TruncationLevel out;
  // z0: positive root of site_cost(z) = z/2 (site_cost/z falls from 1 to 0)
  double lo = 1e-9, hi = 16.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (site_cost(mid, qd) - 0.5 * mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.z0 = 0.5 * (lo + hi);
  out.m_beta = eps * mu.truncated_mean(out.z0 / beta);
  out.infinite_mean = !mu.mean().has_value();
  if (!out.infinite_mean)
    out.warning =
        "finite-mean spec: truncation level stabilizes as beta decreases and "
        "the intermediate-range analysis does not apply";
  return out;
}

CaseSplit classify_case(double beta, const env::Potential& mu, double eps,
                        double a, double m_beta, double qd) {
  check_common(beta, eps);
  CaseSplit out;
  out.integral_above = rate_integral_above(beta, mu, qd, a);
  out.integral_between =
      rate_integral_between(beta, mu, qd, m_beta, a / beta);
  if (out.integral_above <= 0.0 && out.integral_between <= 0.0) {
    out.degenerate = true;
    out.label = CaseLabel::balanced;
    return out;
  }
  if (out.integral_between < eps * out.integral_above)
    out.label = CaseLabel::important_dominated;
  else if (out.integral_above <= eps * out.integral_between)
    out.label = CaseLabel::intermediate_dominated;
  else
    out.label = CaseLabel::balanced;
  return out;
}

ScaleSet scales(const RiemannSplit& split, double delta, int d,
                std::optional<double> m_beta,
                std::optional<CaseLabel> label) {
  if (d < 3) throw std::invalid_argument("scales: d must be >= 3");
  if (!(delta > 0.0))
    throw std::invalid_argument("scales: delta must be > 0");
  double lhs = d * (2.0 / d + delta) - (d - 2) * (2.0 / d - delta);
  if (!(lhs < 2.0 * (1.0 - delta)))
    throw std::invalid_argument("scales: delta outside admissible window");

  ScaleSet out;
  out.delta = delta;
  out.d = d;
  out.m_beta = m_beta;
  out.label = label;
  double L = split.length_scale;
  out.L = L;
  out.L_hat = (split.occupied_mass > 0.0)
                  ? 1.0 / std::sqrt(split.occupied_mass)
                  : env::kInf;
  out.r_prime = std::pow(L, 2.0 / d - delta);
  out.r = std::pow(L, 2.0 / d + delta);
  out.R = std::pow(L, 1.0 - delta);
  out.eta = std::pow(L, -2.5 * delta);
  double mid = std::pow(L, 2.0 / d);
  out.ordering_ok = std::isfinite(L) && 1.0 < out.r_prime &&
                    out.r_prime < mid && mid < out.r && out.r < out.R &&
                    out.R < L;
  return out;
}

}  // namespace rwrp::theory
