#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rwrp/potential.hpp"

namespace rwrp::theory {

// One cell [a, b) of the multiplicative grid on site strength, carrying the
// mu-mass of {z : beta z in [a, b)} and the left-endpoint cost value.
struct SplitCell {
  double a = 0.0, b = 0.0;  // strength range, b may be +inf
  double mass = 0.0;        // p_l
  double cost = 0.0;        // site_cost(a, qd)
  bool retained = false;
};

struct RiemannSplit {
  double beta = 0.0, eps = 0.0, a = 0.0, qd = 0.0;
  std::vector<SplitCell> cells;  // fine grid, ascending
  int fine_size = 0;             // kappa'
  double integral = 0.0;         // sum over retained of cost * mass
  double occupied_mass = 0.0;    // sum over retained of mass  (hat L ^ -2)
  double length_scale = 0.0;     // L = (site_cost(a) * occupied_mass)^{-1/2}
  bool degenerate = false;       // no strength above threshold, or nothing kept
};

// Multiplicative grid from a upward with cost ratio 1/(1-eps) per cell; cells
// lighter than (eps/kappa') f(a) mu([a/beta, inf)) are dropped.
RiemannSplit riemann_split(double beta, const env::Potential& mu, double eps,
                           double a, double qd);

struct RhoCell {
  int level = 0;       // l: strength range [rho^l, rho^{l-1})
  double mass = 0.0;   // p~_l
  bool retained = false;
};

struct RhoGridSplit {
  double rho = 0.0;
  int l0 = 0, l_beta = 0;
  std::vector<RhoCell> cells;
  double integral = 0.0;      // sum over retained of rho^l * mass
  double rate_integral = 0.0; // F_beta used by the retention rule
  bool empty = false;
};

// Geometric grid on the intermediate range [beta m_beta, a); keeps levels
// whose mass is at least rho^{-l/2} F_beta.
RhoGridSplit rho_grid_split(double beta, const env::Potential& mu, double eps,
                            double a, double m_beta, double qd);

struct TruncationLevel {
  double z0 = 0.0;      // positive root of site_cost(z) = z/2
  double m_beta = 0.0;  // eps E[V 1{beta V <= z0}]
  bool infinite_mean = false;
  std::string warning;  // set when the mean is finite
};

TruncationLevel truncation_level(double beta, const env::Potential& mu,
                                 double eps, double qd);

enum class CaseLabel { important_dominated, balanced, intermediate_dominated };

struct CaseSplit {
  CaseLabel label = CaseLabel::balanced;
  double integral_above = 0.0;    // strengths >= a
  double integral_between = 0.0;  // strengths in [beta m_beta, a)
  bool degenerate = false;        // both integrals vanish
};

CaseSplit classify_case(double beta, const env::Potential& mu, double eps,
                        double a, double m_beta, double qd);

struct ScaleSet {
  double L = 0.0, L_hat = 0.0;
  double r_prime = 0.0, r = 0.0, R = 0.0;  // L^{2/d-delta}, L^{2/d+delta}, L^{1-delta}
  double eta = 0.0;                        // L^{-5 delta/2}
  double delta = 0.0;
  int d = 0;
  bool ordering_ok = false;  // 1 < r' < L^{2/d} < r < R < L
  std::optional<double> m_beta;
  std::optional<CaseLabel> label;
};

// Derives the scale hierarchy from a split; rejects delta outside the
// admissible window d(2/d+delta) - (d-2)(2/d-delta) < 2(1-delta).
ScaleSet scales(const RiemannSplit& split, double delta, int d,
                std::optional<double> m_beta = std::nullopt,
                std::optional<CaseLabel> label = std::nullopt);

}  // namespace rwrp::theory
