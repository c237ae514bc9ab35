#pragma once

#include "rwrp/lattice.hpp"
#include "rwrp/linsolve.hpp"

namespace rwrp::lattice {

// P_0[ the walk hits y before leaving the closed Euclidean ball D(0, R) ],
// computed exactly (up to solver tolerance) from the lattice boundary-value
// problem: h(y) = 1, h harmonic on the ball minus {y}, h = 0 outside.
double hitting_prob_exact(int dim, const Site& y, double radius,
                          double tol = 1e-10, CgStats* stats = nullptr,
                          int workers = 1);

// c_d q_d (|y|^{2-d} - R^{2-d}), the potential-theoretic prediction
double hitting_prob_formula(int dim, double y_norm, double radius, double qd);

}  // namespace rwrp::lattice
