#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rwrp/lattice.hpp"

namespace rwrp {

struct CgStats {
  int iterations = 0;
  double residual = 0.0;  // relative two-norm
  bool converged = false;
};

// SPD nearest-neighbour system on a box grid:
//   diag(x) u(x) - (1/2d) sum_{y ~ x} u(y) = b(x)
// Off-box neighbours are zero on non-periodic axes and wrap on periodic
// axes. Sites with unknown = 0 are pinned to zero (identity rows).
class StencilSystem {
 public:
  StencilSystem(lattice::Box box, std::vector<double> diag,
                std::vector<std::uint8_t> unknown,
                std::array<bool, lattice::kMaxDim> periodic = {},
                int workers = 1);

  void apply(const std::vector<double>& u, std::vector<double>& out) const;
  const lattice::Box& box() const { return box_; }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<std::uint8_t>& unknown() const { return unknown_; }
  std::int64_t size() const { return static_cast<std::int64_t>(diag_.size()); }

 private:
  lattice::Box box_;
  std::vector<double> diag_;
  std::vector<std::uint8_t> unknown_;
  std::array<bool, lattice::kMaxDim> periodic_;
  std::array<std::int64_t, lattice::kMaxDim> stride_{};
  double hop_ = 0.0;  // 1/(2d)
  int workers_ = 1;
};

// Conjugate gradients with Jacobi preconditioning; u holds the initial
// guess on entry and the solution on exit.
CgStats pcg_jacobi(const StencilSystem& sys, const std::vector<double>& b,
                   std::vector<double>& u, double tol = 1e-10,
                   int max_iter = 20000);

}  // namespace rwrp
