#pragma once

#include <array>
#include <vector>

#include "wgf/grid.hpp"

namespace wgf {

/// Fixed block order of the stacked constraint operator.
enum class Block : int { divergence = 0, boundary_flux = 1, mass = 2, initial = 3 };

/// The four relaxed quadratic constraint blocks written as ||A_i u - b_i||_2
/// <= delta_i. A is matrix-free; the square roots of the quadrature weights
/// are folded into the rows so that Euclidean residual norms reproduce the
/// weighted quadratic forms exactly.
///
/// Row layout (0-based offsets, 1-based grid indices in the comments):
///   divergence    (nx+1)*nt rows, one per (j, k>=2): backward time
///                 difference plus centred (one-sided at j=1, nx+1) momentum
///                 difference, scaled by sqrt(wt_k wx_j)
///   boundary_flux 2*(nt+1) rows: sqrt(wt_k) m_{1,k}, then sqrt(wt_k) m_{nx+1,k}
///   mass          nt rows, k>=2: sqrt(wt_k) sum_j wx_j rho_{j,k}
///   initial       nx+1 rows: sqrt(wx_j) rho_{j,1}
/// The targets b fold the reference profile rho0 (zero for the first two
/// blocks); apply() is purely linear.
class ConstraintSystem {
 public:
  ConstraintSystem(const GridSpec& grid, const QuadratureWeights& q,
                   const SpatialProfile& rho0,
                   const std::array<double, 4>& deltas);

  int rows(Block b) const { return rows_[static_cast<int>(b)]; }
  int offset(Block b) const { return offsets_[static_cast<int>(b)]; }
  int total_rows() const { return total_rows_; }
  const std::vector<double>& targets() const { return b_; }
  const std::array<double, 4>& deltas() const { return deltas_; }
  const GridSpec& grid() const { return grid_; }
  const QuadratureWeights& weights() const { return q_; }

  void apply(const StateField& u, std::vector<double>& out) const;
  std::vector<double> apply(const StateField& u) const;

  /// A* phi = W^{-1} A^T phi; satisfies <psi, A u>_2 = <A* psi, u>_W.
  void apply_adjoint(const std::vector<double>& phi, StateField& out) const;
  StateField apply_adjoint(const std::vector<double>& phi) const;

  /// Blockwise projection onto the product of balls ||x_i - b_i|| <= delta_i.
  std::vector<double> project_onto_balls(const std::vector<double>& x) const;

  /// prox of the conjugate indicator: phi - sigma * proj(phi / sigma).
  std::vector<double> prox_conjugate(const std::vector<double>& phi,
                                     double sigma) const;
  /// In-place variant; phi must hold phi + sigma*A(u_bar) on entry.
  void prox_conjugate_inplace(std::vector<double>& phi, double sigma) const;

  /// ||A_i u - b_i||_2 per block.
  std::array<double, 4> residual_norms(const StateField& u) const;

  /// Same operator with the mass/initial targets re-folded around rho0_new.
  ConstraintSystem with_targets(const SpatialProfile& rho0_new) const;

 private:
  GridSpec grid_;
  QuadratureWeights q_;
  std::array<double, 4> deltas_;
  std::array<int, 4> rows_{};
  std::array<int, 4> offsets_{};
  int total_rows_ = 0;
  std::vector<double> b_;
  std::vector<double> sqrt_wx_, sqrt_wt_;
};

/// Power iteration estimate of ||A A*||_2 (Euclidean, on dual vectors),
/// nondecreasing in the iteration count and deterministic given the seed.
double estimate_operator_norm(const ConstraintSystem& sys, int iters = 3000,
                              unsigned seed = 1);

}  // namespace wgf
