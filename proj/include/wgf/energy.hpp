#pragma once

#include <functional>
#include <vector>

#include "wgf/grid.hpp"
#include "wgf/measurements.hpp"

namespace wgf {

/// Driving energy sum_j wx_j [ U(rho_j) + V_j rho_j
///                             + 1/2 sum_i wx_i W_ij rho_i rho_j ]
/// on the final time slice. Absent terms are left empty/unset.
struct EnergyFunctional {
  std::function<double(double)> internal;        // U
  std::function<double(double)> internal_prime;  // U'
  std::vector<double> potential;                 // V_j
  std::vector<double> interaction;               // W_ij, dense row-major, symmetric
  int nodes = 0;

  bool has_internal() const { return static_cast<bool>(internal); }
  bool has_potential() const { return !potential.empty(); }
  bool has_interaction() const { return !interaction.empty(); }
  double w_at(int i, int j) const {
    return interaction[static_cast<std::size_t>(i) * nodes + j];
  }
};

struct PmeParams {
  double m_exponent = 2.0;
  // argument floor for U' of the entropy (m = 1); see entropy_gradient_floor
  double entropy_floor = 1e-12;
};

struct ChemoParams {
  double chi = 2.0;
  int kernel_dim = 1;
  double entropy_floor = 1e-12;
};

/// Smallest entropy-gradient floor that keeps the explicit gradient step of
/// the primal update stable where the density vanishes: the final-slice map
/// rho -> rho - lambda*tau*U'(rho)/wt has derivative lambda*tau/(wt*rho),
/// so nodes below lambda*tau/(2*wt) oscillate instead of settling.
double entropy_gradient_floor(double lambda, double tau,
                              const QuadratureWeights& q);

double energy_value(const EnergyFunctional& e, const SpatialProfile& rho1,
                    const QuadratureWeights& q);

/// Gradient in the weighted inner product: density channel on the final time
/// slice is [U'(rho_j) + V_j + sum_i wx_i W_ij rho_i] / wt_{nt+1}, all other
/// entries zero.
StateField energy_gradient(const EnergyFunctional& e, const StateField& u,
                           const QuadratureWeights& q);

/// U(u) = u^m/(m-1) for m > 1, u log u for m = 1; no potential/interaction.
EnergyFunctional pme_energy(const PmeParams& params, const GridSpec& grid);

/// Entropy plus logarithmic interaction kernel W_ij = chi/(d pi) log|x_i-x_j|
/// with the diagonal replaced by its integral average over two grid cells,
/// chi/(d pi) (log dx - 1).
EnergyFunctional chemotaxis_energy(const ChemoParams& params,
                                   const GridSpec& grid);

/// F_h(rho1) + 1/(2 theta) || B(rho1) - v ||^2. v must match spec.dim().
double combined_energy_value(const EnergyFunctional& e,
                             const MeasurementSpec& spec,
                             const std::vector<double>& v,
                             const SpatialProfile& rho1, const GridSpec& grid,
                             const QuadratureWeights& q);

/// grad F_h + 1/theta sum_obs (B_obs - v_obs) grad B_obs.
StateField combined_gradient(const EnergyFunctional& e,
                             const MeasurementSpec& spec,
                             const std::vector<double>& v, const StateField& u,
                             const GridSpec& grid, const QuadratureWeights& q);

/// Fused final-slice evaluation used by the solver loop: writes the final
/// density-slice gradient entries (1/wt factor included) into grad_out and
/// returns the combined energy value.
double combined_energy_slice(const EnergyFunctional& e,
                             const MeasurementSpec& spec,
                             const std::vector<double>& v,
                             const SpatialProfile& rho1, const GridSpec& grid,
                             const QuadratureWeights& q,
                             std::vector<double>* grad_out);

}  // namespace wgf
