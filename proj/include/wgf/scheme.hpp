#pragma once

#include <functional>
#include <vector>

#include "wgf/pdhg.hpp"

namespace wgf {

/// Output of the outer loop: one density profile per step plus per-step
/// diagnostics. observations holds (expectation, variance) of every profile
/// regardless of which moments the data term uses.
struct Trajectory {
  std::vector<SpatialProfile> profiles;
  std::vector<double> energies;                    // F_h per profile
  std::vector<std::array<double, 2>> observations;
  std::vector<double> step_actions;                // one per solve
  std::vector<bool> converged;                     // one per solve
  std::vector<long> iterations;                    // one per solve
  double tau = 0.0;
  GridSpec grid;
  bool data_driven = false;
  double min_rho = 0.0;

  int n_steps() const { return static_cast<int>(profiles.size()); }
};

/// Called after each solve with the 1-based step index, the solver state,
/// and the per-iteration trace (empty unless collect_trace is set).
using StepCallback = std::function<void(int, const SolverState&,
                                        const std::vector<IterationTraceRow>&)>;

/// Warm-started sequence of n_jko-1 solves. The primal starts at zero with
/// its first time slice set to rho0; each subsequent solve reuses the
/// previous (u, phi) with the first slice overwritten by the extracted
/// profile, and the mass/initial targets re-folded.
Trajectory run_scheme(const SpatialProfile& rho0, const EnergyFunctional& energy,
                      const MeasurementSpec& meas, const SolverParams& params,
                      double tau, int n_jko, const GridSpec& grid,
                      const QuadratureWeights& q,
                      const FirstSliceMomentum& pin = {},
                      const StepCallback& on_step = {},
                      bool collect_trace = false);

/// Profile rescaled so its trapezoid mass equals target_mass.
SpatialProfile scale_to_mass(const SpatialProfile& profile, double target_mass,
                             const QuadratureWeights& q);

struct TotalSquare {
  double lhs = 0.0;  // sum of per-step actions
  double rhs = 0.0;  // 2 tau (F_h(rho^(1)) - min_n F_h(rho^(n)))
};

/// Only meaningful without data terms; throws std::logic_error otherwise.
TotalSquare total_square_check(const Trajectory& traj);

}  // namespace wgf
