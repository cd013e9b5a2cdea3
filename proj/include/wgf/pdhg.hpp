#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgf/action.hpp"
#include "wgf/constraints.hpp"
#include "wgf/energy.hpp"

namespace wgf {

struct SolverParams {
  double lambda = 0.2;
  double sigma = 0.0;  // used when auto_sigma is false
  bool auto_sigma = true;
  long it_max = 200000;
  double tol = 1e-5;
  int warmup_iters = 10;
  std::array<double, 4> deltas{1e-5, 1e-5, 1e-5, 1e-5};

  void validate() const;
};

/// Thrown when an iterate turns non-finite. Hitting it_max is not an error;
/// the state is returned with converged == false.
struct SolverDivergence : std::runtime_error {
  explicit SolverDivergence(long it)
      : std::runtime_error("solver diverged at iteration " + std::to_string(it)),
        iteration(it) {}
  long iteration;
};

struct IterationTraceRow {
  long iter;
  double rel_du, rel_dphi, rel_de;
  double action, energy;
  std::array<double, 4> residuals;
};

struct SolverState {
  StateField u;
  std::vector<double> phi;
  StateField u_bar;
  long iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;
  double min_rho = 0.0;  // smallest density over all prox outputs
};

/// One step of the scheme: minimizes
///   sum wt wx Phi(rho, m) + tau * [ F_h(rho1) + ||B(rho1) - v||^2 / (2 theta) ]
/// over the relaxed constraint set, by the three-operator primal-dual
/// iteration. sigma must be set (params.auto_sigma resolved by the caller via
/// auto_sigma()). Stops when the largest of the three relative changes
/// (state, dual, energy) falls below tol; denominators under 1e-14 are
/// replaced by 1.
SolverState solve_jko_step(const StateField& u0, const std::vector<double>& phi0,
                           const ConstraintSystem& sys,
                           const EnergyFunctional& energy,
                           const MeasurementSpec& meas,
                           const std::vector<double>& v_next,
                           const SolverParams& params, double tau,
                           const QuadratureWeights& q,
                           const FirstSliceMomentum& pin = {},
                           std::vector<IterationTraceRow>* trace = nullptr);

/// sigma = 0.9 / (lambda * ||A A*||_2)
double auto_sigma(const ConstraintSystem& sys, double lambda);

}  // namespace wgf
