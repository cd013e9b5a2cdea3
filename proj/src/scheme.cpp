#include "wgf/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wgf {

Trajectory run_scheme(const SpatialProfile& rho0, const EnergyFunctional& energy,
                      const MeasurementSpec& meas, const SolverParams& params,
                      double tau, int n_jko, const GridSpec& grid,
                      const QuadratureWeights& q, const FirstSliceMomentum& pin,
                      const StepCallback& on_step, bool collect_trace) {
  grid.validate();
  params.validate();
  if (static_cast<int>(rho0.size()) != grid.num_x())
    throw std::invalid_argument("run_scheme: rho0 length mismatch");
  if (n_jko < 1) throw std::invalid_argument("run_scheme: n_jko < 1");
  if (tau <= 0.0) throw std::invalid_argument("run_scheme: tau <= 0");
  if (meas.enabled() && static_cast<int>(meas.data.size()) < n_jko - 1)
    throw std::invalid_argument("run_scheme: data sequence shorter than n_jko-1");

  Trajectory traj;
  traj.tau = tau;
  traj.grid = grid;
  traj.data_driven = meas.enabled();
  traj.min_rho = std::numeric_limits<double>::infinity();

  auto record = [&](const SpatialProfile& p) {
    traj.profiles.push_back(p);
    traj.energies.push_back(energy_value(energy, p, q));
    traj.observations.push_back({observe_expectation(p, grid, q),
                                 observe_variance(p, grid, q)});
  };
  record(rho0);
  if (n_jko == 1) {
    traj.min_rho = *std::min_element(rho0.begin(), rho0.end());
    return traj;
  }

  ConstraintSystem sys(grid, q, rho0, params.deltas);
  SolverParams resolved = params;
  if (resolved.auto_sigma) {
    resolved.sigma = auto_sigma(sys, resolved.lambda);
    resolved.auto_sigma = false;  // the norm estimate stays valid across steps
  }

  StateField u = StateField::zeros(grid);
  u.set_rho_slice(0, rho0);
  if (pin.pinned)
    for (int j = 0; j < grid.num_x(); ++j) u.mom_at(j, 0) = pin.value;
  std::vector<double> phi(sys.total_rows(), 0.0);

  static const std::vector<double> no_data;
  std::vector<IterationTraceRow> trace;
  for (int n = 1; n < n_jko; ++n) {
    const std::vector<double>& v =
        meas.enabled() ? meas.data[n - 1] : no_data;
    trace.clear();
    SolverState st = solve_jko_step(u, phi, sys, energy, meas, v, resolved, tau,
                                    q, pin, collect_trace ? &trace : nullptr);
    const SpatialProfile next = st.u.rho_slice(grid.nt);
    record(next);
    traj.step_actions.push_back(discrete_action(st.u, q, pin));
    traj.converged.push_back(st.converged);
    traj.iterations.push_back(st.iterations);
    traj.min_rho = std::min(traj.min_rho, st.min_rho);
    if (on_step) on_step(n, st, trace);

    sys = sys.with_targets(next);
    u = std::move(st.u);
    u.set_rho_slice(0, next);
    phi = std::move(st.phi);
  }
  return traj;
}

SpatialProfile scale_to_mass(const SpatialProfile& profile, double target_mass,
                             const QuadratureWeights& q) {
  const double mass = discrete_mass(profile, q);
  if (!(mass > 0.0))
    throw std::domain_error("scale_to_mass: profile mass must be positive");
  SpatialProfile out = profile;
  const double scale = target_mass / mass;
  for (double& v : out) v *= scale;
  return out;
}

TotalSquare total_square_check(const Trajectory& traj) {
  if (traj.data_driven)
    throw std::logic_error("total_square_check: only valid without data terms");
  TotalSquare ts;
  for (double a : traj.step_actions) ts.lhs += a;
  const double min_e =
      *std::min_element(traj.energies.begin(), traj.energies.end());
  ts.rhs = 2.0 * traj.tau * (traj.energies.front() - min_e);
  return ts;
}

}  // namespace wgf
