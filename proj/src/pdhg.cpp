#include "wgf/pdhg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wgf {

void SolverParams::validate() const {
  if (lambda <= 0.0) throw std::invalid_argument("SolverParams: lambda <= 0");
  if (!auto_sigma && sigma <= 0.0)
    throw std::invalid_argument("SolverParams: sigma <= 0");
  if (it_max < 1) throw std::invalid_argument("SolverParams: it_max < 1");
  if (tol <= 0.0) throw std::invalid_argument("SolverParams: tol <= 0");
  for (double d : deltas)
    if (d < 0.0) throw std::invalid_argument("SolverParams: delta < 0");
}

double auto_sigma(const ConstraintSystem& sys, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("auto_sigma: lambda <= 0");
  const double nrm = estimate_operator_norm(sys);
  if (!(nrm > 0.0))
    throw std::runtime_error("auto_sigma: operator norm estimate not positive");
  return 0.9 / (lambda * nrm);
}

namespace {

double guarded(double denom) { return denom < 1e-14 ? 1.0 : denom; }

}  // namespace

SolverState solve_jko_step(const StateField& u0, const std::vector<double>& phi0,
                           const ConstraintSystem& sys,
                           const EnergyFunctional& energy,
                           const MeasurementSpec& meas,
                           const std::vector<double>& v_next,
                           const SolverParams& params, double tau,
                           const QuadratureWeights& q,
                           const FirstSliceMomentum& pin,
                           std::vector<IterationTraceRow>* trace) {
  params.validate();
  if (params.auto_sigma)
    throw std::invalid_argument("solve_jko_step: resolve sigma before calling");
  if (static_cast<int>(phi0.size()) != sys.total_rows())
    throw std::invalid_argument("solve_jko_step: dual length mismatch");
  const GridSpec& grid = sys.grid();
  const double lambda = params.lambda;
  const double sigma = params.sigma;
  const int last = grid.nt;
  const int nxp = grid.num_x();

  SolverState st;
  st.u = u0;
  st.phi = phi0;
  st.u_bar = u0;
  st.min_rho = std::numeric_limits<double>::infinity();

  // tau-scaled combined gradient on the final density slice
  std::vector<double> grad(nxp), grad_new(nxp);
  SpatialProfile rho1 = st.u.rho_slice(last);
  double e_old =
      combined_energy_slice(energy, meas, v_next, rho1, grid, q, &grad);
  for (double& g : grad) g *= tau;
  st.energy_trace.push_back(e_old);

  std::vector<double> dual_work(sys.total_rows());
  StateField adj(nxp, grid.num_t());
  StateField w(nxp, grid.num_t());
  StateField u_new(nxp, grid.num_t());

  const std::size_t n_entries = st.u.size();
  const std::size_t slice_base = st.u.idx(0, last);

  for (long it = 0; it < params.it_max; ++it) {
    // dual ascent on the relaxed constraints
    sys.apply(st.u_bar, dual_work);
    for (std::size_t r = 0; r < dual_work.size(); ++r)
      dual_work[r] = st.phi[r] + sigma * dual_work[r];
    sys.prox_conjugate_inplace(dual_work, sigma);

    // primal prox of the action
    sys.apply_adjoint(dual_work, adj);
    for (std::size_t i = 0; i < n_entries; ++i) {
      w.rho[i] = st.u.rho[i] - lambda * adj.rho[i];
      w.mom[i] = st.u.mom[i] - lambda * adj.mom[i];
    }
    for (int j = 0; j < nxp; ++j) w.rho[slice_base + j] -= lambda * grad[j];
    const double mn = prox_action_into(w, lambda, pin, u_new);
    st.min_rho = std::min(st.min_rho, mn);

    rho1 = u_new.rho_slice(last);
    const double e_new =
        combined_energy_slice(energy, meas, v_next, rho1, grid, q, &grad_new);
    if (!std::isfinite(e_new)) throw SolverDivergence(it + 1);
    for (double& g : grad_new) g *= tau;

    // extrapolation with gradient correction, and the three relative changes
    double du2 = 0.0, nu2 = 0.0;
    for (int k = 0; k < grid.num_t(); ++k) {
      const std::size_t base = st.u.idx(0, k);
      double sdu = 0.0, snu = 0.0;
      for (int j = 0; j < nxp; ++j) {
        const std::size_t i = base + j;
        const double dr = u_new.rho[i] - st.u.rho[i];
        const double dm = u_new.mom[i] - st.u.mom[i];
        sdu += q.wx[j] * (dr * dr + dm * dm);
        snu += q.wx[j] * (st.u.rho[i] * st.u.rho[i] + st.u.mom[i] * st.u.mom[i]);
        st.u_bar.rho[i] = 2.0 * u_new.rho[i] - st.u.rho[i];
        st.u_bar.mom[i] = 2.0 * u_new.mom[i] - st.u.mom[i];
      }
      du2 += q.wt[k] * sdu;
      nu2 += q.wt[k] * snu;
    }
    for (int j = 0; j < nxp; ++j)
      st.u_bar.rho[slice_base + j] += lambda * (grad[j] - grad_new[j]);

    double dphi2 = 0.0, nphi2 = 0.0;
    for (std::size_t r = 0; r < dual_work.size(); ++r) {
      const double d = dual_work[r] - st.phi[r];
      dphi2 += d * d;
      nphi2 += st.phi[r] * st.phi[r];
    }

    const double rel_du = std::sqrt(du2) / guarded(std::sqrt(nu2));
    const double rel_dphi = std::sqrt(dphi2) / guarded(std::sqrt(nphi2));
    const double rel_de = std::abs(e_new - e_old) / guarded(std::abs(e_old));

    st.u.rho.swap(u_new.rho);
    st.u.mom.swap(u_new.mom);
    st.phi.swap(dual_work);
    grad.swap(grad_new);
    e_old = e_new;
    st.energy_trace.push_back(e_new);
    st.iterations = it + 1;

    if (!std::isfinite(e_new) || !std::isfinite(rel_du) || !std::isfinite(rel_dphi))
      throw SolverDivergence(it + 1);

    if (trace) {
      IterationTraceRow row;
      row.iter = it + 1;
      row.rel_du = rel_du;
      row.rel_dphi = rel_dphi;
      row.rel_de = rel_de;
      row.action = discrete_action(st.u, q, pin);
      row.energy = e_new;
      row.residuals = sys.residual_norms(st.u);
      trace->push_back(row);
    }

    if (it + 1 > params.warmup_iters &&
        std::max({rel_du, rel_dphi, rel_de}) < params.tol) {
      st.converged = true;
      break;
    }
  }
  return st;
}

}  // namespace wgf
