#include "wgf/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wgf {

namespace {

double entropy_value(double u) {
  if (u < 0.0) return std::nan("");
  if (u == 0.0) return 0.0;
  return u * std::log(u);
}

// The floor keeps U' finite at vacuum; values at rho >= floor are untouched.
std::function<double(double)> entropy_prime(double floor_value) {
  return [floor_value](double u) {
    return std::log(std::max(u, floor_value)) + 1.0;
  };
}

}  // namespace

double entropy_gradient_floor(double lambda, double tau,
                              const QuadratureWeights& q) {
  return std::max(1e-12, lambda * tau / (2.0 * q.wt.back()));
}

double energy_value(const EnergyFunctional& e, const SpatialProfile& rho1,
                    const QuadratureWeights& q) {
  const int n = static_cast<int>(rho1.size());
  if (n != static_cast<int>(q.wx.size()))
    throw std::invalid_argument("energy_value: profile length mismatch");
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    double term = 0.0;
    if (e.has_internal()) {
      const double uj = e.internal(rho1[j]);
      if (std::isnan(uj))
        throw std::domain_error("energy_value: internal energy undefined at grid index " +
                                std::to_string(j + 1));
      term += uj;  // +inf from overflow propagates to the caller
    }
    if (e.has_potential()) term += e.potential[j] * rho1[j];
    if (e.has_interaction()) {
      double conv = 0.0;
      for (int i = 0; i < n; ++i) conv += q.wx[i] * e.w_at(i, j) * rho1[i];
      term += 0.5 * conv * rho1[j];
    }
    total += q.wx[j] * term;
  }
  return total;
}

namespace {

// Final-slice density gradient of F_h without the 1/wt factor.
void energy_gradient_slice(const EnergyFunctional& e, const SpatialProfile& rho1,
                           const QuadratureWeights& q, std::vector<double>& g) {
  const int n = static_cast<int>(rho1.size());
  g.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (e.has_internal()) {
      const double up = e.internal_prime(rho1[j]);
      if (std::isnan(up))
        throw std::domain_error("energy_gradient: U' undefined at grid index " +
                                std::to_string(j + 1));
      g[j] += up;
    }
    if (e.has_potential()) g[j] += e.potential[j];
  }
  if (e.has_interaction()) {
    for (int j = 0; j < n; ++j) {
      double conv = 0.0;
      for (int i = 0; i < n; ++i) conv += q.wx[i] * e.w_at(i, j) * rho1[i];
      g[j] += conv;
    }
  }
}

}  // namespace

StateField energy_gradient(const EnergyFunctional& e, const StateField& u,
                           const QuadratureWeights& q) {
  const int last = u.num_t - 1;
  const SpatialProfile rho1 = u.rho_slice(last);
  std::vector<double> g;
  energy_gradient_slice(e, rho1, q, g);
  StateField out(u.num_x, u.num_t);
  const double inv_wt = 1.0 / q.wt[last];
  for (int j = 0; j < u.num_x; ++j) out.rho_at(j, last) = g[j] * inv_wt;
  return out;
}

EnergyFunctional pme_energy(const PmeParams& params, const GridSpec& grid) {
  const double m = params.m_exponent;
  if (m < 1.0) throw std::invalid_argument("pme_energy: exponent must be >= 1");
  EnergyFunctional e;
  e.nodes = grid.num_x();
  if (m == 1.0) {
    e.internal = entropy_value;
    e.internal_prime = entropy_prime(params.entropy_floor);
  } else {
    e.internal = [m](double u) {
      if (u == 0.0) return 0.0;
      return std::pow(u, m) / (m - 1.0);
    };
    e.internal_prime = [m](double u) {
      if (u == 0.0) return 0.0;
      return m * std::pow(u, m - 1.0) / (m - 1.0);
    };
  }
  return e;
}

EnergyFunctional chemotaxis_energy(const ChemoParams& params,
                                   const GridSpec& grid) {
  if (params.chi <= 0.0) throw std::invalid_argument("chemotaxis_energy: chi <= 0");
  if (params.kernel_dim < 1)
    throw std::invalid_argument("chemotaxis_energy: kernel_dim < 1");
  EnergyFunctional e;
  e.internal = entropy_value;
  e.internal_prime = entropy_prime(params.entropy_floor);
  const int n = grid.num_x();
  e.nodes = n;
  // The 1/2 of the interaction sum makes the stored factor chi/(d pi)
  // reproduce the kernel coefficient chi/(2 d pi).
  const double factor = params.chi / (params.kernel_dim * M_PI);
  const double diag = factor * (std::log(grid.dx()) - 1.0);
  e.interaction.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    e.interaction[static_cast<std::size_t>(i) * n + i] = diag;
    for (int j = i + 1; j < n; ++j) {
      const double w = factor * std::log(std::abs(grid.x(i) - grid.x(j)));
      e.interaction[static_cast<std::size_t>(i) * n + j] = w;
      e.interaction[static_cast<std::size_t>(j) * n + i] = w;
    }
  }
  return e;
}

namespace {

void check_data(const MeasurementSpec& spec, const std::vector<double>& v) {
  if (spec.enabled() && static_cast<int>(v.size()) != spec.dim())
    throw std::invalid_argument(
        "measurement data vector does not match the enabled observations");
}

}  // namespace

double combined_energy_value(const EnergyFunctional& e,
                             const MeasurementSpec& spec,
                             const std::vector<double>& v,
                             const SpatialProfile& rho1, const GridSpec& grid,
                             const QuadratureWeights& q) {
  check_data(spec, v);
  double total = energy_value(e, rho1, q);
  if (spec.enabled()) {
    const std::vector<double> b = observe(spec, rho1, grid, q);
    double misfit = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double d = b[i] - v[i];
      misfit += d * d;
    }
    total += misfit / (2.0 * spec.theta);
  }
  return total;
}

double combined_energy_slice(const EnergyFunctional& e,
                             const MeasurementSpec& spec,
                             const std::vector<double>& v,
                             const SpatialProfile& rho1, const GridSpec& grid,
                             const QuadratureWeights& q,
                             std::vector<double>* grad_out) {
  check_data(spec, v);
  const int n = grid.num_x();
  double value = energy_value(e, rho1, q);
  if (grad_out) energy_gradient_slice(e, rho1, q, *grad_out);

  if (spec.enabled()) {
    int idx = 0;
    double misfit = 0.0;
    double mean = 0.0;
    if (spec.use_expectation || spec.use_variance)
      mean = observe_expectation(rho1, grid, q);
    if (spec.use_expectation) {
      const double d = mean - v[idx++];
      misfit += d * d;
      if (grad_out)
        for (int j = 0; j < n; ++j)
          (*grad_out)[j] += (d / spec.theta) * grid.x(j);
    }
    if (spec.use_variance) {
      double var = 0.0, centered = 0.0;
      for (int j = 0; j < n; ++j) {
        const double dj = grid.x(j) - mean;
        var += q.wx[j] * dj * dj * rho1[j];
        centered += q.wx[j] * dj * rho1[j];
      }
      const double d = var - v[idx++];
      misfit += d * d;
      if (grad_out) {
        for (int j = 0; j < n; ++j) {
          const double dj = grid.x(j) - mean;
          (*grad_out)[j] +=
              (d / spec.theta) * (dj * dj - 2.0 * grid.x(j) * centered);
        }
      }
    }
    value += misfit / (2.0 * spec.theta);
  }
  if (grad_out) {
    const double inv_wt = 1.0 / q.wt[grid.nt];
    for (double& g : *grad_out) g *= inv_wt;
  }
  return value;
}

StateField combined_gradient(const EnergyFunctional& e,
                             const MeasurementSpec& spec,
                             const std::vector<double>& v, const StateField& u,
                             const GridSpec& grid, const QuadratureWeights& q) {
  const int last = u.num_t - 1;
  const SpatialProfile rho1 = u.rho_slice(last);
  std::vector<double> g;
  combined_energy_slice(e, spec, v, rho1, grid, q, &g);
  StateField out(u.num_x, u.num_t);
  for (int j = 0; j < u.num_x; ++j) out.rho_at(j, last) = g[j];
  return out;
}

}  // namespace wgf
