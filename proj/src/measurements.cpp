#include "wgf/measurements.hpp"

#include <random>
#include <stdexcept>

namespace wgf {

double observe_expectation(const SpatialProfile& rho1, const GridSpec& grid,
                           const QuadratureWeights& q) {
  double v = 0.0;
  for (int j = 0; j < grid.num_x(); ++j) v += q.wx[j] * grid.x(j) * rho1[j];
  return v;
}

double observe_variance(const SpatialProfile& rho1, const GridSpec& grid,
                        const QuadratureWeights& q) {
  const double mean = observe_expectation(rho1, grid, q);
  double v = 0.0;
  for (int j = 0; j < grid.num_x(); ++j) {
    const double d = grid.x(j) - mean;
    v += q.wx[j] * d * d * rho1[j];
  }
  return v;
}

StateField grad_observe_expectation(const GridSpec& grid,
                                    const QuadratureWeights& q) {
  StateField g = StateField::zeros(grid);
  const int last = grid.nt;
  const double inv_wt = 1.0 / q.wt[last];
  for (int j = 0; j < grid.num_x(); ++j)
    g.rho_at(j, last) = grid.x(j) * inv_wt;
  return g;
}

StateField grad_observe_variance(const StateField& u, const GridSpec& grid,
                                 const QuadratureWeights& q) {
  const int last = grid.nt;
  const SpatialProfile rho1 = u.rho_slice(last);
  const double mean = observe_expectation(rho1, grid, q);
  double centered = 0.0;  // sum_j wx_j (x_j - B1) rho_j
  for (int j = 0; j < grid.num_x(); ++j)
    centered += q.wx[j] * (grid.x(j) - mean) * rho1[j];

  StateField g = StateField::zeros(grid);
  const double inv_wt = 1.0 / q.wt[last];
  for (int j = 0; j < grid.num_x(); ++j) {
    const double d = grid.x(j) - mean;
    g.rho_at(j, last) = (d * d - 2.0 * grid.x(j) * centered) * inv_wt;
  }
  return g;
}

std::vector<double> observe(const MeasurementSpec& spec,
                            const SpatialProfile& rho1, const GridSpec& grid,
                            const QuadratureWeights& q) {
  std::vector<double> v;
  if (spec.use_expectation) v.push_back(observe_expectation(rho1, grid, q));
  if (spec.use_variance) v.push_back(observe_variance(rho1, grid, q));
  return v;
}

std::vector<std::vector<double>> make_data_sequence(
    const std::function<SpatialProfile(double)>& ground_truth, double tau,
    int n_jko, bool use_expectation, bool use_variance, const GridSpec& grid,
    const QuadratureWeights& q) {
  MeasurementSpec layout;
  layout.use_expectation = use_expectation;
  layout.use_variance = use_variance;
  std::vector<std::vector<double>> data;
  data.reserve(n_jko > 0 ? n_jko - 1 : 0);
  for (int n = 1; n < n_jko; ++n)
    data.push_back(observe(layout, ground_truth(n * tau), grid, q));
  return data;
}

void add_observation_noise(std::vector<std::vector<double>>& data, double sigma,
                           unsigned seed) {
  if (sigma < 0.0) throw std::invalid_argument("noise sigma < 0");
  if (sigma == 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (auto& v : data)
    for (double& x : v) x += gauss(rng);
}

}  // namespace wgf
