#pragma once

#include <functional>
#include <vector>

#include "wgf/grid.hpp"

namespace wgf {

/// Observation setup for the data term: which moments enter, the penalty
/// weight theta, and the per-step observation vectors (expectation first,
/// then variance).
struct MeasurementSpec {
  bool use_expectation = false;
  bool use_variance = false;
  double theta = 1.0;
  std::vector<std::vector<double>> data;

  bool enabled() const { return use_expectation || use_variance; }
  int dim() const { return (use_expectation ? 1 : 0) + (use_variance ? 1 : 0); }
};

/// B1 = sum_j wx_j x_j rho_j
double observe_expectation(const SpatialProfile& rho1, const GridSpec& grid,
                           const QuadratureWeights& q);

/// B2 = sum_j wx_j (x_j - B1)^2 rho_j
double observe_variance(const SpatialProfile& rho1, const GridSpec& grid,
                        const QuadratureWeights& q);

/// Gradient of B1 in the weighted inner product: x_j / wt_{nt+1} on the final
/// density slice, zero elsewhere. Independent of the state (B1 is linear).
StateField grad_observe_expectation(const GridSpec& grid,
                                    const QuadratureWeights& q);

StateField grad_observe_variance(const StateField& u, const GridSpec& grid,
                                 const QuadratureWeights& q);

/// Stacked observation vector of a profile, expectation first.
std::vector<double> observe(const MeasurementSpec& spec,
                            const SpatialProfile& rho1, const GridSpec& grid,
                            const QuadratureWeights& q);

/// v^(n) = observations of truth(n*tau) for n = 1..n_jko-1, sampled on the
/// grid before observing.
std::vector<std::vector<double>> make_data_sequence(
    const std::function<SpatialProfile(double)>& ground_truth, double tau,
    int n_jko, bool use_expectation, bool use_variance, const GridSpec& grid,
    const QuadratureWeights& q);

/// Adds seeded Gaussian noise (stddev sigma) to every observation component.
void add_observation_noise(std::vector<std::vector<double>>& data, double sigma,
                           unsigned seed);

}  // namespace wgf
