#pragma once

#include <string>
#include <vector>

#include "wgf/config.hpp"
#include "wgf/scheme.hpp"

namespace wgf {

struct RunResult {
  Trajectory trajectory;
  RunConfig config;          // as executed
  double sigma_used = 0.0;
  double operator_norm = 0.0;
  double wall_seconds = 0.0;
};

/// Executes a validated config and writes profiles.csv, summary.csv,
/// observations.csv, config.ini and manifest.json into config.out_dir.
/// Throws ConfigError / SolverDivergence; all writes are write-then-rename.
RunResult execute_run(const RunConfig& config);

/// In-memory pieces, exposed for tests and the compare command.
SpatialProfile build_initial_profile(const RunConfig& config,
                                     const GridSpec& grid,
                                     const QuadratureWeights& q);
EnergyFunctional build_energy(const RunConfig& config, const GridSpec& grid);
MeasurementSpec build_measurements(const RunConfig& config, const GridSpec& grid,
                                   const QuadratureWeights& q);

/// Observation file columns (n, v1[, v2]); value column count must equal the
/// consumer's observation dimension.
std::vector<std::vector<double>> read_observation_file(const std::string& path,
                                                       int expected_dim);

struct StoredRun {
  RunConfig config;
  GridSpec grid;
  std::vector<SpatialProfile> profiles;  // indexed by step, 1-based step n = i+1
};

StoredRun load_run(const std::string& dir);

/// Long-format comparison plus scalar metrics for the requested 1-based step
/// indices; reference_dir == "analytic" uses the stored truth parameters.
void emit_comparison(const std::string& run_dir, const std::string& reference,
                     const std::vector<int>& steps, const std::string& out_dir);

}  // namespace wgf
