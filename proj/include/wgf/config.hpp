#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace wgf {

/// Raised for malformed or inconsistent configuration; carries the offending
/// field so the CLI can name it.
struct ConfigError : std::runtime_error {
  ConfigError(std::string field_name, const std::string& message)
      : std::runtime_error("config error [" + field_name + "]: " + message),
        field(std::move(field_name)) {}
  std::string field;
};

enum class Problem { pme, chemotaxis, custom };
enum class EnergyKind { pme, chemotaxis };
enum class InitialKind { barenblatt, gaussian_two_bump, file };
enum class DataSource { analytic, file };

/// Full description of one run. Matches the sectioned key=value file format
/// one to one; parse(serialize(c)) == c.
struct RunConfig {
  Problem problem = Problem::pme;

  // [grid]
  double left = -1.0;
  double right = 1.0;
  int nx = 100;
  int nt = 10;

  // [scheme]
  double tau = 5e-4;
  int n_jko = 33;

  // [solver]
  double lambda = 0.2;
  bool sigma_auto = true;
  double sigma = 0.0;
  long it_max = 200000;
  double tol = 1e-5;
  std::array<double, 4> deltas{1e-5, 1e-5, 1e-5, 1e-5};
  double first_slice_momentum = 0.0;

  // [energy]
  EnergyKind energy_kind = EnergyKind::pme;
  double m_exponent = 2.0;
  double chi = 2.0;
  int kernel_dim = 1;

  // [initial]
  InitialKind initial_kind = InitialKind::barenblatt;
  double x_shift = 0.0;
  double t_shift = 0.0;
  bool scale_to_truth_mass = false;
  double eta = 0.2;
  std::string initial_file;

  // [truth] — analytic reference used for data generation and comparisons
  double truth_m = 2.0;
  double truth_c = 0.5723571212766659;
  double truth_t0 = 1e-3;

  // [measurements]
  bool use_expectation = false;
  bool use_variance = false;
  double theta = 0.005;
  DataSource data_source = DataSource::analytic;
  std::string data_file;
  double noise_sigma = 0.0;
  unsigned seed = 0;

  // [output]
  std::string out_dir = "out";
  bool trace = false;

  bool operator==(const RunConfig&) const = default;

  /// Checks ranges and referenced files; throws ConfigError.
  void validate() const;
};

/// Parses the sectioned key=value format. Unknown sections or keys are
/// errors. Does not validate; call validate() afterwards.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string serialize_config(const RunConfig& config);

}  // namespace wgf
