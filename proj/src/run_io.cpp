#include "wgf/run_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wgf/analytic.hpp"
#include "wgf/measurements.hpp"

namespace wgf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

GridSpec grid_of(const RunConfig& c) {
  GridSpec g;
  g.left = c.left;
  g.right = c.right;
  g.nx = c.nx;
  g.nt = c.nt;
  return g;
}

BarenblattParams truth_params(const RunConfig& c) {
  BarenblattParams p;
  p.m = c.truth_m;
  p.c = c.truth_c;
  p.t0 = c.truth_t0;
  return p;
}

SpatialProfile read_profile_file(const std::string& path, int expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("initial.path", "cannot open " + path);
  SpatialProfile out;
  double v;
  while (in >> v) out.push_back(v);
  if (static_cast<int>(out.size()) != expected)
    throw ConfigError("initial.path",
                      "expected " + std::to_string(expected) + " values, got " +
                          std::to_string(out.size()));
  return out;
}

}  // namespace

SpatialProfile build_initial_profile(const RunConfig& c, const GridSpec& grid,
                                     const QuadratureWeights& q) {
  SpatialProfile rho0;
  switch (c.initial_kind) {
    case InitialKind::barenblatt: {
      BarenblattParams p = truth_params(c);
      if (c.energy_kind == EnergyKind::pme) p.m = c.m_exponent;
      rho0 = barenblatt_profile(grid, p, c.x_shift, c.t_shift);
      break;
    }
    case InitialKind::gaussian_two_bump:
      rho0 = two_bump_profile(grid, c.eta);
      break;
    case InitialKind::file:
      rho0 = read_profile_file(c.initial_file, grid.num_x());
      break;
  }
  if (c.scale_to_truth_mass) {
    const double target =
        discrete_mass(barenblatt_profile(grid, truth_params(c)), q);
    rho0 = scale_to_mass(rho0, target, q);
  }
  return rho0;
}

EnergyFunctional build_energy(const RunConfig& c, const GridSpec& grid) {
  const double floor =
      entropy_gradient_floor(c.lambda, c.tau, trapezoid_weights(grid));
  if (c.energy_kind == EnergyKind::pme)
    return pme_energy({c.m_exponent, floor}, grid);
  return chemotaxis_energy({c.chi, c.kernel_dim, floor}, grid);
}

std::vector<std::vector<double>> read_observation_file(const std::string& path,
                                                       int expected_dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("measurements.data_file", "cannot open " + path);
  std::vector<std::vector<double>> data;
  std::string line;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!header_skipped && line.find_first_not_of("0123456789+-.eE, \r") !=
                               std::string::npos) {
      header_skipped = true;  // column names
      continue;
    }
    header_skipped = true;
    std::istringstream ss(line);
    std::vector<double> row;
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != expected_dim + 1)
      throw ConfigError("measurements.data_file",
                        "expected " + std::to_string(expected_dim + 1) +
                            " columns, got " + std::to_string(row.size()));
    data.emplace_back(row.begin() + 1, row.end());
  }
  return data;
}

MeasurementSpec build_measurements(const RunConfig& c, const GridSpec& grid,
                                   const QuadratureWeights& q) {
  MeasurementSpec spec;
  spec.use_expectation = c.use_expectation;
  spec.use_variance = c.use_variance;
  spec.theta = c.theta;
  if (!spec.enabled()) return spec;

  if (c.data_source == DataSource::analytic) {
    const BarenblattParams p = truth_params(c);
    auto truth = [&](double t) { return barenblatt_profile(grid, p, 0.0, t); };
    spec.data = make_data_sequence(truth, c.tau, c.n_jko, c.use_expectation,
                                   c.use_variance, grid, q);
  } else {
    spec.data = read_observation_file(c.data_file, spec.dim());
    if (static_cast<int>(spec.data.size()) < c.n_jko - 1)
      throw ConfigError("measurements.data_file",
                        "holds " + std::to_string(spec.data.size()) +
                            " rows, need " + std::to_string(c.n_jko - 1));
  }
  if (c.noise_sigma > 0.0)
    add_observation_noise(spec.data, c.noise_sigma, c.seed);
  return spec;
}

namespace {

std::string profiles_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "n,j,x_j,rho\n";
  for (int n = 0; n < traj.n_steps(); ++n)
    for (int j = 0; j < traj.grid.num_x(); ++j)
      out << (n + 1) << ',' << (j + 1) << ',' << fmt(traj.grid.x(j)) << ','
          << fmt(traj.profiles[n][j]) << "\n";
  return out.str();
}

std::string summary_csv(const Trajectory& traj, const QuadratureWeights& q) {
  std::ostringstream out;
  out << "n,energy,action,converged,B1,B2,mass\n";
  for (int n = 0; n < traj.n_steps(); ++n) {
    const double action = n == 0 ? 0.0 : traj.step_actions[n - 1];
    const bool conv = n == 0 ? true : static_cast<bool>(traj.converged[n - 1]);
    out << (n + 1) << ',' << fmt(traj.energies[n]) << ',' << fmt(action) << ','
        << (conv ? 1 : 0) << ',' << fmt(traj.observations[n][0]) << ','
        << fmt(traj.observations[n][1]) << ','
        << fmt(discrete_mass(traj.profiles[n], q)) << "\n";
  }
  return out.str();
}

// Row n holds the moments of profile n+1, i.e. the observations a
// downstream data-driven run consumes for its step n.
std::string observations_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "n,v1,v2\n";
  for (int n = 1; n < traj.n_steps(); ++n)
    out << n << ',' << fmt(traj.observations[n][0]) << ','
        << fmt(traj.observations[n][1]) << "\n";
  return out.str();
}

std::string trace_csv(const std::vector<IterationTraceRow>& rows) {
  std::ostringstream out;
  out << "iter,rel_du,rel_dphi,rel_dE,action,energy,r_div,r_flux,r_mass,r_init\n";
  for (const auto& r : rows) {
    out << r.iter << ',' << fmt(r.rel_du) << ',' << fmt(r.rel_dphi) << ','
        << fmt(r.rel_de) << ',' << fmt(r.action) << ',' << fmt(r.energy);
    for (double res : r.residuals) out << ',' << fmt(res);
    out << "\n";
  }
  return out.str();
}

json config_json(const RunConfig& c) {
  json j;
  j["problem"] = c.problem == Problem::pme ? "pme"
                 : c.problem == Problem::chemotaxis ? "chemotaxis"
                                                    : "custom";
  j["grid"] = {{"left", c.left}, {"right", c.right}, {"nx", c.nx}, {"nt", c.nt}};
  j["scheme"] = {{"tau", c.tau}, {"n_jko", c.n_jko}};
  j["solver"] = {{"lambda", c.lambda},
                 {"sigma", c.sigma},
                 {"sigma_auto", c.sigma_auto},
                 {"it_max", c.it_max},
                 {"tol", c.tol},
                 {"delta_div", c.deltas[0]},
                 {"delta_flux", c.deltas[1]},
                 {"delta_mass", c.deltas[2]},
                 {"delta_init", c.deltas[3]},
                 {"first_slice_momentum", c.first_slice_momentum}};
  j["energy"] = {{"kind", c.energy_kind == EnergyKind::pme ? "pme" : "chemotaxis"},
                 {"m", c.m_exponent},
                 {"chi", c.chi},
                 {"kernel_dim", c.kernel_dim}};
  j["initial"] = {{"kind", c.initial_kind == InitialKind::barenblatt
                               ? "barenblatt"
                               : c.initial_kind == InitialKind::gaussian_two_bump
                                     ? "gaussian_two_bump"
                                     : "file"},
                  {"x_shift", c.x_shift},
                  {"t_shift", c.t_shift},
                  {"scale_to_truth_mass", c.scale_to_truth_mass},
                  {"eta", c.eta},
                  {"path", c.initial_file}};
  j["truth"] = {{"m", c.truth_m}, {"c", c.truth_c}, {"t0", c.truth_t0}};
  j["measurements"] = {{"use_expectation", c.use_expectation},
                       {"use_variance", c.use_variance},
                       {"theta", c.theta},
                       {"source", c.data_source == DataSource::analytic
                                      ? "analytic"
                                      : "file"},
                       {"data_file", c.data_file},
                       {"noise_sigma", c.noise_sigma},
                       {"seed", c.seed}};
  j["output"] = {{"directory", c.out_dir}, {"trace", c.trace}};
  return j;
}

}  // namespace

RunResult execute_run(const RunConfig& config) {
  config.validate();
  const auto t_start = std::chrono::steady_clock::now();

  const GridSpec grid = grid_of(config);
  const QuadratureWeights q = trapezoid_weights(grid);
  const SpatialProfile rho0 = build_initial_profile(config, grid, q);
  const EnergyFunctional energy = build_energy(config, grid);
  const MeasurementSpec meas = build_measurements(config, grid, q);

  SolverParams params;
  params.lambda = config.lambda;
  params.auto_sigma = config.sigma_auto;
  params.sigma = config.sigma;
  params.it_max = config.it_max;
  params.tol = config.tol;
  params.deltas = config.deltas;

  RunResult result;
  result.config = config;
  {
    ConstraintSystem sys(grid, q, rho0, params.deltas);
    result.operator_norm = estimate_operator_norm(sys);
    if (params.auto_sigma) {
      params.sigma = 0.9 / (params.lambda * result.operator_norm);
      params.auto_sigma = false;
    } else if (params.lambda * params.sigma * result.operator_norm >= 1.0) {
      throw ConfigError("solver.sigma",
                        "lambda*sigma*||AA*|| = " +
                            std::to_string(params.lambda * params.sigma *
                                           result.operator_norm) +
                            " >= 1 breaks the step-size condition");
    }
  }
  result.sigma_used = params.sigma;

  FirstSliceMomentum pin;
  pin.value = config.first_slice_momentum;

  fs::create_directories(config.out_dir);
  StepCallback on_step;
  if (config.trace) {
    on_step = [&](int n, const SolverState&,
                  const std::vector<IterationTraceRow>& rows) {
      atomic_write(fs::path(config.out_dir) /
                       ("trace_step_" + std::to_string(n) + ".csv"),
                   trace_csv(rows));
    };
  }
  result.trajectory =
      run_scheme(rho0, energy, meas, params, config.tau, config.n_jko, grid, q,
                 pin, on_step, config.trace);

  const auto t_end = std::chrono::steady_clock::now();
  result.wall_seconds =
      std::chrono::duration<double>(t_end - t_start).count();

  atomic_write(fs::path(config.out_dir) / "profiles.csv",
               profiles_csv(result.trajectory));
  atomic_write(fs::path(config.out_dir) / "summary.csv",
               summary_csv(result.trajectory, q));
  atomic_write(fs::path(config.out_dir) / "observations.csv",
               observations_csv(result.trajectory));
  atomic_write(fs::path(config.out_dir) / "config.ini",
               serialize_config(config));

  json manifest;
  manifest["config"] = config_json(config);
  manifest["resolved"] = {{"sigma", result.sigma_used},
                          {"operator_norm", result.operator_norm},
                          {"step_product", params.lambda * result.sigma_used *
                                               result.operator_norm}};
  manifest["results"] = {
      {"wall_seconds", result.wall_seconds},
      {"min_rho", result.trajectory.min_rho},
      {"converged", result.trajectory.converged},
      {"iterations", result.trajectory.iterations},
      {"initial_mass", discrete_mass(result.trajectory.profiles.front(), q)},
      {"final_mass", discrete_mass(result.trajectory.profiles.back(), q)}};
  atomic_write(fs::path(config.out_dir) / "manifest.json", manifest.dump(2));
  return result;
}

StoredRun load_run(const std::string& dir) {
  StoredRun run;
  const fs::path manifest_path = fs::path(dir) / "manifest.json";
  std::ifstream mf(manifest_path);
  if (!mf) throw ConfigError("compare", "cannot open " + manifest_path.string());
  json manifest = json::parse(mf);
  const json& jc = manifest["config"];
  run.config.left = jc["grid"]["left"];
  run.config.right = jc["grid"]["right"];
  run.config.nx = jc["grid"]["nx"];
  run.config.nt = jc["grid"]["nt"];
  run.config.tau = jc["scheme"]["tau"];
  run.config.n_jko = jc["scheme"]["n_jko"];
  run.config.truth_m = jc["truth"]["m"];
  run.config.truth_c = jc["truth"]["c"];
  run.config.truth_t0 = jc["truth"]["t0"];
  run.grid = grid_of(run.config);

  std::ifstream pf(fs::path(dir) / "profiles.csv");
  if (!pf) throw ConfigError("compare", "cannot open profiles.csv in " + dir);
  std::string line;
  std::getline(pf, line);  // header
  run.profiles.assign(run.config.n_jko, SpatialProfile(run.grid.num_x(), 0.0));
  while (std::getline(pf, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    const int n = std::stoi(cell);
    std::getline(ss, cell, ',');
    const int j = std::stoi(cell);
    std::getline(ss, cell, ',');  // x_j
    std::getline(ss, cell, ',');
    if (n < 1 || n > static_cast<int>(run.profiles.size()) || j < 1 ||
        j > run.grid.num_x())
      throw ConfigError("compare", "profiles.csv index out of range");
    run.profiles[n - 1][j - 1] = std::stod(cell);
  }
  return run;
}

void emit_comparison(const std::string& run_dir, const std::string& reference,
                     const std::vector<int>& steps, const std::string& out_dir) {
  const StoredRun run = load_run(run_dir);
  const QuadratureWeights q = trapezoid_weights(run.grid);

  std::vector<SpatialProfile> ref_profiles(run.profiles.size());
  if (reference == "analytic") {
    BarenblattParams p;
    p.m = run.config.truth_m;
    p.c = run.config.truth_c;
    p.t0 = run.config.truth_t0;
    for (std::size_t i = 0; i < ref_profiles.size(); ++i)
      ref_profiles[i] =
          barenblatt_profile(run.grid, p, 0.0, static_cast<double>(i) * run.config.tau);
  } else {
    const StoredRun other = load_run(reference);
    if (other.grid.num_x() != run.grid.num_x())
      throw ConfigError("compare", "grids are not compatible");
    ref_profiles = other.profiles;
  }

  std::ostringstream long_csv, metrics_csv;
  long_csv << "k,j,x_j,rho_numeric,rho_reference,abs_err\n";
  metrics_csv << "k,L1_err,Linf_err,B1_num,B1_ref,B2_num,B2_ref,max_num,max_ref\n";
  for (int k : steps) {
    if (k < 1 || k > static_cast<int>(run.profiles.size()) ||
        k > static_cast<int>(ref_profiles.size()))
      throw ConfigError("compare.steps", "step index " + std::to_string(k) +
                                             " out of range");
    const SpatialProfile& a = run.profiles[k - 1];
    const SpatialProfile& b = ref_profiles[k - 1];
    double l1 = 0.0, linf = 0.0, max_a = 0.0, max_b = 0.0;
    for (int j = 0; j < run.grid.num_x(); ++j) {
      const double err = std::abs(a[j] - b[j]);
      long_csv << k << ',' << (j + 1) << ',' << fmt(run.grid.x(j)) << ','
               << fmt(a[j]) << ',' << fmt(b[j]) << ',' << fmt(err) << "\n";
      l1 += q.wx[j] * err;
      linf = std::max(linf, err);
      max_a = std::max(max_a, a[j]);
      max_b = std::max(max_b, b[j]);
    }
    metrics_csv << k << ',' << fmt(l1) << ',' << fmt(linf) << ','
                << fmt(observe_expectation(a, run.grid, q)) << ','
                << fmt(observe_expectation(b, run.grid, q)) << ','
                << fmt(observe_variance(a, run.grid, q)) << ','
                << fmt(observe_variance(b, run.grid, q)) << ',' << fmt(max_a)
                << ',' << fmt(max_b) << "\n";
  }
  fs::create_directories(out_dir);
  atomic_write(fs::path(out_dir) / "comparison.csv", long_csv.str());
  atomic_write(fs::path(out_dir) / "metrics.csv", metrics_csv.str());
}

}  // namespace wgf
