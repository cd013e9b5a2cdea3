#include "wgf/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace wgf {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& field, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& field, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& field, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(field, "expected true/false, got '" + v + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  // handler table: section.key -> setter
  std::map<std::string, std::function<void(const std::string&, const std::string&)>> set;

  set["problem.kind"] = [&](const std::string& f, const std::string& v) {
    if (v == "pme") c.problem = Problem::pme;
    else if (v == "chemotaxis") c.problem = Problem::chemotaxis;
    else if (v == "custom") c.problem = Problem::custom;
    else throw ConfigError(f, "unknown problem '" + v + "'");
  };
  set["grid.left"] = [&](const std::string& f, const std::string& v) { c.left = parse_double(f, v); };
  set["grid.right"] = [&](const std::string& f, const std::string& v) { c.right = parse_double(f, v); };
  set["grid.nx"] = [&](const std::string& f, const std::string& v) { c.nx = static_cast<int>(parse_long(f, v)); };
  set["grid.nt"] = [&](const std::string& f, const std::string& v) { c.nt = static_cast<int>(parse_long(f, v)); };
  set["scheme.tau"] = [&](const std::string& f, const std::string& v) { c.tau = parse_double(f, v); };
  set["scheme.n_jko"] = [&](const std::string& f, const std::string& v) { c.n_jko = static_cast<int>(parse_long(f, v)); };
  set["solver.lambda"] = [&](const std::string& f, const std::string& v) { c.lambda = parse_double(f, v); };
  set["solver.sigma"] = [&](const std::string& f, const std::string& v) {
    if (v == "auto") {
      c.sigma_auto = true;
      c.sigma = 0.0;
    } else {
      c.sigma_auto = false;
      c.sigma = parse_double(f, v);
    }
  };
  set["solver.it_max"] = [&](const std::string& f, const std::string& v) { c.it_max = parse_long(f, v); };
  set["solver.tol"] = [&](const std::string& f, const std::string& v) { c.tol = parse_double(f, v); };
  set["solver.delta_div"] = [&](const std::string& f, const std::string& v) { c.deltas[0] = parse_double(f, v); };
  set["solver.delta_flux"] = [&](const std::string& f, const std::string& v) { c.deltas[1] = parse_double(f, v); };
  set["solver.delta_mass"] = [&](const std::string& f, const std::string& v) { c.deltas[2] = parse_double(f, v); };
  set["solver.delta_init"] = [&](const std::string& f, const std::string& v) { c.deltas[3] = parse_double(f, v); };
  set["solver.first_slice_momentum"] = [&](const std::string& f, const std::string& v) { c.first_slice_momentum = parse_double(f, v); };
  set["energy.kind"] = [&](const std::string& f, const std::string& v) {
    if (v == "pme") c.energy_kind = EnergyKind::pme;
    else if (v == "chemotaxis") c.energy_kind = EnergyKind::chemotaxis;
    else throw ConfigError(f, "unknown energy '" + v + "'");
  };
  set["energy.m"] = [&](const std::string& f, const std::string& v) { c.m_exponent = parse_double(f, v); };
  set["energy.chi"] = [&](const std::string& f, const std::string& v) { c.chi = parse_double(f, v); };
  set["energy.kernel_dim"] = [&](const std::string& f, const std::string& v) { c.kernel_dim = static_cast<int>(parse_long(f, v)); };
  set["initial.kind"] = [&](const std::string& f, const std::string& v) {
    if (v == "barenblatt") c.initial_kind = InitialKind::barenblatt;
    else if (v == "gaussian_two_bump") c.initial_kind = InitialKind::gaussian_two_bump;
    else if (v == "file") c.initial_kind = InitialKind::file;
    else throw ConfigError(f, "unknown initial condition '" + v + "'");
  };
  set["initial.x_shift"] = [&](const std::string& f, const std::string& v) { c.x_shift = parse_double(f, v); };
  set["initial.t_shift"] = [&](const std::string& f, const std::string& v) { c.t_shift = parse_double(f, v); };
  set["initial.scale_to_truth_mass"] = [&](const std::string& f, const std::string& v) { c.scale_to_truth_mass = parse_bool(f, v); };
  set["initial.eta"] = [&](const std::string& f, const std::string& v) { c.eta = parse_double(f, v); };
  set["initial.path"] = [&](const std::string&, const std::string& v) { c.initial_file = v; };
  set["truth.m"] = [&](const std::string& f, const std::string& v) { c.truth_m = parse_double(f, v); };
  set["truth.c"] = [&](const std::string& f, const std::string& v) { c.truth_c = parse_double(f, v); };
  set["truth.t0"] = [&](const std::string& f, const std::string& v) { c.truth_t0 = parse_double(f, v); };
  set["measurements.use_expectation"] = [&](const std::string& f, const std::string& v) { c.use_expectation = parse_bool(f, v); };
  set["measurements.use_variance"] = [&](const std::string& f, const std::string& v) { c.use_variance = parse_bool(f, v); };
  set["measurements.theta"] = [&](const std::string& f, const std::string& v) { c.theta = parse_double(f, v); };
  set["measurements.source"] = [&](const std::string& f, const std::string& v) {
    if (v == "analytic") c.data_source = DataSource::analytic;
    else if (v == "file") c.data_source = DataSource::file;
    else throw ConfigError(f, "unknown data source '" + v + "'");
  };
  set["measurements.data_file"] = [&](const std::string&, const std::string& v) { c.data_file = v; };
  set["measurements.noise_sigma"] = [&](const std::string& f, const std::string& v) { c.noise_sigma = parse_double(f, v); };
  set["measurements.seed"] = [&](const std::string& f, const std::string& v) { c.seed = static_cast<unsigned>(parse_long(f, v)); };
  set["output.directory"] = [&](const std::string&, const std::string& v) { c.out_dir = v; };
  set["output.trace"] = [&](const std::string& f, const std::string& v) { c.trace = parse_bool(f, v); };

  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno), "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string field = section.empty() ? key : section + "." + key;
    const auto it = set.find(field);
    if (it == set.end()) throw ConfigError(field, "unknown key");
    it->second(field, value);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[problem]\n";
  out << "kind = "
      << (c.problem == Problem::pme ? "pme"
          : c.problem == Problem::chemotaxis ? "chemotaxis" : "custom")
      << "\n\n";
  out << "[grid]\n";
  out << "left = " << fmt(c.left) << "\n";
  out << "right = " << fmt(c.right) << "\n";
  out << "nx = " << c.nx << "\n";
  out << "nt = " << c.nt << "\n\n";
  out << "[scheme]\n";
  out << "tau = " << fmt(c.tau) << "\n";
  out << "n_jko = " << c.n_jko << "\n\n";
  out << "[solver]\n";
  out << "lambda = " << fmt(c.lambda) << "\n";
  out << "sigma = " << (c.sigma_auto ? "auto" : fmt(c.sigma)) << "\n";
  out << "it_max = " << c.it_max << "\n";
  out << "tol = " << fmt(c.tol) << "\n";
  out << "delta_div = " << fmt(c.deltas[0]) << "\n";
  out << "delta_flux = " << fmt(c.deltas[1]) << "\n";
  out << "delta_mass = " << fmt(c.deltas[2]) << "\n";
  out << "delta_init = " << fmt(c.deltas[3]) << "\n";
  out << "first_slice_momentum = " << fmt(c.first_slice_momentum) << "\n\n";
  out << "[energy]\n";
  out << "kind = " << (c.energy_kind == EnergyKind::pme ? "pme" : "chemotaxis")
      << "\n";
  out << "m = " << fmt(c.m_exponent) << "\n";
  out << "chi = " << fmt(c.chi) << "\n";
  out << "kernel_dim = " << c.kernel_dim << "\n\n";
  out << "[initial]\n";
  out << "kind = "
      << (c.initial_kind == InitialKind::barenblatt ? "barenblatt"
          : c.initial_kind == InitialKind::gaussian_two_bump
              ? "gaussian_two_bump"
              : "file")
      << "\n";
  out << "x_shift = " << fmt(c.x_shift) << "\n";
  out << "t_shift = " << fmt(c.t_shift) << "\n";
  out << "scale_to_truth_mass = " << (c.scale_to_truth_mass ? "true" : "false")
      << "\n";
  out << "eta = " << fmt(c.eta) << "\n";
  if (!c.initial_file.empty()) out << "path = " << c.initial_file << "\n";
  out << "\n[truth]\n";
  out << "m = " << fmt(c.truth_m) << "\n";
  out << "c = " << fmt(c.truth_c) << "\n";
  out << "t0 = " << fmt(c.truth_t0) << "\n\n";
  out << "[measurements]\n";
  out << "use_expectation = " << (c.use_expectation ? "true" : "false") << "\n";
  out << "use_variance = " << (c.use_variance ? "true" : "false") << "\n";
  out << "theta = " << fmt(c.theta) << "\n";
  out << "source = "
      << (c.data_source == DataSource::analytic ? "analytic" : "file") << "\n";
  if (!c.data_file.empty()) out << "data_file = " << c.data_file << "\n";
  out << "noise_sigma = " << fmt(c.noise_sigma) << "\n";
  out << "seed = " << c.seed << "\n\n";
  out << "[output]\n";
  out << "directory = " << c.out_dir << "\n";
  out << "trace = " << (c.trace ? "true" : "false") << "\n";
  return out.str();
}

void RunConfig::validate() const {
  if (!(left < right)) throw ConfigError("grid.left", "requires left < right");
  if (nx < 2) throw ConfigError("grid.nx", "requires nx >= 2");
  if (nt < 1) throw ConfigError("grid.nt", "requires nt >= 1");
  if (!(tau > 0.0)) throw ConfigError("scheme.tau", "requires tau > 0");
  if (n_jko < 1) throw ConfigError("scheme.n_jko", "requires n_jko >= 1");
  if (!(lambda > 0.0)) throw ConfigError("solver.lambda", "requires lambda > 0");
  if (!sigma_auto && !(sigma > 0.0))
    throw ConfigError("solver.sigma", "requires sigma > 0 or 'auto'");
  if (it_max < 1) throw ConfigError("solver.it_max", "requires it_max >= 1");
  if (!(tol > 0.0)) throw ConfigError("solver.tol", "requires tol > 0");
  for (double d : deltas)
    if (d < 0.0) throw ConfigError("solver.delta_*", "requires deltas >= 0");
  if (problem == Problem::pme && energy_kind != EnergyKind::pme)
    throw ConfigError("energy.kind", "problem pme requires energy kind pme");
  if (problem == Problem::chemotaxis && energy_kind != EnergyKind::chemotaxis)
    throw ConfigError("energy.kind",
                      "problem chemotaxis requires energy kind chemotaxis");
  if (energy_kind == EnergyKind::pme && m_exponent < 1.0)
    throw ConfigError("energy.m", "requires m >= 1");
  if (energy_kind == EnergyKind::chemotaxis && !(chi > 0.0))
    throw ConfigError("energy.chi", "requires chi > 0");
  if (kernel_dim < 1) throw ConfigError("energy.kernel_dim", "requires >= 1");
  if (initial_kind == InitialKind::barenblatt && t_shift + truth_t0 <= 0.0)
    throw ConfigError("initial.t_shift", "requires t_shift + t0 > 0");
  if (initial_kind == InitialKind::gaussian_two_bump && !(eta > 0.0))
    throw ConfigError("initial.eta", "requires eta > 0");
  if (initial_kind == InitialKind::file) {
    if (initial_file.empty())
      throw ConfigError("initial.path", "required for initial kind 'file'");
    if (!std::filesystem::exists(initial_file))
      throw ConfigError("initial.path", "file not found: " + initial_file);
  }
  if (!(truth_m > 1.0)) throw ConfigError("truth.m", "requires m > 1");
  if (!(truth_c > 0.0)) throw ConfigError("truth.c", "requires c > 0");
  if (!(truth_t0 > 0.0)) throw ConfigError("truth.t0", "requires t0 > 0");
  const bool any_obs = use_expectation || use_variance;
  if (any_obs && !(theta > 0.0))
    throw ConfigError("measurements.theta", "requires theta > 0");
  if (any_obs && data_source == DataSource::file) {
    if (data_file.empty())
      throw ConfigError("measurements.data_file", "required for source 'file'");
    if (!std::filesystem::exists(data_file))
      throw ConfigError("measurements.data_file", "file not found: " + data_file);
  }
  if (noise_sigma < 0.0)
    throw ConfigError("measurements.noise_sigma", "requires >= 0");
  if (out_dir.empty()) throw ConfigError("output.directory", "must not be empty");
}

}  // namespace wgf
