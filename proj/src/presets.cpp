#include "wgf/presets.hpp"

namespace wgf {

namespace {

RunConfig pme_base() {
  RunConfig c;
  c.problem = Problem::pme;
  c.energy_kind = EnergyKind::pme;
  c.left = -1.0;
  c.right = 1.0;
  c.nx = 100;
  c.nt = 10;
  c.tau = 5e-4;
  c.n_jko = 33;
  c.lambda = 0.2;
  c.sigma_auto = true;
  c.it_max = 200000;
  c.tol = 1e-5;
  c.deltas = {1e-5, 1e-5, 1e-5, 1e-5};
  c.m_exponent = 2.0;
  c.initial_kind = InitialKind::barenblatt;
  c.truth_m = 2.0;
  return c;
}

RunConfig chemo_base() {
  RunConfig c = pme_base();
  c.problem = Problem::chemotaxis;
  c.energy_kind = EnergyKind::chemotaxis;
  c.tau = 1e-3;
  // desk-scale horizon: the chi = 10 collapse to grid-scale peaks completes
  // within ten steps, after which the discrete maximum only saturates
  c.n_jko = 11;
  c.initial_kind = InitialKind::gaussian_two_bump;
  c.eta = 0.2;
  return c;
}

}  // namespace

RunConfig preset(const std::string& name) {
  if (name == "pme-baseline") {
    RunConfig c = pme_base();
    c.out_dir = "pme-baseline";
    return c;
  }
  if (name == "pme-shift-x") {
    RunConfig c = pme_base();
    c.x_shift = 0.1;
    c.use_expectation = true;
    c.theta = 1.0 / 200.0;
    c.out_dir = "pme-shift-x";
    return c;
  }
  if (name == "pme-shift-xt") {
    RunConfig c = pme_base();
    c.x_shift = 0.1;
    c.t_shift = 6.0 * c.tau;
    c.use_expectation = true;
    c.theta = 1.0 / 200.0;
    c.out_dir = "pme-shift-xt";
    return c;
  }
  if (name == "pme-shift-xt-var") {
    RunConfig c = preset("pme-shift-xt");
    c.use_variance = true;
    c.out_dir = "pme-shift-xt-var";
    return c;
  }
  if (name == "pme-wrong-m") {
    RunConfig c = pme_base();
    c.m_exponent = 2.5;
    c.x_shift = 0.1;
    c.t_shift = 6.0 * c.tau;
    c.use_expectation = true;
    c.use_variance = true;
    c.theta = 1.0 / 400.0;
    c.out_dir = "pme-wrong-m";
    return c;
  }
  if (name == "pme-wrong-m-massfix") {
    RunConfig c = preset("pme-wrong-m");
    c.scale_to_truth_mass = true;
    c.out_dir = "pme-wrong-m-massfix";
    return c;
  }
  if (name == "chemo-truth") {
    RunConfig c = chemo_base();
    c.chi = 2.0;
    c.out_dir = "chemo-truth";
    return c;
  }
  if (name == "chemo-blowup") {
    RunConfig c = chemo_base();
    c.chi = 10.0;
    c.out_dir = "chemo-blowup";
    return c;
  }
  if (name == "chemo-da") {
    RunConfig c = chemo_base();
    c.chi = 10.0;
    c.use_expectation = true;
    c.use_variance = true;
    c.theta = 1.0 / 400.0;
    // the variance misfit is quartic in the state; the primal step must be
    // shorter than for the plain runs or the iteration rides a drift instead
    // of settling on the data-consistent minimizer
    c.lambda = 0.05;
    c.data_source = DataSource::file;
    c.data_file = "chemo-truth/observations.csv";
    c.out_dir = "chemo-da";
    return c;
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "pme-baseline",     "pme-shift-x",        "pme-shift-xt",
      "pme-shift-xt-var", "pme-wrong-m",        "pme-wrong-m-massfix",
      "chemo-truth",      "chemo-blowup",       "chemo-da",
      "verify-metric-mm"};
  return names;
}

}  // namespace wgf
