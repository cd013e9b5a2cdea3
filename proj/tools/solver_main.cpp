#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wgf/minimizing_movement.hpp"
#include "wgf/presets.hpp"
#include "wgf/run_io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

std::vector<int> parse_steps(const std::string& arg) {
  std::vector<int> steps;
  std::istringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      steps.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw wgf::ConfigError("compare.steps", "bad step index '" + tok + "'");
    }
  }
  if (steps.empty())
    throw wgf::ConfigError("compare.steps", "no step indices given");
  return steps;
}

int run_verify(unsigned seed) {
  const wgf::mm::VerificationReport rep = wgf::mm::run_verification_suite(seed);
  std::printf("stability inequality : %d/%d passed\n",
              rep.stability_total - rep.stability_failures, rep.stability_total);
  std::printf("implicit Euler       : %d/%d passed\n",
              rep.euler_total - rep.euler_failures, rep.euler_total);
  std::printf("nudging identity     : %d/%d passed\n",
              rep.nudging_total - rep.nudging_failures, rep.nudging_total);
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"data-assimilated minimizing-movement solver for 1D Wasserstein "
               "gradient flows"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir;
  long seed = -1;
  auto* run = app.add_subcommand("run", "execute one configured run");
  auto* opt_config = run->add_option("--config", config_path, "config file");
  auto* opt_preset = run->add_option("--preset", preset_name, "preset name");
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed, "observation noise seed override");
  opt_config->excludes(opt_preset);

  std::string cmp_a, cmp_b, cmp_steps = "1,2,4,8,16,32", cmp_out = ".";
  auto* compare = app.add_subcommand("compare", "compare a run against a "
                                                "reference run or the analytic "
                                                "solution");
  compare->add_option("--a", cmp_a, "run directory")->required();
  compare->add_option("--b", cmp_b, "reference directory or 'analytic'")
      ->required();
  compare->add_option("--steps", cmp_steps, "comma-separated step indices");
  compare->add_option("--out", cmp_out, "output directory");

  long verify_seed = 7;
  auto* verify = app.add_subcommand(
      "verify", "randomized finite-dimensional verification suite");
  verify->add_option("--seed", verify_seed, "suite seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      wgf::RunConfig config;
      if (*opt_preset) {
        if (preset_name == "verify-metric-mm")
          return run_verify(static_cast<unsigned>(verify_seed));
        config = wgf::preset(preset_name);
      } else if (*opt_config) {
        config = wgf::load_config(config_path);
      } else {
        throw wgf::ConfigError("run", "either --config or --preset is required");
      }
      if (!out_dir.empty()) config.out_dir = out_dir;
      if (seed >= 0) config.seed = static_cast<unsigned>(seed);
      config.validate();
      const wgf::RunResult result = wgf::execute_run(config);
      int not_converged = 0;
      for (bool c : result.trajectory.converged)
        if (!c) ++not_converged;
      std::printf("%d profiles -> %s (sigma %.6g, %.2fs%s)\n",
                  result.trajectory.n_steps(), config.out_dir.c_str(),
                  result.sigma_used, result.wall_seconds,
                  not_converged
                      ? (", " + std::to_string(not_converged) +
                         " steps not converged")
                            .c_str()
                      : "");
      return 0;
    }
    if (*compare) {
      wgf::emit_comparison(cmp_a, cmp_b, parse_steps(cmp_steps), cmp_out);
      std::printf("wrote %s/comparison.csv and %s/metrics.csv\n",
                  cmp_out.c_str(), cmp_out.c_str());
      return 0;
    }
    if (*verify) return run_verify(static_cast<unsigned>(verify_seed));
  } catch (const wgf::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const wgf::SolverDivergence& e) {
    std::cerr << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
