// Command-line front end: fit value functions offline, run closed-loop
// simulations, sweep the box-CBF decay rate, and audit stored trajectories.
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ghjb/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Offline Galerkin value-function fitting and online CBF-constrained QP control"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string value_fn;
  std::string out_dir;
  std::vector<double> alphas;
  std::string traj_csv;
  unsigned seed = 0;
  bool parallel = false;

  auto add_common = [&](CLI::App* sub, bool multi_config) {
    auto* opt = sub->add_option("--config", configs, "scenario config file (JSON)")->required();
    if (!multi_config) opt->expected(1);
    sub->add_option("--out-dir", out_dir, "override the scenario's output directory");
    sub->add_option("--seed", seed, "seed for randomized test utilities");
  };

  CLI::App* fit = app.add_subcommand("fit-value", "run policy iteration and write the value-function file");
  add_common(fit, true);
  fit->add_option("--value-fn", value_fn, "output path for the value-function file");
  fit->add_flag("--parallel", parallel, "run independent scenarios concurrently");

  CLI::App* sim = app.add_subcommand("simulate", "closed-loop run: trajectory CSV plus summary");
  add_common(sim, true);
  sim->add_option("--value-fn", value_fn, "value-function file (default: <out-dir>/value_fn.txt)");
  sim->add_flag("--parallel", parallel, "run independent scenarios concurrently");

  CLI::App* sweep = app.add_subcommand("sweep-alpha", "simulate across box-CBF decay rates");
  add_common(sweep, false);
  sweep->add_option("--alphas", alphas, "list of alpha values")->required();
  sweep->add_option("--value-fn", value_fn, "value-function file (fit in-memory when absent)");

  CLI::App* audit = app.add_subcommand("audit", "recompute barrier values from a stored trajectory");
  add_common(audit, false);
  audit->add_option("--traj", traj_csv, "trajectory CSV to audit")->required();

  CLI::App* echo = app.add_subcommand("echo-params", "print every scenario parameter");
  add_common(echo, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (fit->parsed()) return ghjb::cli::cmd_fit_value_many(configs, value_fn, out_dir, parallel);
  if (sim->parsed()) return ghjb::cli::cmd_simulate_many(configs, value_fn, out_dir, parallel);
  if (sweep->parsed()) return ghjb::cli::cmd_sweep_alpha(configs.at(0), alphas, value_fn, out_dir);
  if (audit->parsed()) return ghjb::cli::cmd_audit(configs.at(0), traj_csv);
  if (echo->parsed()) return ghjb::cli::cmd_echo_params(configs.at(0));
  return 2;
}
