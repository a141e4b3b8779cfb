#pragma once

#include <string>
#include <vector>

namespace ghjb::cli {

// Exit codes shared by every subcommand:
//   0 success, 1 acceptance failure (non-convergence, margin violation,
//   infeasible step, divergence), 2 usage/schema/file error.

int cmd_fit_value(const std::string& config_path, const std::string& value_fn_override,
                  const std::string& out_dir_override);

int cmd_simulate(const std::string& config_path, const std::string& value_fn_path,
                 const std::string& out_dir_override);

int cmd_sweep_alpha(const std::string& config_path, const std::vector<double>& alphas,
                    const std::string& value_fn_path, const std::string& out_dir_override);

int cmd_audit(const std::string& config_path, const std::string& csv_path);

int cmd_echo_params(const std::string& config_path);

// Batch wrappers; with parallel=true independent scenarios run concurrently
// with isolated outputs. A shared value-function override is only valid for
// a single config.
int cmd_fit_value_many(const std::vector<std::string>& configs,
                       const std::string& value_fn_override, const std::string& out_dir_override,
                       bool parallel);
int cmd_simulate_many(const std::vector<std::string>& configs, const std::string& value_fn_path,
                      const std::string& out_dir_override, bool parallel);

}  // namespace ghjb::cli
