#include "ghjb/commands.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "ghjb/controller.hpp"
#include "ghjb/format.hpp"
#include "ghjb/scenario.hpp"

namespace ghjb::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

std::string resolve_out_dir(const ScenarioConfig& cfg, const std::string& override_dir) {
  return override_dir.empty() ? cfg.out_dir : override_dir;
}

std::string default_value_fn_path(const std::string& out_dir) {
  return (fs::path(out_dir) / "value_fn.txt").string();
}

ValueFunction load_value_fn_checked(const std::string& path, const ControlAffineModel& model) {
  if (!fs::exists(path)) {
    throw SchemaError("value-function file not found: " + path);
  }
  ValueFunction vf = load_value_function(path);
  if (vf.offline_indices != model.offline_indices || vf.basis.nvars != model.n_offline()) {
    throw SchemaError("value-function file " + path + " does not match the model's offline states");
  }
  return vf;
}

struct RunResult {
  TrajectoryLog log;
  double cost = 0.0;
  MarginReport margins;
  bool pass = false;
};

RunResult run_closed_loop(const ScenarioConfig& cfg, const ValueFunction& vf,
                          const ControlAffineModel& model) {
  GhjbCbfController controller(vf, model, build_barriers(cfg, model));
  RunResult r;
  r.log = simulate(model, controller, cfg.x0, cfg.simulation);
  r.cost = accumulate_cost(r.log);
  r.margins = constraint_audit(r.log);
  r.pass = !r.log.diverged && r.log.infeasible_steps() == 0 && r.margins.pass;
  return r;
}

void write_summary(const std::string& out_dir, const ScenarioConfig& cfg, const RunResult& r) {
  std::ofstream out(fs::path(out_dir) / "summary.csv");
  out << "scenario,cost,min_margin,infeasible_steps,diverged\n";
  out << cfg.name << "," << format_sig17(r.cost) << "," << format_sig17(r.margins.overall_min)
      << "," << r.log.infeasible_steps() << "," << (r.log.diverged ? 1 : 0) << "\n";
}

void append_results_row(const std::string& out_dir, const ScenarioConfig& cfg, const RunResult& r) {
  const fs::path path = fs::path(out_dir) / "results.csv";
  const bool fresh = !fs::exists(path);
  std::ofstream out(path, std::ios::app);
  if (fresh) out << "scenario,cost,controller_seconds,integration_seconds,min_margin\n";
  out << cfg.name << "," << format_sig17(r.cost) << "," << format_sig17(r.log.controller_seconds)
      << "," << format_sig17(r.log.integration_seconds) << ","
      << format_sig17(r.margins.overall_min) << "\n";
}

void print_run(const ScenarioConfig& cfg, const RunResult& r) {
  std::cout << "scenario: " << cfg.name << "\n";
  std::cout << "  cost J = " << format_sig17(r.cost) << "\n";
  std::cout << "  controller time (s) = " << r.log.controller_seconds
            << ", plant integration time (s) = " << r.log.integration_seconds << "\n";
  for (const auto& [label, mn] : r.margins.min_by_label) {
    std::cout << "  min " << label << " = " << format_sig17(mn) << "\n";
  }
  if (r.log.infeasible_steps() > 0) {
    std::cout << "  WARNING: " << r.log.infeasible_steps() << " infeasible QP steps\n";
  }
  if (r.log.diverged) std::cout << "  ERROR: diverged (" << r.log.diagnostic << ")\n";
  std::cout << "  status: " << (r.pass ? "ok" : "FAILED") << "\n";
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace

int cmd_fit_value(const std::string& config_path, const std::string& value_fn_override,
                  const std::string& out_dir_override) {
  return guarded([&]() {
    const ScenarioConfig cfg = load_scenario(config_path);
    const ControlAffineModel model = build_model(cfg);
    const Basis basis = build_basis(cfg, model);
    const PolynomialPolicy u0 = build_initial_policy(cfg, model);
    const std::string out_dir = resolve_out_dir(cfg, out_dir_override);
    fs::create_directories(out_dir);

    auto [vf, log] = policy_iteration(model, basis, u0, cfg.policy_iteration);
    write_iteration_log_csv(log, (fs::path(out_dir) / "fit_log.csv").string());

    std::cout << "scenario: " << cfg.name << "\n";
    std::cout << "  basis size = " << basis.size() << "\n";
    std::cout << "  iterations = " << log.iterations << ", converged = " << (log.converged ? "yes" : "no")
              << "\n";
    std::cout << "  galerkin rcond = " << format_double(log.rcond) << "\n";
    std::cout << "  integral of V non-increasing = " << (log.monotone ? "yes" : "NO") << "\n";
    std::cout << "  V > 0 on sampled grid = " << (log.value_positive_on_samples ? "yes" : "NO") << "\n";
    std::cout << "  initial-policy admissibility: min L = "
              << format_double(log.initial_policy_admissibility.min_value)
              << (log.initial_policy_admissibility.pass ? " (pass)" : " (sampled negative; warning)")
              << "\n";
    if (!log.converged) {
      std::cerr << "error: policy iteration did not converge within "
                << cfg.policy_iteration.max_iter << " iterations\n";
      return kFailure;
    }

    const std::string vf_path =
        value_fn_override.empty() ? default_value_fn_path(out_dir) : value_fn_override;
    save_value_function(vf, vf_path);
    std::cout << "  wrote " << vf_path << " (" << vf.basis.size() << " coefficients)\n";
    return kOk;
  });
}

int cmd_simulate(const std::string& config_path, const std::string& value_fn_path,
                 const std::string& out_dir_override) {
  return guarded([&]() {
    const ScenarioConfig cfg = load_scenario(config_path);
    const ControlAffineModel model = build_model(cfg);
    const std::string out_dir = resolve_out_dir(cfg, out_dir_override);
    fs::create_directories(out_dir);
    const std::string vf_path =
        value_fn_path.empty() ? default_value_fn_path(out_dir) : value_fn_path;
    const ValueFunction vf = load_value_fn_checked(vf_path, model);

    const RunResult r = run_closed_loop(cfg, vf, model);
    write_csv(r.log, (fs::path(out_dir) / "trajectory.csv").string());
    write_summary(out_dir, cfg, r);
    append_results_row(out_dir, cfg, r);
    print_run(cfg, r);
    return r.pass ? kOk : kFailure;
  });
}

int cmd_sweep_alpha(const std::string& config_path, const std::vector<double>& alphas,
                    const std::string& value_fn_path, const std::string& out_dir_override) {
  return guarded([&]() {
    if (alphas.empty()) throw SchemaError("sweep-alpha: at least one alpha is required");
    ScenarioConfig cfg = load_scenario(config_path);
    bool has_box = false;
    for (const auto& b : cfg.barriers) has_box |= (b.type == "integrator_box");
    if (!has_box) {
      throw SchemaError("sweep-alpha: scenario has no integrator_box barrier to sweep");
    }
    const ControlAffineModel model = build_model(cfg);
    const std::string out_dir = resolve_out_dir(cfg, out_dir_override);
    fs::create_directories(out_dir);

    ValueFunction vf;
    const std::string vf_path =
        value_fn_path.empty() ? default_value_fn_path(out_dir) : value_fn_path;
    if (fs::exists(vf_path)) {
      vf = load_value_fn_checked(vf_path, model);
    } else {
      std::cout << "no value-function file at " << vf_path << "; fitting in-memory\n";
      auto [fit, log] = policy_iteration(model, build_basis(cfg, model),
                                         build_initial_policy(cfg, model), cfg.policy_iteration);
      if (!log.converged) {
        std::cerr << "error: policy iteration did not converge\n";
        return kFailure;
      }
      vf = fit;
    }

    std::ofstream table(fs::path(out_dir) / "alpha_sweep.csv");
    table << "alpha,cost,min_margin\n";
    std::cout << "alpha sweep (" << cfg.name << "):\n";
    bool all_pass = true;
    for (double alpha : alphas) {
      ScenarioConfig swept = cfg;
      for (auto& b : swept.barriers) {
        if (b.type == "integrator_box") b.alpha = alpha;
      }
      const RunResult r = run_closed_loop(swept, vf, model);
      all_pass &= r.pass;
      table << format_sig17(alpha) << "," << format_sig17(r.cost) << ","
            << format_sig17(r.margins.overall_min) << "\n";
      std::cout << "  alpha = " << format_double(alpha) << ": cost = " << format_sig17(r.cost)
                << ", min margin = " << format_sig17(r.margins.overall_min)
                << (r.pass ? "" : "  [FAILED]") << "\n";
    }
    return all_pass ? kOk : kFailure;
  });
}

int cmd_audit(const std::string& config_path, const std::string& csv_path) {
  return guarded([&]() {
    const ScenarioConfig cfg = load_scenario(config_path);
    const ControlAffineModel model = build_model(cfg);
    const std::vector<BarrierSpec> barriers = build_barriers(cfg, model);
    const CsvTable table = read_csv_table(csv_path);

    std::vector<int> state_cols;
    for (int i = 0; i < model.n; ++i) {
      const int c = table.column("x" + std::to_string(i));
      if (c < 0) throw SchemaError(csv_path + ": missing state column x" + std::to_string(i));
      state_cols.push_back(c);
    }
    std::vector<std::string> labels;
    for (std::size_t b = 0; b < barriers.size(); ++b) {
      for (auto& lbl : barrier_psi_labels(barriers[b], static_cast<int>(b))) {
        labels.push_back(std::move(lbl));
      }
    }
    std::vector<int> psi_cols;
    for (const auto& lbl : labels) {
      const int c = table.column(lbl);
      if (c < 0) throw SchemaError(csv_path + ": missing barrier column " + lbl);
      psi_cols.push_back(c);
    }

    std::vector<double> min_psi(labels.size(), std::numeric_limits<double>::infinity());
    int violation_row = -1;
    int mismatch_row = -1;
    double worst_mismatch = 0.0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      Eigen::VectorXd x(model.n);
      for (int i = 0; i < model.n; ++i) {
        x[i] = table.rows[r][static_cast<std::size_t>(state_cols[static_cast<std::size_t>(i)])];
      }
      std::size_t col = 0;
      for (const auto& b : barriers) {
        for (double fresh : barrier_psi_values(b, x, model)) {
          const double logged =
              table.rows[r][static_cast<std::size_t>(psi_cols[col])];
          const double diff = std::abs(fresh - logged);
          if (diff > 1e-9 && mismatch_row < 0) {
            mismatch_row = static_cast<int>(r);
            worst_mismatch = diff;
          }
          if (fresh < min_psi[col]) min_psi[col] = fresh;
          if (fresh < -1e-6 && violation_row < 0) violation_row = static_cast<int>(r);
          ++col;
        }
      }
    }

    std::cout << "audit of " << csv_path << " (" << table.rows.size() << " rows)\n";
    for (std::size_t c = 0; c < labels.size(); ++c) {
      std::cout << "  min " << labels[c] << " = " << format_sig17(min_psi[c]) << "\n";
    }
    bool ok = true;
    if (mismatch_row >= 0) {
      std::cout << "  MISMATCH: recomputed barrier value differs from logged value at row "
                << mismatch_row << " (|diff| = " << format_double(worst_mismatch) << ")\n";
      ok = false;
    }
    if (violation_row >= 0) {
      std::cout << "  VIOLATION: barrier margin below -1e-6 first at row " << violation_row << "\n";
      ok = false;
    }
    std::cout << "  audit: " << (ok ? "pass" : "FAIL") << "\n";
    return ok ? kOk : kFailure;
  });
}

int cmd_echo_params(const std::string& config_path) {
  return guarded([&]() {
    std::cout << echo_params(load_scenario(config_path));
    return kOk;
  });
}

namespace {

template <typename Fn>
int run_many(const std::vector<std::string>& configs, bool parallel, Fn&& one) {
  if (configs.empty()) {
    std::cerr << "error: at least one --config is required\n";
    return kUsage;
  }
  int worst = kOk;
  if (parallel && configs.size() > 1) {
    std::vector<std::future<int>> jobs;
    jobs.reserve(configs.size());
    for (const auto& c : configs) {
      jobs.push_back(std::async(std::launch::async, one, c));
    }
    for (auto& j : jobs) worst = std::max(worst, j.get());
  } else {
    for (const auto& c : configs) worst = std::max(worst, one(c));
  }
  return worst;
}

}  // namespace

int cmd_fit_value_many(const std::vector<std::string>& configs,
                       const std::string& value_fn_override, const std::string& out_dir_override,
                       bool parallel) {
  if (configs.size() > 1 && !value_fn_override.empty()) {
    std::cerr << "error: --value-fn cannot be combined with multiple configs\n";
    return kUsage;
  }
  return run_many(configs, parallel, [&](const std::string& c) {
    return cmd_fit_value(c, value_fn_override, out_dir_override);
  });
}

int cmd_simulate_many(const std::vector<std::string>& configs, const std::string& value_fn_path,
                      const std::string& out_dir_override, bool parallel) {
  if (configs.size() > 1 && !value_fn_path.empty()) {
    std::cerr << "error: --value-fn cannot be combined with multiple configs\n";
    return kUsage;
  }
  return run_many(configs, parallel, [&](const std::string& c) {
    return cmd_simulate(c, value_fn_path, out_dir_override);
  });
}

}  // namespace ghjb::cli
