#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ghjb/controller.hpp"
#include "ghjb/dynamics.hpp"

namespace ghjb {

struct SimulationConfig {
  double dt_sample = 0.1;  // 10 Hz control updates
  int substeps = 10;       // RK4 sub-integration per sample
  double horizon = 60.0;
  double stop_tol = 1e-8;  // early stop once the stage cost stays below this
};

struct SampleRecord {
  double t = 0.0;
  Eigen::VectorXd u;
  double input_cost = 0.0;  // u'Ru, constant over the hold interval
  std::vector<int> active_set;
  bool infeasible = false;
  double solve_seconds = 0.0;
};

// Substep-resolution log of one closed-loop run. Row r > 0 belongs to sample
// (r-1)/substeps; row 0 is the initial state under the first held input.
struct TrajectoryLog {
  int n = 0;
  int m = 0;
  int substeps = 1;
  double dt_sample = 0.0;

  std::vector<std::string> psi_labels;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<double> q_costs;                 // x_off' Q x_off per row
  std::vector<double> stage_costs;             // q + held input cost per row
  std::vector<std::vector<double>> psi_rows;   // barrier values per row
  std::vector<SampleRecord> samples;

  bool diverged = false;
  std::string diagnostic;
  double controller_seconds = 0.0;
  double integration_seconds = 0.0;

  int rows() const { return static_cast<int>(times.size()); }
  int sample_of_row(int row) const { return row == 0 ? 0 : (row - 1) / substeps; }
  int infeasible_steps() const;
};

// One classic RK4 step of x_dot = f(x) + g(x) u with the input held constant.
Eigen::VectorXd rk4_step(const ControlAffineModel& model, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double h);

// Zero-order-hold closed loop: the QP controller runs at the sampling rate,
// the plant integrates with RK4 substeps under the held input. Terminates at
// the horizon or after 10 consecutive samples with stage cost below stop_tol.
TrajectoryLog simulate(const ControlAffineModel& model, GhjbCbfController& controller,
                       const Eigen::VectorXd& x0, const SimulationConfig& cfg);

// Trapezoidal quadrature of the stage cost over the substep grid, taking the
// input-cost jump at sample boundaries into account exactly.
double accumulate_cost(const TrajectoryLog& log);

struct MarginReport {
  std::vector<std::pair<std::string, double>> min_by_label;
  double overall_min = 0.0;
  bool pass = false;  // all minima >= -1e-6
};

MarginReport constraint_audit(const TrajectoryLog& log);

// CSV schema: t, x0.., u0.., stage_cost, <psi labels...>, infeasible.
// 17-significant-digit formatting; byte-deterministic for identical logs.
void write_csv(const TrajectoryLog& log, const std::string& path);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv_table(const std::string& path);

}  // namespace ghjb
