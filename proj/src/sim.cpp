#include "ghjb/sim.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ghjb/format.hpp"

namespace ghjb {

int TrajectoryLog::infeasible_steps() const {
  int n_bad = 0;
  for (const auto& s : samples) n_bad += s.infeasible ? 1 : 0;
  return n_bad;
}

Eigen::VectorXd rk4_step(const ControlAffineModel& model, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double h) {
  const auto rate = [&](const Eigen::VectorXd& s) -> Eigen::VectorXd {
    return model.f_num(s) + model.g_num(s) * u;
  };
  const Eigen::VectorXd k1 = rate(x);
  const Eigen::VectorXd k2 = rate(x + 0.5 * h * k1);
  const Eigen::VectorXd k3 = rate(x + 0.5 * h * k2);
  const Eigen::VectorXd k4 = rate(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

double state_cost(const ControlAffineModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd xo = model.offline_state(x);
  return xo.dot(model.Q * xo);
}

std::vector<double> psi_row(const std::vector<BarrierSpec>& barriers,
                            const Eigen::VectorXd& x, const ControlAffineModel& model) {
  std::vector<double> out;
  for (const auto& b : barriers) {
    for (double v : barrier_psi_values(b, x, model)) out.push_back(v);
  }
  return out;
}

}  // namespace

TrajectoryLog simulate(const ControlAffineModel& model, GhjbCbfController& controller,
                       const Eigen::VectorXd& x0, const SimulationConfig& cfg) {
  if (!(cfg.dt_sample > 0.0) || cfg.substeps < 1 || !(cfg.horizon > 0.0)) {
    throw std::invalid_argument("simulate: bad configuration");
  }
  if (x0.size() != model.n || !x0.allFinite()) {
    throw std::invalid_argument("simulate: initial state must be finite with model dimension");
  }

  TrajectoryLog log;
  log.n = model.n;
  log.m = model.m;
  log.substeps = cfg.substeps;
  log.dt_sample = cfg.dt_sample;
  for (std::size_t b = 0; b < controller.barriers().size(); ++b) {
    for (auto& lbl : barrier_psi_labels(controller.barriers()[b], static_cast<int>(b))) {
      log.psi_labels.push_back(std::move(lbl));
    }
  }

  const double h = cfg.dt_sample / cfg.substeps;
  const int max_samples = static_cast<int>(std::llround(cfg.horizon / cfg.dt_sample));
  Eigen::VectorXd x = x0;
  int quiet_samples = 0;

  for (int k = 0; k < max_samples; ++k) {
    const double tk = k * cfg.dt_sample;
    auto [u, rep] = controller.compute_control(x);
    log.controller_seconds += rep.solve_seconds;

    SampleRecord rec;
    rec.t = tk;
    rec.u = u;
    rec.input_cost = u.dot(model.R * u);
    rec.active_set = rep.active_set;
    rec.infeasible = rep.infeasible;
    rec.solve_seconds = rep.solve_seconds;
    log.samples.push_back(std::move(rec));
    const double ucost = log.samples.back().input_cost;

    if (k == 0) {
      log.times.push_back(0.0);
      log.states.push_back(x);
      log.q_costs.push_back(state_cost(model, x));
      log.stage_costs.push_back(log.q_costs.back() + ucost);
      log.psi_rows.push_back(psi_row(controller.barriers(), x, model));
    }

    const auto ti0 = std::chrono::steady_clock::now();
    for (int s = 1; s <= cfg.substeps; ++s) {
      x = rk4_step(model, x, u, h);
      if (!x.allFinite()) {
        log.diverged = true;
        log.diagnostic = "non-finite state at t = " + format_double(tk + s * h) +
                         " (sample " + std::to_string(k) + ", substep " + std::to_string(s) + ")";
        log.integration_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - ti0).count();
        return log;
      }
      log.times.push_back(tk + s * h);
      log.states.push_back(x);
      log.q_costs.push_back(state_cost(model, x));
      log.stage_costs.push_back(log.q_costs.back() + ucost);
      log.psi_rows.push_back(psi_row(controller.barriers(), x, model));
    }
    log.integration_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ti0).count();

    quiet_samples = (log.stage_costs.back() < cfg.stop_tol) ? quiet_samples + 1 : 0;
    if (quiet_samples >= 10) break;
  }
  return log;
}

double accumulate_cost(const TrajectoryLog& log) {
  if (log.rows() == 0) throw std::invalid_argument("accumulate_cost: empty log");
  double J = 0.0;
  for (int i = 0; i + 1 < log.rows(); ++i) {
    const double hi = log.times[static_cast<std::size_t>(i + 1)] - log.times[static_cast<std::size_t>(i)];
    const int s = log.sample_of_row(i + 1);
    J += 0.5 * hi * (log.q_costs[static_cast<std::size_t>(i)] + log.q_costs[static_cast<std::size_t>(i + 1)]);
    J += hi * log.samples[static_cast<std::size_t>(s)].input_cost;
  }
  return J;
}

MarginReport constraint_audit(const TrajectoryLog& log) {
  MarginReport rep;
  rep.overall_min = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < log.psi_labels.size(); ++c) {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& row : log.psi_rows) mn = std::min(mn, row[c]);
    rep.min_by_label.emplace_back(log.psi_labels[c], mn);
    rep.overall_min = std::min(rep.overall_min, mn);
  }
  if (log.psi_labels.empty()) rep.overall_min = 0.0;
  rep.pass = rep.overall_min >= -1e-6;
  return rep;
}

void write_csv(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trajectory CSV for writing: " + path);

  out << "t";
  for (int i = 0; i < log.n; ++i) out << ",x" << i;
  for (int i = 0; i < log.m; ++i) out << ",u" << i;
  out << ",stage_cost";
  for (const auto& lbl : log.psi_labels) out << "," << lbl;
  out << ",infeasible\n";

  for (int r = 0; r < log.rows(); ++r) {
    const auto& s = log.samples[static_cast<std::size_t>(log.sample_of_row(r))];
    out << format_sig17(log.times[static_cast<std::size_t>(r)]);
    for (int i = 0; i < log.n; ++i) out << "," << format_sig17(log.states[static_cast<std::size_t>(r)][i]);
    for (int i = 0; i < log.m; ++i) out << "," << format_sig17(s.u[i]);
    out << "," << format_sig17(log.stage_costs[static_cast<std::size_t>(r)]);
    for (double v : log.psi_rows[static_cast<std::size_t>(r)]) out << "," << format_sig17(v);
    out << "," << (s.infeasible ? 1 : 0) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV: " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("bad numeric cell '" + cell + "' at " + path + ":" +
                                 std::to_string(lineno));
      }
    }
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("wrong column count at " + path + ":" + std::to_string(lineno));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace ghjb
