#include "ghjb/controller.hpp"

#include <chrono>
#include <stdexcept>

namespace ghjb {

GhjbCbfController::GhjbCbfController(ValueFunction vf, ControlAffineModel model,
                                     std::vector<BarrierSpec> barriers)
    : vf_(std::move(vf)), model_(std::move(model)), barriers_(std::move(barriers)) {
  if (vf_.offline_indices != model_.offline_indices) {
    throw std::invalid_argument("controller: value function offline states do not match model");
  }
  if (vf_.basis.nvars != model_.n_offline()) {
    throw std::invalid_argument("controller: value function dimension mismatch");
  }
  grad_polys_ = vf_.polynomial().gradient();
  Rinv_ = model_.R.llt().solve(Eigen::MatrixXd::Identity(model_.m, model_.m));
  for (const BarrierSpec& b : barriers_) {
    if (const auto* box = std::get_if<IntegratorBoxSpec>(&b)) {
      validate_integrator_box(*box, model_);
    }
  }
}

Eigen::VectorXd GhjbCbfController::lifted_value_gradient(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd x_off = model_.offline_state(x);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(model_.n);
  for (int k = 0; k < model_.n_offline(); ++k) {
    full[model_.offline_indices[static_cast<std::size_t>(k)]] =
        grad_polys_[static_cast<std::size_t>(k)].evaluate(x_off);
  }
  return full;
}

QuadraticProgram GhjbCbfController::build_qp(const Eigen::VectorXd& x) const {
  if (x.size() != model_.n || !x.allFinite()) {
    throw std::invalid_argument("build_qp: state must be finite with model dimension");
  }
  const int m = model_.m;
  const Eigen::MatrixXd g = model_.g_num(x);
  const Eigen::VectorXd c = g.transpose() * lifted_value_gradient(x);

  std::vector<LinearUConstraint> rows;
  for (const BarrierSpec& b : barriers_) {
    for (auto& r : compile_constraints(b, x, model_)) rows.push_back(std::move(r));
  }

  const int k = 2 * m + static_cast<int>(rows.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(k, m);
  Eigen::VectorXd h(k);
  for (int i = 0; i < m; ++i) {  // u <= u_max
    G(i, i) = 1.0;
    h[i] = model_.u_max[i];
  }
  for (int i = 0; i < m; ++i) {  // -u <= -u_min
    G(m + i, i) = -1.0;
    h[m + i] = -model_.u_min[i];
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {  // a'u >= b  ->  -a'u <= -b
    G.row(2 * m + static_cast<int>(r)) = -rows[r].a.transpose();
    h[2 * m + static_cast<int>(r)] = -rows[r].b;
  }
  return QuadraticProgram(2.0 * model_.R, c, std::move(G), std::move(h));
}

std::pair<Eigen::VectorXd, StepReport> GhjbCbfController::compute_control(
    const Eigen::VectorXd& x) {
  StepReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  const QuadraticProgram qp = build_qp(x);
  const QPSolution sol = solver_.solve(qp, warm_active_);
  rep.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  rep.qp_status = sol.status;
  if (sol.status == QPStatus::kOptimal) {
    rep.active_set = sol.active_set;
    warm_active_ = sol.active_set;
    last_u_ = sol.u;
    have_last_u_ = true;
    return {sol.u, rep};
  }

  // No feasible input: hold the last one rather than silently clamping, and
  // flag the step so downstream checks fail loudly.
  rep.infeasible = true;
  Eigen::VectorXd u = have_last_u_
                          ? last_u_
                          : Eigen::VectorXd::Zero(model_.m).cwiseMax(model_.u_min).cwiseMin(model_.u_max);
  return {u, rep};
}

Eigen::VectorXd GhjbCbfController::unconstrained_control(const Eigen::VectorXd& x) const {
  return -0.5 * Rinv_ * (model_.g_num(x).transpose() * lifted_value_gradient(x));
}

}  // namespace ghjb
