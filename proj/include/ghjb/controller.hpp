#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ghjb/cbf.hpp"
#include "ghjb/dynamics.hpp"
#include "ghjb/qp_solver.hpp"
#include "ghjb/sga.hpp"

namespace ghjb {

struct StepReport {
  std::vector<int> active_set;
  QPStatus qp_status = QPStatus::kOptimal;
  bool infeasible = false;  // QP had no solution; the held input was used
  double solve_seconds = 0.0;
};

// Online layer: at each state, minimize the input-dependent part of the
// Hamiltonian of the precomputed value function subject to compiled barrier
// rows and input bounds. Stateless except for QP warm start and the
// held-input fallback.
class GhjbCbfController {
 public:
  GhjbCbfController(ValueFunction vf, ControlAffineModel model,
                    std::vector<BarrierSpec> barriers);

  // H = 2R, c = g(x)' grad V (gradient zero-padded from the offline states).
  // Rows: input box (upper then lower), then barrier rows in declaration
  // order, each as -a'u <= -b.
  QuadraticProgram build_qp(const Eigen::VectorXd& x) const;

  std::pair<Eigen::VectorXd, StepReport> compute_control(const Eigen::VectorXd& x);

  // u = -1/2 R^{-1} g(x)' grad V(x), no constraints
  Eigen::VectorXd unconstrained_control(const Eigen::VectorXd& x) const;

  Eigen::VectorXd lifted_value_gradient(const Eigen::VectorXd& x) const;

  const ControlAffineModel& model() const { return model_; }
  const std::vector<BarrierSpec>& barriers() const { return barriers_; }
  const ValueFunction& value_function() const { return vf_; }

 private:
  ValueFunction vf_;
  std::vector<Polynomial> grad_polys_;
  ControlAffineModel model_;
  std::vector<BarrierSpec> barriers_;
  Eigen::MatrixXd Rinv_;

  ActiveSetSolver solver_;
  std::vector<int> warm_active_;
  Eigen::VectorXd last_u_;
  bool have_last_u_ = false;
};

}  // namespace ghjb
