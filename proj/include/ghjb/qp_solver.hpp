#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ghjb {

// min 1/2 u'Hu + c'u  s.t.  G u <= h, with H symmetric positive definite
// (validated at construction). Box bounds are encoded as rows of G.
struct QuadraticProgram {
  Eigen::MatrixXd H;
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;

  QuadraticProgram(Eigen::MatrixXd H_, Eigen::VectorXd c_,
                   Eigen::MatrixXd G_, Eigen::VectorXd h_);

  int nvars() const { return static_cast<int>(c.size()); }
  int nconstraints() const { return static_cast<int>(h.size()); }
};

enum class QPStatus { kOptimal, kInfeasible, kIterationLimit };

const char* to_string(QPStatus s);

struct QPSolution {
  Eigen::VectorXd u;
  std::vector<int> active_set;  // sorted row indices
  Eigen::VectorXd lambda;       // size k; zero off the active set
  double objective = 0.0;
  QPStatus status = QPStatus::kInfeasible;
};

// Primal active-set method. Holds mutable workspace, so use one instance per
// thread. The feasibility tolerance is 1e-9 absolute (problem data is O(1));
// ties for the entering constraint break toward the lowest row index.
class ActiveSetSolver {
 public:
  QPSolution solve(const QuadraticProgram& qp);
  // Previous active set seeds the solve (rows outside [0, k) are ignored).
  QPSolution solve(const QuadraticProgram& qp, const std::vector<int>& warm_active);

  static constexpr double kFeasTol = 1e-9;

 private:
  QPSolution run_primal(const QuadraticProgram& qp,
                        const Eigen::LLT<Eigen::MatrixXd>& llt,
                        Eigen::VectorXd x, std::vector<int> working);
  // Returns a feasible point, or an infeasible/iteration-limit marker.
  QPSolution find_feasible_point(const QuadraticProgram& qp);
};

// One-shot convenience (cold start).
QPSolution solve_active_set(const QuadraticProgram& qp);

// Independent test oracle: enumerates every subset of constraint rows as a
// candidate active set, solves the equality KKT system, and keeps the
// feasible and dual-feasible candidate with the least objective. Exhaustive;
// requires at most 16 rows.
QPSolution solve_enumeration_oracle(const QuadraticProgram& qp);

struct KktReport {
  double stationarity = 0.0;    // ||Hu + c + G'lambda||_inf
  double primal = 0.0;          // max(Gu - h), negative when interior
  double dual = 0.0;            // min lambda
  double complementarity = 0.0; // max |lambda_i (Gu - h)_i|
  bool pass = false;
};

KktReport kkt_check(const QuadraticProgram& qp, const QPSolution& sol,
                    double tol = 1e-8);

}  // namespace ghjb
