#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "ghjb/dynamics.hpp"
#include "ghjb/polynomial.hpp"

namespace ghjb {

// Approximate value function V(x) = sum_i c_i m_i(x) over the model's
// offline state subset. Even-degree bases make V(0) = 0 and grad V(0) = 0
// structural.
struct ValueFunction {
  Basis basis;
  Eigen::VectorXd coeffs;
  std::vector<int> offline_indices;

  Polynomial polynomial() const;
  double value(const Eigen::VectorXd& x_off) const;
  Eigen::VectorXd gradient_at(const Eigen::VectorXd& x_off) const;
};

// Feedback u(x) with polynomial components over the offline variables.
struct PolynomialPolicy {
  std::vector<Polynomial> components;

  Eigen::VectorXd evaluate(const Eigen::VectorXd& x_off) const;
};

struct PolicyIterationConfig {
  double tol = 1e-9;
  int max_iter = 50;
  int admissibility_samples = 10000;
};

// Sampled check of the Bellman inequality L(V, u) >= 0; report-only.
struct AdmissibilityReport {
  double min_value = 0.0;
  Eigen::VectorXd worst_point;
  int samples = 0;
  bool pass = false;  // min >= -1e-8
};

struct IterationRecord {
  int iter;          // 0 = evaluation of the initial policy
  double max_delta;  // inf-norm coefficient change (inf at iter 0)
  double v_integral; // integral of V over Omega, exact
};

struct IterationLog {
  std::vector<IterationRecord> records;
  bool converged = false;
  int iterations = 0;  // policy-improvement steps performed
  bool monotone = true;  // v_integral non-increasing across records
  bool value_positive_on_samples = false;
  AdmissibilityReport initial_policy_admissibility;
  double rcond = 0.0;  // reciprocal condition estimate of the last solve
};

// Policy improvement u = -1/2 R^{-1} g' grad V, computed symbolically.
PolynomialPolicy improve_policy(const ValueFunction& V, const ControlAffineModel& model);

// Galerkin policy evaluation: projects the linear value PDE of the fixed
// policy onto the basis, A c = b with
//   A_ji = int_Omega grad(m_i)'(f + g u) m_j dx,
//   b_j  = -int_Omega (q + u'Ru) m_j dx,
// all integrals exact. Throws when A is singular or ill-conditioned (an
// inadmissible policy or deficient basis).
ValueFunction galerkin_evaluate(const ControlAffineModel& model, const PolynomialPolicy& policy,
                                const Basis& basis, double* rcond_out = nullptr);

// Alternates evaluation and improvement until the coefficient vector is
// stationary in the infinity norm.
std::pair<ValueFunction, IterationLog> policy_iteration(const ControlAffineModel& model,
                                                        const Basis& basis,
                                                        const PolynomialPolicy& u0,
                                                        const PolicyIterationConfig& cfg = {});

AdmissibilityReport admissibility_check(const ControlAffineModel& model, const ValueFunction& V,
                                        const PolynomialPolicy& policy, int samples = 10000);

// Value-function file: header (nvars, offline indices, term count) followed
// by one term line per basis monomial, zero coefficients included.
void save_value_function(const ValueFunction& vf, const std::string& path);
ValueFunction load_value_function(const std::string& path);

// CSV: iter,max_delta,v_integral
void write_iteration_log_csv(const IterationLog& log, const std::string& path);

}  // namespace ghjb
