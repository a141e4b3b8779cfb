#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ghjb/dynamics.hpp"

namespace ghjb {

// One affine input inequality a'u >= b; the QP layer negates it into a
// row of Gu <= h.
struct LinearUConstraint {
  Eigen::VectorXd a;
  double b;
};

// Box constraint lo <= x_i <= hi on a state with zero drift and relative
// degree one. Exact (no conservatism) in the alpha -> infinity limit, and
// the admissible-u window at the boundary is independent of alpha.
struct IntegratorBoxSpec {
  int state_index;
  double lo;
  double hi;
  double alpha;
};

// Relative-degree-1 barrier B(x) >= 0 with a user-supplied gradient; Lie
// derivatives are taken against the model's f and g.
struct GenericR1Spec {
  std::function<double(const Eigen::VectorXd&)> B;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradB;
  double alpha1;
};

// Relative-degree-2 barrier: L_g B vanishes identically, so the input
// appears through L_g L_f B. The flow-derivative providers already encode
// the drift, hence no model argument at compile time.
struct HocbfR2Spec {
  std::function<double(const Eigen::VectorXd&)> B;
  std::function<double(const Eigen::VectorXd&)> LfB;
  std::function<Eigen::RowVectorXd(const Eigen::VectorXd&)> LgLfB;
  std::function<double(const Eigen::VectorXd&)> Lf2B;
  double alpha1;
  double alpha2;
};

using BarrierSpec = std::variant<IntegratorBoxSpec, GenericR1Spec, HocbfR2Spec>;

// Checks the zero-drift hypothesis on quasi-random samples; throws if the
// drift row is nonzero or the input row vanishes.
void validate_integrator_box(const IntegratorBoxSpec& spec, const ControlAffineModel& model);

// The two box inequalities, upper then lower. At x_i = hi the upper row
// reduces to g_i'u <= 0 for every alpha.
std::array<LinearUConstraint, 2> integrator_box_constraints(const IntegratorBoxSpec& spec,
                                                            const Eigen::VectorXd& x,
                                                            const ControlAffineModel& model);

LinearUConstraint cbf_r1_constraint(const GenericR1Spec& spec, const Eigen::VectorXd& x,
                                    const ControlAffineModel& model);

LinearUConstraint hocbf_r2_constraint(const HocbfR2Spec& spec, const Eigen::VectorXd& x);

std::vector<LinearUConstraint> compile_constraints(const BarrierSpec& spec,
                                                   const Eigen::VectorXd& x,
                                                   const ControlAffineModel& model);

// psi_k(x) for k < relative degree; the box spec reports both of its
// zeroth-order barrier values.
std::vector<double> barrier_psi_values(const BarrierSpec& spec, const Eigen::VectorXd& x,
                                       const ControlAffineModel& model);
std::vector<std::string> barrier_psi_labels(const BarrierSpec& spec, int barrier_index);

// Rotation matrix (inertial to body) for Rodrigues parameters sigma.
Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& sigma);

// Forbidden-pointing barrier B(sigma) = cos(theta) - b' R(sigma) n for a
// body-frame boresight b, inertial direction n (normalized internally), and
// half-cone angle theta. Relative degree two under the attitude dynamics;
// the returned spec carries analytic flow derivatives for the spacecraft
// model with inertia J (reading sigma, omega, h_w from the 9-state).
HocbfR2Spec pointing_barrier(const Eigen::Vector3d& b_body, const Eigen::Vector3d& n_inertial,
                             double theta, const Eigen::Matrix3d& J,
                             double alpha1 = 1.0, double alpha2 = 1.0);

// Gradient and Hessian of the pointing barrier in sigma; exposed for the
// finite-difference verification suite.
Eigen::Vector3d pointing_barrier_gradient(const Eigen::Vector3d& b_body,
                                          const Eigen::Vector3d& n_inertial, double theta,
                                          const Eigen::Vector3d& sigma);

}  // namespace ghjb
