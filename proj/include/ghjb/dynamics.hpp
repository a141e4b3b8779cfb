#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ghjb/polynomial.hpp"

namespace ghjb {

Eigen::Matrix3d skew(const Eigen::Vector3d& a);

// Rodrigues-parameter kinematics matrix, sigma_dot = G(sigma) * omega.
Eigen::Matrix3d mrp_kinematics_matrix(const Eigen::Vector3d& sigma);

// Input-affine system x_dot = f(x) + g(x) u with quadratic running cost
// x_off' Q x_off + u' R u, input box bounds, and a polynomial form of the
// dynamics restricted to the offline state subset (the states the value
// function depends on). Immutable after construction.
struct ControlAffineModel {
  int n = 0;  // state dimension
  int m = 0;  // input dimension

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f_num;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> g_num;

  Eigen::MatrixXd Q;  // n_off x n_off, PSD
  Eigen::MatrixXd R;  // m x m, PD
  Eigen::VectorXd u_min;
  Eigen::VectorXd u_max;

  std::vector<int> offline_indices;          // subset of {0..n-1}
  std::vector<Polynomial> f_poly;            // n_off entries over n_off vars
  std::vector<std::vector<Polynomial>> g_poly;  // n_off x m
  Box omega_box;                             // per offline variable

  int n_offline() const { return static_cast<int>(offline_indices.size()); }
  Eigen::VectorXd offline_state(const Eigen::VectorXd& x) const;
  // x_off' Q x_off as a polynomial over the offline variables
  Polynomial state_cost_poly() const;

  // throws if weights/bounds/dimensions are inconsistent
  void validate() const;
};

// 1D hovercraft: double integrator, state (p, v), thrust input.
ControlAffineModel hovercraft_model();

Eigen::Matrix3d default_inertia();

// Spacecraft attitude with three reaction wheels on the principal axes.
// State (sigma, omega, h_w) in R^9, torque input in R^3. The offline
// polynomial form covers (sigma, omega) with the wheel momentum frozen at
// zero; h_w is handled entirely by the constraint layer.
ControlAffineModel spacecraft_model(const Eigen::Matrix3d& J = default_inertia(),
                                    double u_bound = 0.123);

}  // namespace ghjb
