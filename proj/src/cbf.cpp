#include "ghjb/cbf.hpp"

#include <cmath>
#include <stdexcept>

#include "ghjb/halton.hpp"

namespace ghjb {

namespace {

constexpr double kDegenerate = 1e-12;

struct PointingGeometry {
  Eigen::Vector3d b;     // boresight, unit, body frame
  Eigen::Vector3d n;     // forbidden direction, unit, inertial frame
  double cos_theta;

  // B = cos(theta) - N/D with N quadratic in sigma and D = 1 + |sigma|^2
  double N(const Eigen::Vector3d& s) const {
    const double ss = s.squaredNorm();
    return (1.0 - ss) * b.dot(n) + 2.0 * b.dot(s) * n.dot(s) - 2.0 * s.dot(n.cross(b));
  }
  Eigen::Vector3d gradN(const Eigen::Vector3d& s) const {
    return -2.0 * b.dot(n) * s + 2.0 * (b * n.dot(s) + n * b.dot(s)) - 2.0 * n.cross(b);
  }
  Eigen::Matrix3d hessN() const {
    return -2.0 * b.dot(n) * Eigen::Matrix3d::Identity() +
           2.0 * (b * n.transpose() + n * b.transpose());
  }

  double B(const Eigen::Vector3d& s) const {
    return cos_theta - N(s) / (1.0 + s.squaredNorm());
  }
  Eigen::Vector3d gradB(const Eigen::Vector3d& s) const {
    const double D = 1.0 + s.squaredNorm();
    return -(gradN(s) / D - 2.0 * N(s) * s / (D * D));
  }
  Eigen::Matrix3d hessB(const Eigen::Vector3d& s) const {
    const double D = 1.0 + s.squaredNorm();
    const double D2 = D * D;
    const Eigen::Vector3d gN = gradN(s);
    const double Nv = N(s);
    Eigen::Matrix3d W2 = hessN() / D;
    W2 -= 2.0 / D2 * (gN * s.transpose() + s * gN.transpose());
    W2 -= 2.0 * Nv / D2 * Eigen::Matrix3d::Identity();
    W2 += 8.0 * Nv / (D2 * D) * s * s.transpose();
    return -W2;
  }
};

}  // namespace

void validate_integrator_box(const IntegratorBoxSpec& spec, const ControlAffineModel& model) {
  if (spec.state_index < 0 || spec.state_index >= model.n) {
    throw std::invalid_argument("integrator box: state index out of range");
  }
  if (!(spec.lo < spec.hi)) throw std::invalid_argument("integrator box: require lo < hi");
  if (!(spec.alpha > 0.0)) throw std::invalid_argument("integrator box: require alpha > 0");

  // Proposition hypothesis: the constrained state has zero drift and a
  // nonvanishing input row.
  const Box unit = symmetric_box(model.n);
  const Box wide = symmetric_box(model.n, 3.0);
  for (std::uint64_t k = 0; k < 80; ++k) {
    const Eigen::VectorXd x = halton_in_box(k, k < 64 ? unit : wide);
    if (std::abs(model.f_num(x)[spec.state_index]) > kDegenerate) {
      throw std::invalid_argument("integrator box: state " + std::to_string(spec.state_index) +
                                  " has nonzero drift; the box CBF reduction does not apply");
    }
    if (model.g_num(x).row(spec.state_index).cwiseAbs().maxCoeff() <= kDegenerate) {
      throw std::invalid_argument("integrator box: input row vanishes at a sample point");
    }
  }
}

std::array<LinearUConstraint, 2> integrator_box_constraints(const IntegratorBoxSpec& spec,
                                                            const Eigen::VectorXd& x,
                                                            const ControlAffineModel& model) {
  const Eigen::VectorXd gi = model.g_num(x).row(spec.state_index).transpose();
  const double xi = x[spec.state_index];
  // upper barrier hi - x_i:  -g_i'u >= -alpha (hi - x_i)
  // lower barrier x_i - lo:   g_i'u >= -alpha (x_i - lo)
  return {LinearUConstraint{-gi, -spec.alpha * (spec.hi - xi)},
          LinearUConstraint{gi, -spec.alpha * (xi - spec.lo)}};
}

LinearUConstraint cbf_r1_constraint(const GenericR1Spec& spec, const Eigen::VectorXd& x,
                                    const ControlAffineModel& model) {
  const Eigen::VectorXd grad = spec.gradB(x);
  const double lfb = grad.dot(model.f_num(x));
  const Eigen::VectorXd lgb = model.g_num(x).transpose() * grad;
  if (lgb.cwiseAbs().maxCoeff() <= kDegenerate) {
    throw std::runtime_error("cbf_r1_constraint: L_g B vanishes (relative degree > 1 at x)");
  }
  return {lgb, -spec.alpha1 * spec.B(x) - lfb};
}

LinearUConstraint hocbf_r2_constraint(const HocbfR2Spec& spec, const Eigen::VectorXd& x) {
  const Eigen::RowVectorXd a = spec.LgLfB(x);
  if (a.cwiseAbs().maxCoeff() <= kDegenerate) {
    throw std::runtime_error("hocbf_r2_constraint: L_g L_f B vanishes (relative degree > 2 at x)");
  }
  const double b = -spec.Lf2B(x) - (spec.alpha1 + spec.alpha2) * spec.LfB(x) -
                   spec.alpha1 * spec.alpha2 * spec.B(x);
  return {a.transpose(), b};
}

std::vector<LinearUConstraint> compile_constraints(const BarrierSpec& spec,
                                                   const Eigen::VectorXd& x,
                                                   const ControlAffineModel& model) {
  return std::visit(
      [&](const auto& s) -> std::vector<LinearUConstraint> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntegratorBoxSpec>) {
          auto rows = integrator_box_constraints(s, x, model);
          return {rows[0], rows[1]};
        } else if constexpr (std::is_same_v<T, GenericR1Spec>) {
          return {cbf_r1_constraint(s, x, model)};
        } else {
          return {hocbf_r2_constraint(s, x)};
        }
      },
      spec);
}

std::vector<double> barrier_psi_values(const BarrierSpec& spec, const Eigen::VectorXd& x,
                                       const ControlAffineModel& model) {
  return std::visit(
      [&](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntegratorBoxSpec>) {
          const double xi = x[s.state_index];
          return {s.hi - xi, xi - s.lo};
        } else if constexpr (std::is_same_v<T, GenericR1Spec>) {
          (void)model;
          return {s.B(x)};
        } else {
          return {s.B(x), s.LfB(x) + s.alpha1 * s.B(x)};
        }
      },
      spec);
}

std::vector<std::string> barrier_psi_labels(const BarrierSpec& spec, int barrier_index) {
  const std::string tag = "b" + std::to_string(barrier_index);
  return std::visit(
      [&](const auto& s) -> std::vector<std::string> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IntegratorBoxSpec>) {
          return {tag + "_psi0_hi", tag + "_psi0_lo"};
        } else if constexpr (std::is_same_v<T, GenericR1Spec>) {
          return {tag + "_psi0"};
        } else {
          return {tag + "_psi0", tag + "_psi1"};
        }
      },
      spec);
}

Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& sigma) {
  const double s = sigma.squaredNorm();
  return ((1.0 - s) * Eigen::Matrix3d::Identity() + 2.0 * sigma * sigma.transpose() -
          2.0 * skew(sigma)) /
         (1.0 + s);
}

HocbfR2Spec pointing_barrier(const Eigen::Vector3d& b_body, const Eigen::Vector3d& n_inertial,
                             double theta, const Eigen::Matrix3d& J, double alpha1,
                             double alpha2) {
  if (!(theta > 0.0 && theta < M_PI / 2.0)) {
    throw std::invalid_argument("pointing_barrier: theta must lie in (0, pi/2)");
  }
  if (std::abs(b_body.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("pointing_barrier: boresight must be a unit vector");
  }
  if (n_inertial.norm() <= kDegenerate) {
    throw std::invalid_argument("pointing_barrier: forbidden direction must be nonzero");
  }
  if (!(alpha1 > 0.0 && alpha2 > 0.0)) {
    throw std::invalid_argument("pointing_barrier: require alpha1, alpha2 > 0");
  }

  const PointingGeometry geom{b_body, n_inertial.normalized(), std::cos(theta)};
  const Eigen::Matrix3d Jinv = J.inverse();

  HocbfR2Spec spec;
  spec.alpha1 = alpha1;
  spec.alpha2 = alpha2;
  spec.B = [geom](const Eigen::VectorXd& x) { return geom.B(x.segment<3>(0)); };
  spec.LfB = [geom](const Eigen::VectorXd& x) {
    const Eigen::Vector3d sig = x.segment<3>(0);
    const Eigen::Vector3d omg = x.segment<3>(3);
    return geom.gradB(sig).dot(mrp_kinematics_matrix(sig) * omg);
  };
  spec.LgLfB = [geom, Jinv](const Eigen::VectorXd& x) -> Eigen::RowVectorXd {
    const Eigen::Vector3d sig = x.segment<3>(0);
    return geom.gradB(sig).transpose() * mrp_kinematics_matrix(sig) * Jinv;
  };
  spec.Lf2B = [geom, J, Jinv](const Eigen::VectorXd& x) {
    const Eigen::Vector3d sig = x.segment<3>(0);
    const Eigen::Vector3d omg = x.segment<3>(3);
    const Eigen::Vector3d hw = x.segment<3>(6);
    const Eigen::Matrix3d G = mrp_kinematics_matrix(sig);
    const Eigen::Vector3d p = geom.gradB(sig);
    const Eigen::Vector3d sigdot = G * omg;
    const Eigen::Vector3d omgdot = -Jinv * (omg.cross(J * omg + hw));
    // d(LfB)/dsigma: Hessian term plus the derivative of G through sigma
    const Eigen::Vector3d dLfB_dsig =
        geom.hessB(sig) * sigdot +
        0.5 * (omg.cross(p) + sig.dot(omg) * p + p.dot(sig) * omg);
    return dLfB_dsig.dot(sigdot) + (G.transpose() * p).dot(omgdot);
  };
  return spec;
}

Eigen::Vector3d pointing_barrier_gradient(const Eigen::Vector3d& b_body,
                                          const Eigen::Vector3d& n_inertial, double theta,
                                          const Eigen::Vector3d& sigma) {
  const PointingGeometry geom{b_body, n_inertial.normalized(), std::cos(theta)};
  return geom.gradB(sigma);
}

}  // namespace ghjb
