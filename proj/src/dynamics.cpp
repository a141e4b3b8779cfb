#include "ghjb/dynamics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace ghjb {

Eigen::Matrix3d skew(const Eigen::Vector3d& a) {
  Eigen::Matrix3d s;
  s << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
      -a.y(), a.x(), 0.0;
  return s;
}

Eigen::Matrix3d mrp_kinematics_matrix(const Eigen::Vector3d& sigma) {
  return 0.5 * (Eigen::Matrix3d::Identity() + skew(sigma) + sigma * sigma.transpose());
}

Eigen::VectorXd ControlAffineModel::offline_state(const Eigen::VectorXd& x) const {
  Eigen::VectorXd xo(n_offline());
  for (int k = 0; k < n_offline(); ++k) xo[k] = x[offline_indices[static_cast<std::size_t>(k)]];
  return xo;
}

Polynomial ControlAffineModel::state_cost_poly() const {
  const int no = n_offline();
  Polynomial q(no);
  for (int a = 0; a < no; ++a) {
    for (int b = 0; b < no; ++b) {
      if (Q(a, b) == 0.0) continue;
      std::vector<int> e(static_cast<std::size_t>(no), 0);
      e[static_cast<std::size_t>(a)] += 1;
      e[static_cast<std::size_t>(b)] += 1;
      q.add_term(Monomial(std::move(e)), Q(a, b));
    }
  }
  return q;
}

void ControlAffineModel::validate() const {
  if (n <= 0 || m <= 0) throw std::invalid_argument("model: empty dimensions");
  const int no = n_offline();
  if (no <= 0 || no > n) throw std::invalid_argument("model: bad offline index set");
  if (Q.rows() != no || Q.cols() != no) throw std::invalid_argument("model: Q must be n_off x n_off");
  if (R.rows() != m || R.cols() != m) throw std::invalid_argument("model: R must be m x m");
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("model: R is not symmetric");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(R).info() != Eigen::Success) {
    throw std::invalid_argument("model: R is not positive definite");
  }
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("model: Q is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw std::invalid_argument("model: Q is not positive semidefinite");
  }
  if (u_min.size() != m || u_max.size() != m || !((u_min.array() < u_max.array()).all())) {
    throw std::invalid_argument("model: require u_min < u_max componentwise");
  }
  if (f_num(Eigen::VectorXd::Zero(n)).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("model: f(0) != 0");
  }
  if (static_cast<int>(f_poly.size()) != no || static_cast<int>(g_poly.size()) != no) {
    throw std::invalid_argument("model: polynomial form has wrong row count");
  }
  if (static_cast<int>(omega_box.size()) != no) {
    throw std::invalid_argument("model: omega_box dimension mismatch");
  }
}

ControlAffineModel hovercraft_model() {
  ControlAffineModel md;
  md.n = 2;
  md.m = 1;
  md.f_num = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd dx(2);
    dx << x[1], 0.0;
    return dx;
  };
  md.g_num = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd g(2, 1);
    g << 0.0, 1.0;
    return g;
  };
  md.Q = Eigen::Matrix2d::Identity();
  md.R = Eigen::MatrixXd::Identity(1, 1);
  md.u_min = Eigen::VectorXd::Constant(1, -1.0);
  md.u_max = Eigen::VectorXd::Constant(1, 1.0);
  md.offline_indices = {0, 1};
  md.f_poly = {Polynomial::variable(2, 1), Polynomial::zero(2)};
  md.g_poly = {{Polynomial::zero(2)}, {Polynomial::constant(2, 1.0)}};
  md.omega_box = symmetric_box(2);
  md.validate();
  return md;
}

Eigen::Matrix3d default_inertia() {
  Eigen::Matrix3d J;
  J << 1.8140, -0.1185, 0.0275,
      -0.1185, 1.7350, 0.0169,
       0.0275, 0.0169, 3.4320;
  return J;
}

namespace {

using Poly3 = std::array<Polynomial, 3>;

Poly3 poly_cross(const Poly3& a, const Poly3& b) {
  return {a[1] * b[2] - a[2] * b[1],
          a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

ControlAffineModel spacecraft_model(const Eigen::Matrix3d& J, double u_bound) {
  if ((J - J.transpose()).cwiseAbs().maxCoeff() > 1e-12 ||
      Eigen::LLT<Eigen::Matrix3d>(J).info() != Eigen::Success) {
    throw std::invalid_argument("spacecraft_model: inertia must be symmetric positive definite");
  }
  const Eigen::Matrix3d Jinv = J.inverse();

  ControlAffineModel md;
  md.n = 9;
  md.m = 3;
  md.f_num = [J, Jinv](const Eigen::VectorXd& x) {
    const Eigen::Vector3d sigma = x.segment<3>(0);
    const Eigen::Vector3d omega = x.segment<3>(3);
    const Eigen::Vector3d hw = x.segment<3>(6);
    Eigen::VectorXd dx(9);
    dx.segment<3>(0) = mrp_kinematics_matrix(sigma) * omega;
    dx.segment<3>(3) = -Jinv * (skew(omega) * (J * omega + hw));
    dx.segment<3>(6).setZero();
    return dx;
  };
  md.g_num = [Jinv](const Eigen::VectorXd&) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(9, 3);
    g.block<3, 3>(3, 0) = Jinv;
    g.block<3, 3>(6, 0) = -Eigen::Matrix3d::Identity();
    return g;
  };
  md.Q = Eigen::MatrixXd::Identity(6, 6);
  md.R = Eigen::Matrix3d::Identity();
  md.u_min = Eigen::VectorXd::Constant(3, -u_bound);
  md.u_max = Eigen::VectorXd::Constant(3, u_bound);
  md.offline_indices = {0, 1, 2, 3, 4, 5};
  md.omega_box = symmetric_box(6);

  // offline polynomial form over (sigma, omega) with h_w frozen at zero
  const int no = 6;
  Poly3 sig, omg;
  for (int i = 0; i < 3; ++i) {
    sig[static_cast<std::size_t>(i)] = Polynomial::variable(no, i);
    omg[static_cast<std::size_t>(i)] = Polynomial::variable(no, 3 + i);
  }

  // sigma_dot = 1/2 (omega + sigma x omega + sigma (sigma . omega))
  Polynomial sdoto = Polynomial::zero(no);
  for (int i = 0; i < 3; ++i) sdoto += sig[static_cast<std::size_t>(i)] * omg[static_cast<std::size_t>(i)];
  const Poly3 sxo = poly_cross(sig, omg);

  // omega_dot|_{h_w=0} = -Jinv (omega x (J omega))
  Poly3 Jw;
  for (int i = 0; i < 3; ++i) {
    Jw[static_cast<std::size_t>(i)] = Polynomial::zero(no);
    for (int j = 0; j < 3; ++j) {
      Jw[static_cast<std::size_t>(i)] += omg[static_cast<std::size_t>(j)] * J(i, j);
    }
  }
  const Poly3 gyro = poly_cross(omg, Jw);

  md.f_poly.resize(6, Polynomial::zero(no));
  for (int i = 0; i < 3; ++i) {
    md.f_poly[static_cast<std::size_t>(i)] =
        (omg[static_cast<std::size_t>(i)] + sxo[static_cast<std::size_t>(i)] +
         sig[static_cast<std::size_t>(i)] * sdoto) * 0.5;
    Polynomial wd = Polynomial::zero(no);
    for (int j = 0; j < 3; ++j) {
      wd += gyro[static_cast<std::size_t>(j)] * (-Jinv(i, j));
    }
    md.f_poly[static_cast<std::size_t>(3 + i)] = wd;
  }

  md.g_poly.assign(6, std::vector<Polynomial>(3, Polynomial::zero(no)));
  for (int i = 0; i < 3; ++i) {
    for (int c = 0; c < 3; ++c) {
      if (Jinv(i, c) != 0.0) {
        md.g_poly[static_cast<std::size_t>(3 + i)][static_cast<std::size_t>(c)] =
            Polynomial::constant(no, Jinv(i, c));
      }
    }
  }

  md.validate();
  return md;
}

}  // namespace ghjb
