#include "ghjb/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ghjb {

namespace {

constexpr double kZeroStep = 1e-11;
constexpr double kDualTol = 1e-10;

double objective_value(const QuadraticProgram& qp, const Eigen::VectorXd& u) {
  return 0.5 * u.dot(qp.H * u) + qp.c.dot(u);
}

bool is_feasible(const QuadraticProgram& qp, const Eigen::VectorXd& u, double tol) {
  if (qp.nconstraints() == 0) return true;
  return ((qp.G * u - qp.h).array() <= tol).all();
}

}  // namespace

QuadraticProgram::QuadraticProgram(Eigen::MatrixXd H_, Eigen::VectorXd c_,
                                   Eigen::MatrixXd G_, Eigen::VectorXd h_)
    : H(std::move(H_)), c(std::move(c_)), G(std::move(G_)), h(std::move(h_)) {
  const int m = static_cast<int>(c.size());
  if (H.rows() != m || H.cols() != m) {
    throw std::invalid_argument("QuadraticProgram: H must be m x m");
  }
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("QuadraticProgram: H is not symmetric");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(H).info() != Eigen::Success) {
    throw std::invalid_argument("QuadraticProgram: H is not positive definite");
  }
  if (G.rows() != h.size() || (G.rows() > 0 && G.cols() != m)) {
    throw std::invalid_argument("QuadraticProgram: constraint dimensions mismatch");
  }
}

const char* to_string(QPStatus s) {
  switch (s) {
    case QPStatus::kOptimal: return "optimal";
    case QPStatus::kInfeasible: return "infeasible";
    case QPStatus::kIterationLimit: return "iteration_limit";
  }
  return "?";
}

QPSolution ActiveSetSolver::run_primal(const QuadraticProgram& qp,
                                       const Eigen::LLT<Eigen::MatrixXd>& llt,
                                       Eigen::VectorXd x, std::vector<int> working) {
  const int m = qp.nvars();
  const int k = qp.nconstraints();
  const int max_iters = 100 + 10 * k;

  QPSolution sol;
  for (int iter = 0; iter < max_iters; ++iter) {
    const Eigen::VectorXd grad = qp.H * x + qp.c;
    const int nw = static_cast<int>(working.size());

    Eigen::VectorXd p;
    Eigen::VectorXd mu(nw);
    double noise_floor;
    if (nw == 0) {
      const Eigen::VectorXd Hinvg = llt.solve(grad);
      p = -Hinvg;
      noise_floor = 1e-12 * (1.0 + Hinvg.cwiseAbs().maxCoeff());
    } else {
      Eigen::MatrixXd Gw(nw, m);
      for (int i = 0; i < nw; ++i) Gw.row(i) = qp.G.row(working[static_cast<std::size_t>(i)]);
      const Eigen::MatrixXd HinvGt = llt.solve(Gw.transpose());
      const Eigen::MatrixXd S = Gw * HinvGt;
      const Eigen::VectorXd Hinvg = llt.solve(grad);
      mu = S.ldlt().solve(-Gw * Hinvg);
      const Eigen::VectorXd correction = HinvGt * mu;
      p = -(Hinvg + correction);
      noise_floor =
          1e-12 * (1.0 + Hinvg.cwiseAbs().maxCoeff() + correction.cwiseAbs().maxCoeff());
    }

    // Two stationarity tests. The size test uses a roundoff floor scaled by
    // the quantities that produced p (ill-scaled H amplifies roundoff by
    // 1/lambda_min). The decrease test catches near-dependent working sets,
    // where kappa(S) inflates p far above that floor although the predicted
    // objective decrease 1/2 p'Hp is already negligible.
    const double tol_p =
        std::max(kZeroStep * std::max(1.0, x.cwiseAbs().maxCoeff()), noise_floor);
    const double predicted_decrease = 0.5 * p.dot(qp.H * p);
    if (p.cwiseAbs().maxCoeff() <= tol_p ||
        predicted_decrease <= 1e-16 * (1.0 + std::abs(objective_value(qp, x)))) {
      // absorb the residual step so the returned point is the working-set
      // optimum to roundoff, then check multiplier signs. Bland-style rule
      // (lowest row index leaves) to avoid cycling on degenerate data.
      if (is_feasible(qp, x + p, kFeasTol)) x += p;
      int drop = -1;
      for (int i = 0; i < nw; ++i) {
        if (mu[i] < -kDualTol) {
          drop = i;
          break;
        }
      }
      if (drop < 0) {
        sol.u = x;
        sol.active_set = working;
        sol.lambda = Eigen::VectorXd::Zero(k);
        for (int i = 0; i < nw; ++i) {
          sol.lambda[working[static_cast<std::size_t>(i)]] = std::max(0.0, mu[i]);
        }
        sol.objective = objective_value(qp, x);
        sol.status = QPStatus::kOptimal;
        return sol;
      }
      working.erase(working.begin() + drop);
      continue;
    }

    // step length to the nearest blocking constraint
    double alpha = 1.0;
    int blocker = -1;
    for (int i = 0; i < k; ++i) {
      if (std::find(working.begin(), working.end(), i) != working.end()) continue;
      const double gip = qp.G.row(i).dot(p);
      if (gip <= 1e-13) continue;
      const double slack = std::max(0.0, qp.h[i] - qp.G.row(i).dot(x));
      const double a = slack / gip;
      if (a < alpha) {  // strict: first (lowest-index) minimizer wins ties
        alpha = a;
        blocker = i;
      }
    }
    x += alpha * p;
    if (blocker >= 0 && alpha < 1.0) {
      working.insert(std::upper_bound(working.begin(), working.end(), blocker), blocker);
    }
  }

  sol.u = x;
  sol.lambda = Eigen::VectorXd::Zero(k);
  sol.objective = objective_value(qp, x);
  sol.status = QPStatus::kIterationLimit;
  return sol;
}

QPSolution ActiveSetSolver::find_feasible_point(const QuadraticProgram& qp) {
  const int m = qp.nvars();
  const int k = qp.nconstraints();

  // Lifted feasibility program in (u, t): minimize t (plus a small strictly
  // convex regularizer) subject to Gu - t <= h and t >= -1. Start point
  // (0, max(0, max_i -h_i)) is always feasible, so the primal loop applies.
  const double delta = 1e-6;
  Eigen::MatrixXd H1 = delta * Eigen::MatrixXd::Identity(m + 1, m + 1);
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(m + 1);
  c1[m] = 1.0;
  Eigen::MatrixXd G1(k + 1, m + 1);
  G1.block(0, 0, k, m) = qp.G;
  G1.block(0, m, k, 1).setConstant(-1.0);
  G1.row(k).setZero();
  G1(k, m) = -1.0;  // t >= -1
  Eigen::VectorXd h1(k + 1);
  h1.head(k) = qp.h;
  h1[k] = 1.0;
  QuadraticProgram phase1(std::move(H1), std::move(c1), std::move(G1), std::move(h1));

  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(m + 1);
  z0[m] = std::max(0.0, -qp.h.minCoeff());
  const Eigen::LLT<Eigen::MatrixXd> llt1(phase1.H);
  QPSolution phase1_sol = run_primal(phase1, llt1, z0, {});

  QPSolution out;
  out.lambda = Eigen::VectorXd::Zero(k);
  if (phase1_sol.status != QPStatus::kOptimal) {
    out.status = phase1_sol.status;
    return out;
  }
  if (phase1_sol.u[m] > kFeasTol) {
    out.status = QPStatus::kInfeasible;
    return out;
  }
  out.u = phase1_sol.u.head(m);
  out.status = QPStatus::kOptimal;
  return out;
}

QPSolution ActiveSetSolver::solve(const QuadraticProgram& qp) {
  return solve(qp, {});
}

QPSolution ActiveSetSolver::solve(const QuadraticProgram& qp,
                                  const std::vector<int>& warm_active) {
  const int k = qp.nconstraints();
  const Eigen::LLT<Eigen::MatrixXd> llt(qp.H);

  const Eigen::VectorXd x_free = -llt.solve(qp.c);
  if (is_feasible(qp, x_free, kFeasTol)) {
    return run_primal(qp, llt, x_free, {});
  }

  // warm start: pin the previous active set (trimmed to a linearly
  // independent subset) and check the resulting point
  std::vector<int> warm;
  {
    std::vector<int> candidates;
    for (int i : warm_active) {
      if (i >= 0 && i < k) candidates.push_back(i);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::vector<Eigen::VectorXd> span;  // orthonormalized kept rows
    for (int i : candidates) {
      if (static_cast<int>(warm.size()) == qp.nvars()) break;
      Eigen::VectorXd v = qp.G.row(i).transpose();
      for (const auto& q : span) v -= q.dot(v) * q;
      if (v.norm() > 1e-10 * std::max(1.0, qp.G.row(i).norm())) {
        span.push_back(v.normalized());
        warm.push_back(i);
      }
    }
  }
  if (!warm.empty()) {
    const int nw = static_cast<int>(warm.size());
    Eigen::MatrixXd Gw(nw, qp.nvars());
    Eigen::VectorXd hw(nw);
    for (int i = 0; i < nw; ++i) {
      Gw.row(i) = qp.G.row(warm[static_cast<std::size_t>(i)]);
      hw[i] = qp.h[warm[static_cast<std::size_t>(i)]];
    }
    const Eigen::MatrixXd HinvGt = llt.solve(Gw.transpose());
    const Eigen::MatrixXd S = Gw * HinvGt;
    const Eigen::LLT<Eigen::MatrixXd> sllt(S);
    if (sllt.info() == Eigen::Success) {
      const Eigen::VectorXd mu = sllt.solve(-(hw + Gw * llt.solve(qp.c)));
      const Eigen::VectorXd x = -llt.solve(qp.c + Gw.transpose() * mu);
      if (is_feasible(qp, x, kFeasTol)) {
        return run_primal(qp, llt, x, warm);
      }
    }
  }

  if (is_feasible(qp, Eigen::VectorXd::Zero(qp.nvars()), kFeasTol)) {
    return run_primal(qp, llt, Eigen::VectorXd::Zero(qp.nvars()), {});
  }

  QPSolution start = find_feasible_point(qp);
  if (start.status != QPStatus::kOptimal) return start;
  return run_primal(qp, llt, start.u, {});
}

QPSolution solve_active_set(const QuadraticProgram& qp) {
  ActiveSetSolver solver;
  return solver.solve(qp);
}

QPSolution solve_enumeration_oracle(const QuadraticProgram& qp) {
  const int m = qp.nvars();
  const int k = qp.nconstraints();
  if (k > 16) {
    throw std::invalid_argument("solve_enumeration_oracle: more than 16 constraints");
  }
  const double feas_tol = ActiveSetSolver::kFeasTol;

  QPSolution best;
  best.lambda = Eigen::VectorXd::Zero(k);
  best.status = QPStatus::kInfeasible;
  bool have = false;

  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) subset.push_back(i);
    }
    const int s = static_cast<int>(subset.size());

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + s, m + s);
    kkt.topLeftCorner(m, m) = qp.H;
    Eigen::VectorXd rhs(m + s);
    rhs.head(m) = -qp.c;
    for (int i = 0; i < s; ++i) {
      kkt.block(m + i, 0, 1, m) = qp.G.row(subset[static_cast<std::size_t>(i)]);
      kkt.block(0, m + i, m, 1) = qp.G.row(subset[static_cast<std::size_t>(i)]).transpose();
      rhs[m + i] = qp.h[subset[static_cast<std::size_t>(i)]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd z = lu.solve(rhs);
    const Eigen::VectorXd u = z.head(m);
    const Eigen::VectorXd lam = z.tail(s);

    if (s > 0 && lam.minCoeff() < -kDualTol) continue;
    if (!is_feasible(qp, u, feas_tol)) continue;

    const double obj = objective_value(qp, u);
    if (!have || obj < best.objective) {
      have = true;
      best.u = u;
      best.active_set = subset;
      best.lambda = Eigen::VectorXd::Zero(k);
      for (int i = 0; i < s; ++i) {
        best.lambda[subset[static_cast<std::size_t>(i)]] = std::max(0.0, lam[i]);
      }
      best.objective = obj;
      best.status = QPStatus::kOptimal;
    }
  }
  return best;
}

KktReport kkt_check(const QuadraticProgram& qp, const QPSolution& sol, double tol) {
  KktReport rep;
  if (sol.status != QPStatus::kOptimal) return rep;
  const Eigen::VectorXd r = qp.H * sol.u + qp.c + qp.G.transpose() * sol.lambda;
  rep.stationarity = r.cwiseAbs().maxCoeff();
  const int k = qp.nconstraints();
  if (k > 0) {
    const Eigen::VectorXd slack = qp.G * sol.u - qp.h;
    rep.primal = slack.maxCoeff();
    rep.dual = sol.lambda.minCoeff();
    rep.complementarity = (sol.lambda.array() * slack.array()).abs().maxCoeff();
  }
  rep.pass = rep.stationarity < tol && rep.primal < ActiveSetSolver::kFeasTol &&
             rep.dual >= 0.0 && rep.complementarity < tol;
  return rep;
}

}  // namespace ghjb
