#include "ghjb/qp_solver.hpp"

#include <doctest.h>

#include <cstring>
#include <random>

using namespace ghjb;

namespace {

QuadraticProgram make_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& c,
                         const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
  return QuadraticProgram(H, c, G, h);
}

// random strictly convex QP with a mix of feasible and infeasible instances
QuadraticProgram random_qp(std::mt19937& rng, int max_m = 3, int max_k = 9) {
  std::uniform_int_distribution<int> mdist(1, max_m);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int m = mdist(rng);
  const int k = static_cast<int>(rng() % static_cast<unsigned>(max_k + 1));

  Eigen::MatrixXd M(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) M(i, j) = dist(rng);
  }
  Eigen::MatrixXd H = M.transpose() * M + 0.3 * Eigen::MatrixXd::Identity(m, m);
  H = 0.5 * (H + H.transpose());
  Eigen::VectorXd c(m);
  for (int i = 0; i < m; ++i) c[i] = 2.0 * dist(rng);

  Eigen::MatrixXd G(k, m);
  Eigen::VectorXd h(k);
  const bool bias_feasible = (rng() % 2) == 0;
  Eigen::VectorXd feas(m);
  for (int i = 0; i < m; ++i) feas[i] = dist(rng);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < m; ++j) G(i, j) = dist(rng);
    h[i] = bias_feasible ? G.row(i).dot(feas) + std::abs(dist(rng)) : dist(rng);
  }
  return make_qp(H, c, G, h);
}

}  // namespace

TEST_CASE("construction validates H") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.5, 0.4, 1.0;  // not symmetric
  CHECK_THROWS_AS(make_qp(bad, Eigen::Vector2d::Zero(), Eigen::MatrixXd(0, 2), Eigen::VectorXd(0)),
                  std::invalid_argument);
  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(make_qp(indef, Eigen::Vector2d::Zero(), Eigen::MatrixXd(0, 2), Eigen::VectorXd(0)),
                  std::invalid_argument);
}

TEST_CASE("scalar parabola") {
  // min u^2 + 2u  ->  u* = -1, objective -1
  const Eigen::MatrixXd H = Eigen::MatrixXd::Constant(1, 1, 2.0);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(1, 2.0);
  const QPSolution sol = solve_active_set(make_qp(H, c, Eigen::MatrixXd(0, 1), Eigen::VectorXd(0)));
  REQUIRE(sol.status == QPStatus::kOptimal);
  CHECK(sol.u[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(sol.active_set.empty());
}

TEST_CASE("clipped scalar parabola") {
  // min u^2 + 2u  s.t. u >= -0.5  ->  u* = -0.5, that row active
  const Eigen::MatrixXd H = Eigen::MatrixXd::Constant(1, 1, 2.0);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(1, 2.0);
  Eigen::MatrixXd G(1, 1);
  G << -1.0;  // -u <= 0.5
  Eigen::VectorXd h(1);
  h << 0.5;
  const QPSolution sol = solve_active_set(make_qp(H, c, G, h));
  REQUIRE(sol.status == QPStatus::kOptimal);
  CHECK(sol.u[0] == doctest::Approx(-0.5).epsilon(1e-12));
  REQUIRE(sol.active_set.size() == 1);
  CHECK(sol.active_set[0] == 0);
  CHECK(sol.lambda[0] > 0.0);
}

TEST_CASE("two-variable single constraint") {
  // min |u|^2 - 2 u1  s.t. u1 + u2 <= 0.5  ->  u* = (0.75, -0.25)
  const Eigen::MatrixXd H = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd c(2);
  c << -2.0, 0.0;
  Eigen::MatrixXd G(1, 2);
  G << 1.0, 1.0;
  Eigen::VectorXd h(1);
  h << 0.5;
  const QPSolution sol = solve_active_set(make_qp(H, c, G, h));
  REQUIRE(sol.status == QPStatus::kOptimal);
  CHECK(sol.u[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(sol.u[1] == doctest::Approx(-0.25).epsilon(1e-12));

  const QPSolution oracle = solve_enumeration_oracle(make_qp(H, c, G, h));
  REQUIRE(oracle.status == QPStatus::kOptimal);
  CHECK((oracle.u - sol.u).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("infeasible box") {
  // u <= -1 and u >= 1 simultaneously
  const Eigen::MatrixXd H = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::VectorXd c = Eigen::VectorXd::Zero(1);
  Eigen::MatrixXd G(2, 1);
  G << 1.0, -1.0;
  Eigen::VectorXd h(2);
  h << -1.0, -1.0;
  CHECK(solve_active_set(make_qp(H, c, G, h)).status == QPStatus::kInfeasible);
  CHECK(solve_enumeration_oracle(make_qp(H, c, G, h)).status == QPStatus::kInfeasible);
}

TEST_CASE("oracle rejects oversized instances") {
  const int k = 17;
  const Eigen::MatrixXd H = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::VectorXd c = Eigen::VectorXd::Zero(1);
  const Eigen::MatrixXd G = Eigen::MatrixXd::Ones(k, 1);
  const Eigen::VectorXd h = Eigen::VectorXd::Ones(k);
  CHECK_THROWS_AS(solve_enumeration_oracle(make_qp(H, c, G, h)), std::invalid_argument);
}

TEST_CASE("randomized agreement with the enumeration oracle") {
  std::mt19937 rng(2024);
  int optimal_count = 0, infeasible_count = 0;
  ActiveSetSolver solver;
  for (int trial = 0; trial < 1000; ++trial) {
    const QuadraticProgram qp = random_qp(rng);
    const QPSolution a = solver.solve(qp);
    const QPSolution b = solve_enumeration_oracle(qp);
    REQUIRE(a.status == b.status);
    if (a.status == QPStatus::kOptimal) {
      ++optimal_count;
      REQUIRE((a.u - b.u).cwiseAbs().maxCoeff() < 1e-7);
      const KktReport ka = kkt_check(qp, a);
      REQUIRE(ka.pass);
      REQUIRE(ka.stationarity < 1e-8);
      REQUIRE(ka.complementarity < 1e-8);
    } else {
      ++infeasible_count;
    }
  }
  CHECK(optimal_count > 500);
  CHECK(infeasible_count > 50);  // the generator must exercise both outcomes
}

TEST_CASE("optimum beats random feasible points") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const QuadraticProgram qp = random_qp(rng);
    const QPSolution sol = solve_active_set(qp);
    if (sol.status != QPStatus::kOptimal) continue;
    for (int probe = 0; probe < 50; ++probe) {
      Eigen::VectorXd u(qp.nvars());
      for (int i = 0; i < qp.nvars(); ++i) u[i] = dist(rng);
      if (qp.nconstraints() > 0 && ((qp.G * u - qp.h).array() > 0.0).any()) continue;
      const double obj = 0.5 * u.dot(qp.H * u) + qp.c.dot(u);
      CHECK(sol.objective <= obj + 1e-9);
    }
  }
}

TEST_CASE("deterministic output bytes") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const QuadraticProgram qp = random_qp(rng);
    const QPSolution a = solve_active_set(qp);
    const QPSolution b = solve_active_set(qp);
    REQUIRE(a.status == b.status);
    if (a.status != QPStatus::kOptimal) continue;
    REQUIRE(a.u.size() == b.u.size());
    CHECK(std::memcmp(a.u.data(), b.u.data(), sizeof(double) * static_cast<std::size_t>(a.u.size())) == 0);
    CHECK(std::memcmp(a.lambda.data(), b.lambda.data(),
                      sizeof(double) * static_cast<std::size_t>(a.lambda.size())) == 0);
    CHECK(a.active_set == b.active_set);
  }
}

TEST_CASE("warm start reaches the same optimum") {
  std::mt19937 rng(17);
  ActiveSetSolver solver;
  for (int trial = 0; trial < 200; ++trial) {
    const QuadraticProgram qp = random_qp(rng);
    const QPSolution cold = solve_active_set(qp);
    // seed with a deliberately arbitrary previous active set
    std::vector<int> warm;
    for (int i = 0; i < qp.nconstraints(); ++i) {
      if (rng() % 3 == 0) warm.push_back(i);
    }
    const QPSolution warm_sol = solver.solve(qp, warm);
    REQUIRE(cold.status == warm_sol.status);
    if (cold.status == QPStatus::kOptimal) {
      CHECK((cold.u - warm_sol.u).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("tie break picks the lowest row index") {
  // two identical constraints become active simultaneously
  const Eigen::MatrixXd H = Eigen::MatrixXd::Constant(1, 1, 2.0);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(1, 2.0);
  Eigen::MatrixXd G(2, 1);
  G << -1.0, -1.0;
  Eigen::VectorXd h(2);
  h << 0.5, 0.5;
  const QPSolution sol = solve_active_set(make_qp(H, c, G, h));
  REQUIRE(sol.status == QPStatus::kOptimal);
  REQUIRE(sol.active_set.size() == 1);
  CHECK(sol.active_set[0] == 0);
}
