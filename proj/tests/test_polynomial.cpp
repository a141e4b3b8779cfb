#include "ghjb/polynomial.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ghjb;

namespace {

Polynomial var(int nvars, int i) { return Polynomial::variable(nvars, i); }

Polynomial random_polynomial(std::mt19937& rng, int nvars, int max_degree, int nterms) {
  std::uniform_int_distribution<int> exp_dist(0, max_degree);
  std::uniform_real_distribution<double> coeff_dist(-2.0, 2.0);
  Polynomial p(nvars);
  for (int t = 0; t < nterms; ++t) {
    std::vector<int> e(static_cast<std::size_t>(nvars));
    int total = 0;
    for (auto& k : e) {
      k = exp_dist(rng);
      total += k;
    }
    if (total > max_degree) continue;
    p.add_term(Monomial(e), coeff_dist(rng));
  }
  return p;
}

Eigen::VectorXd random_point(std::mt19937& rng, int nvars) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd x(nvars);
  for (int i = 0; i < nvars; ++i) x[i] = dist(rng);
  return x;
}

// substitute x_i = val and drop the variable; test-side helper for the
// antiderivative boundary identity
Polynomial fix_var(const Polynomial& p, int i, double val) {
  Polynomial out(p.nvars() - 1);
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e;
    for (int w = 0; w < p.nvars(); ++w) {
      if (w != i) e.push_back(m.exps[w]);
    }
    out.add_term(Monomial(std::move(e)), c * std::pow(val, m.exps[i]));
  }
  return out;
}

std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
  return r;
}

}  // namespace

TEST_CASE("arithmetic basics") {
  const Polynomial p = var(2, 0), v = var(2, 1);

  CHECK((p * v) * p == p * p * v);

  const Polynomial a = p * 3.0 + v * v * 2.0;
  CHECK((a + (-a)).is_zero());
  CHECK((a - a).is_zero());

  const Polynomial sq = (p + v) * (p + v);
  CHECK(sq == p * p + p * v * 2.0 + v * v);
  CHECK(sq.term_count() == 3);
  CHECK(sq.degree() == 2);

  const Polynomial q(3);
  CHECK_THROWS_AS(a + q, std::invalid_argument);
}

TEST_CASE("derivatives") {
  const Polynomial p = var(2, 0), v = var(2, 1);
  CHECK((p * p * v).derivative(0) == p * v * 2.0);
  CHECK((v * v).derivative(0).is_zero());

  const Polynomial sq = p * p + p * v * 2.0 + v * v;
  CHECK(sq.derivative(1) == p * 2.0 + v * 2.0);

  CHECK_THROWS_AS(sq.derivative(2), std::out_of_range);
  CHECK_THROWS_AS(sq.derivative(-1), std::out_of_range);
}

TEST_CASE("box integrals") {
  const Polynomial p = var(2, 0), v = var(2, 1);
  const Box unit2 = symmetric_box(2);
  CHECK((p * p * v * v).box_integral(unit2) == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK((p * v).box_integral(unit2) == 0.0);

  const Polynomial x = var(1, 0);
  CHECK((x * x * x).box_integral({{0.0, 1.0}}) == doctest::Approx(0.25).epsilon(1e-15));

  CHECK_THROWS_AS((p * v).box_integral({{0.0, 1.0}, {1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(x.box_integral(unit2), std::invalid_argument);
}

TEST_CASE("evaluation and gradients") {
  const Polynomial p = var(2, 0), v = var(2, 1);
  const Polynomial sq = p * p + p * v * 2.0 + v * v;
  CHECK(sq.evaluate(Eigen::Vector2d(1.0, 2.0)) == doctest::Approx(9.0).epsilon(1e-15));

  const double s3 = std::sqrt(3.0);
  const Polynomial V = p * p * s3 + p * v * 2.0 + v * v * s3;
  const Eigen::VectorXd g = V.gradient_eval(Eigen::Vector2d(10.0, 0.0));
  CHECK(g[0] == doctest::Approx(20.0 * s3).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(20.0).epsilon(1e-14));

  // even degree >= 2: gradient vanishes at the origin
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial e(3);
    const Polynomial r = random_polynomial(rng, 3, 2, 6);
    const Polynomial r2 = r * r;
    for (const auto& [m, c] : r2.terms()) {
      if (m.degree() >= 2) e.add_term(m, c);
    }
    CHECK(e.gradient_eval(Eigen::Vector3d::Zero()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937 rng(42);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int nvars = 1 + static_cast<int>(rng() % 4);
    const Polynomial a = random_polynomial(rng, nvars, 4, 8);
    const Eigen::VectorXd x = random_point(rng, nvars);
    const Eigen::VectorXd g = a.gradient_eval(x);
    for (int i = 0; i < nvars; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (a.evaluate(xp) - a.evaluate(xm)) / (2.0 * h);
      const double scale = std::max({1.0, std::abs(g[i]), std::abs(fd)});
      worst = std::max(worst, std::abs(g[i] - fd) / scale);
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("distributivity on random polynomials") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int nvars = 1 + static_cast<int>(rng() % 3);
    const Polynomial a = random_polynomial(rng, nvars, 3, 6);
    const Polynomial b = random_polynomial(rng, nvars, 3, 6);
    const Polynomial c = random_polynomial(rng, nvars, 3, 6);
    const Polynomial lhs = (a + b) * c;
    const Polynomial rhs = a * c + b * c;
    const Eigen::VectorXd x = random_point(rng, nvars);
    const double l = lhs.evaluate(x), r = rhs.evaluate(x);
    CHECK(std::abs(l - r) <= 1e-12 * std::max(1.0, std::abs(r)));
  }
}

TEST_CASE("integral of a derivative equals the boundary difference") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> edge(0.2, 1.5);
  for (int trial = 0; trial < 60; ++trial) {
    const int nvars = 2 + static_cast<int>(rng() % 2);
    const Polynomial a = random_polynomial(rng, nvars, 6, 10);
    Box box;
    for (int i = 0; i < nvars; ++i) {
      const double w = edge(rng);
      box.push_back({-edge(rng), w});
    }
    const int i = static_cast<int>(rng() % static_cast<unsigned>(nvars));
    const double lhs = a.derivative(i).box_integral(box);

    Box rest;
    for (int w = 0; w < nvars; ++w) {
      if (w != i) rest.push_back(box[static_cast<std::size_t>(w)]);
    }
    const Polynomial upper = fix_var(a, i, box[static_cast<std::size_t>(i)].hi);
    const Polynomial lower = fix_var(a, i, box[static_cast<std::size_t>(i)].lo);
    const double rhs = (upper - lower).box_integral(rest);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("even basis generation") {
  const Basis b64 = generate_even_basis(6, {2, 4});
  CHECK(b64.size() == 147);  // 21 + 126

  const Basis b22 = generate_even_basis(2, {2});
  REQUIRE(b22.size() == 3);
  CHECK(b22.monomials[0].exps == std::vector<int>{2, 0});
  CHECK(b22.monomials[1].exps == std::vector<int>{1, 1});
  CHECK(b22.monomials[2].exps == std::vector<int>{0, 2});

  CHECK(generate_even_basis(1, {2}).size() == 1);

  CHECK_THROWS_AS(generate_even_basis(2, {}), std::invalid_argument);
  CHECK_THROWS_AS(generate_even_basis(2, {3}), std::invalid_argument);
  CHECK_THROWS_AS(generate_even_basis(2, {0}), std::invalid_argument);

  // stars and bars: count of degree-d monomials in n vars is C(n+d-1, d)
  for (int n = 1; n <= 6; ++n) {
    for (int d : {2, 4, 6}) {
      CHECK(generate_even_basis(n, {d}).size() == binom(n + d - 1, d));
    }
    CHECK(generate_even_basis(n, {2, 4}).size() == binom(n + 1, 2) + binom(n + 3, 4));
  }

  // pairwise distinct, graded-lex ordered
  const Basis big = generate_even_basis(4, {2, 4});
  for (std::size_t i = 0; i + 1 < big.size(); ++i) {
    CHECK(big.monomials[i] < big.monomials[i + 1]);
  }
}

TEST_CASE("text round trip") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int nvars = 1 + static_cast<int>(rng() % 4);
    const Polynomial a = random_polynomial(rng, nvars, 5, 9);
    const Polynomial back = parse_polynomial(format_polynomial(a), nvars);
    CHECK(back == a);
  }

  const Polynomial c = Polynomial::constant(2, -3.25);
  CHECK(parse_polynomial(format_polynomial(c), 2) == c);
  CHECK(parse_polynomial("0", 2).is_zero());
  CHECK(parse_polynomial("2 * x0^1 x1^2\n-1 * x0^1 x1^2", 2) ==
        Polynomial::variable(2, 0) * Polynomial::variable(2, 1) * Polynomial::variable(2, 1));

  CHECK_THROWS_AS(parse_polynomial("2 * x7^1", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("banana", 2), std::invalid_argument);
}

TEST_CASE("tiny coefficients are pruned") {
  const Polynomial p = var(2, 0);
  const Polynomial tiny = p * 1e-20;
  CHECK(tiny.is_zero());
  Polynomial q = p * 1.0;
  q -= p * (1.0 - 1e-16);
  CHECK(q.is_zero());
}
