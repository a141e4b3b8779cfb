#include "ghjb/polynomial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ghjb {

namespace {

double pow_int(double x, int k) {
  double r = 1.0;
  while (k-- > 0) r *= x;
  return r;
}

void check_same_nvars(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) {
    throw std::invalid_argument("polynomial dimension mismatch: " +
                                std::to_string(a.nvars()) + " vs " +
                                std::to_string(b.nvars()));
  }
}

// Shortest exact decimal form.
std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

int Monomial::degree() const {
  return std::accumulate(exps.begin(), exps.end(), 0);
}

double Monomial::evaluate(const Eigen::VectorXd& x) const {
  double r = 1.0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    r *= pow_int(x[static_cast<Eigen::Index>(i)], exps[i]);
  }
  return r;
}

bool Monomial::operator<(const Monomial& o) const {
  const int da = degree(), db = o.degree();
  if (da != db) return da < db;
  return exps > o.exps;  // lex: higher power of earlier variable first
}

Box symmetric_box(int nvars, double half_width) {
  return Box(static_cast<std::size_t>(nvars), Interval{-half_width, half_width});
}

double monomial_box_integral(const std::vector<int>& exps, const Box& box) {
  if (exps.size() != box.size()) {
    throw std::invalid_argument("box dimension mismatch");
  }
  double r = 1.0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    const auto [lo, hi] = box[i];
    if (!(lo < hi)) {
      throw std::invalid_argument("degenerate interval in box at variable " +
                                  std::to_string(i));
    }
    const int k = exps[i];
    if (lo == -hi) {
      // symmetric interval: odd powers annihilate
      if (k % 2 == 1) return 0.0;
      r *= 2.0 * pow_int(hi, k + 1) / (k + 1);
    } else {
      r *= (pow_int(hi, k + 1) - pow_int(lo, k + 1)) / (k + 1);
    }
  }
  return r;
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(Monomial(std::vector<int>(nvars, 0)), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
  if (var < 0 || var >= nvars) {
    throw std::out_of_range("variable index " + std::to_string(var) +
                            " out of range for nvars=" + std::to_string(nvars));
  }
  std::vector<int> e(nvars, 0);
  e[var] = 1;
  Polynomial p(nvars);
  p.add_term(Monomial(std::move(e)), 1.0);
  return p;
}

Polynomial Polynomial::term(const Monomial& m, double coeff) {
  Polynomial p(m.nvars());
  p.add_term(m, coeff);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

void Polynomial::add_term(const Monomial& m, double coeff) {
  if (m.nvars() != nvars_) {
    throw std::invalid_argument("monomial dimension mismatch");
  }
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (std::abs(coeff) >= kCoeffEpsilon) terms_.emplace(m, coeff);
  } else {
    it->second += coeff;
    if (std::abs(it->second) < kCoeffEpsilon) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  r -= o;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same_nvars(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same_nvars(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_same_nvars(*this, o);
  Polynomial r(nvars_);
  std::vector<int> e(static_cast<std::size_t>(nvars_));
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      for (int i = 0; i < nvars_; ++i) e[static_cast<std::size_t>(i)] = ma.exps[i] + mb.exps[i];
      r.add_term(Monomial(e), ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    const double v = c * s;
    if (std::abs(v) >= kCoeffEpsilon) r.terms_.emplace(m, v);
  }
  return r;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= nvars_) {
    throw std::out_of_range("derivative variable index out of range");
  }
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    const int k = m.exps[var];
    if (k == 0) continue;
    Monomial d = m;
    d.exps[var] = k - 1;
    r.add_term(d, c * k);
  }
  return r;
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> g;
  g.reserve(static_cast<std::size_t>(nvars_));
  for (int v = 0; v < nvars_; ++v) g.push_back(derivative(v));
  return g;
}

double Polynomial::box_integral(const Box& box) const {
  if (static_cast<int>(box.size()) != nvars_) {
    throw std::invalid_argument("box dimension mismatch");
  }
  double r = 0.0;
  for (const auto& [m, c] : terms_) r += c * monomial_box_integral(m.exps, box);
  return r;
}

double Polynomial::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != nvars_) {
    throw std::invalid_argument("evaluation point dimension mismatch");
  }
  double r = 0.0;
  for (const auto& [m, c] : terms_) r += c * m.evaluate(x);
  return r;
}

Eigen::VectorXd Polynomial::gradient_eval(const Eigen::VectorXd& x) const {
  if (x.size() != nvars_) {
    throw std::invalid_argument("evaluation point dimension mismatch");
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nvars_);
  for (const auto& [m, c] : terms_) {
    for (int v = 0; v < nvars_; ++v) {
      const int k = m.exps[v];
      if (k == 0) continue;
      double r = c * k * pow_int(x[v], k - 1);
      for (int w = 0; w < nvars_; ++w) {
        if (w != v) r *= pow_int(x[w], m.exps[w]);
      }
      g[v] += r;
    }
  }
  return g;
}

void Polynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < kCoeffEpsilon) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

namespace {

void enumerate_degree(int nvars, int var, int remaining, std::vector<int>& e,
                      std::vector<Monomial>& out) {
  if (var == nvars - 1) {
    e[static_cast<std::size_t>(var)] = remaining;
    out.emplace_back(e);
    return;
  }
  // descending exponent on the earlier variable yields graded-lex order
  for (int k = remaining; k >= 0; --k) {
    e[static_cast<std::size_t>(var)] = k;
    enumerate_degree(nvars, var + 1, remaining - k, e, out);
  }
}

}  // namespace

Basis generate_even_basis(int nvars, const std::set<int>& degrees) {
  if (nvars < 1) throw std::invalid_argument("generate_even_basis: nvars must be >= 1");
  if (degrees.empty()) throw std::invalid_argument("generate_even_basis: empty degree set");
  for (int d : degrees) {
    if (d < 2 || d % 2 != 0) {
      throw std::invalid_argument("generate_even_basis: degree " + std::to_string(d) +
                                  " is not an even integer >= 2");
    }
  }
  Basis b;
  b.nvars = nvars;
  std::vector<int> e(static_cast<std::size_t>(nvars), 0);
  for (int d : degrees) {  // std::set iterates ascending
    enumerate_degree(nvars, 0, d, e, b.monomials);
  }
  return b;
}

std::string format_term(const Monomial& m, double coeff) {
  std::string s = format_double(coeff);
  bool any = false;
  for (int v = 0; v < m.nvars(); ++v) {
    if (m.exps[v] == 0) continue;
    s += any ? " " : " * ";
    s += "x" + std::to_string(v) + "^" + std::to_string(m.exps[v]);
    any = true;
  }
  return s;
}

std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0\n";
  std::string s;
  for (const auto& [m, c] : p.terms()) {
    s += format_term(m, c);
    s += '\n';
  }
  return s;
}

std::pair<Monomial, double> parse_term(const std::string& line, int nvars) {
  std::istringstream in(line);
  double coeff;
  if (!(in >> coeff)) {
    throw std::invalid_argument("bad term (missing coefficient): '" + line + "'");
  }
  std::vector<int> e(static_cast<std::size_t>(nvars), 0);
  std::string tok;
  bool saw_star = false;
  while (in >> tok) {
    if (tok == "*") {
      if (saw_star) throw std::invalid_argument("bad term (repeated '*'): '" + line + "'");
      saw_star = true;
      continue;
    }
    if (tok == "1") continue;  // explicit constant monomial
    std::size_t caret = tok.find('^');
    if (tok[0] != 'x' || caret == std::string::npos) {
      throw std::invalid_argument("bad term token '" + tok + "' in '" + line + "'");
    }
    int var = 0, k = 0;
    try {
      var = std::stoi(tok.substr(1, caret - 1));
      k = std::stoi(tok.substr(caret + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad term token '" + tok + "' in '" + line + "'");
    }
    if (var < 0 || var >= nvars) {
      throw std::invalid_argument("variable index out of range in '" + line + "'");
    }
    if (k < 0) throw std::invalid_argument("negative exponent in '" + line + "'");
    e[static_cast<std::size_t>(var)] += k;
  }
  return {Monomial(std::move(e)), coeff};
}

Polynomial parse_polynomial(const std::string& text, int nvars) {
  Polynomial p(nvars);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    // strip comments and whitespace-only lines
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto [m, c] = parse_term(line, nvars);
    p.add_term(m, c);
  }
  return p;
}

}  // namespace ghjb
