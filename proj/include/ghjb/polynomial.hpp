#pragma once

#include <Eigen/Core>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ghjb {

// Monomial over a fixed ambient variable count: x0^e0 x1^e1 ... Ordered
// graded-lexicographically (total degree first, then lex on exponents) so
// term maps and coefficient vectors are reproducible across runs.
struct Monomial {
  std::vector<int> exps;

  Monomial() = default;
  explicit Monomial(std::vector<int> e) : exps(std::move(e)) {}

  int nvars() const { return static_cast<int>(exps.size()); }
  int degree() const;
  double evaluate(const Eigen::VectorXd& x) const;

  bool operator==(const Monomial& o) const { return exps == o.exps; }
  bool operator<(const Monomial& o) const;  // graded lex
};

struct Interval {
  double lo;
  double hi;
};
using Box = std::vector<Interval>;

Box symmetric_box(int nvars, double half_width = 1.0);

// Exact integral of a single monomial over an axis-aligned box,
// prod_i (hi^{k+1} - lo^{k+1}) / (k+1).
double monomial_box_integral(const std::vector<int>& exps, const Box& box);

// Sparse multivariate polynomial with real coefficients, canonical form:
// no stored coefficient is zero, and terms whose magnitude falls below
// kCoeffEpsilon after arithmetic are pruned to stop cancellation residue
// from growing the term map.
class Polynomial {
 public:
  static constexpr double kCoeffEpsilon = 1e-14;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial zero(int nvars) { return Polynomial(nvars); }
  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int var);
  static Polynomial term(const Monomial& m, double coeff);

  int nvars() const { return nvars_; }
  const std::map<Monomial, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // total degree; 0 for the zero polynomial
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Monomial& m, double coeff);

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);

  bool operator==(const Polynomial& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  Polynomial derivative(int var) const;
  std::vector<Polynomial> gradient() const;

  double box_integral(const Box& box) const;

  double evaluate(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient_eval(const Eigen::VectorXd& x) const;

 private:
  void prune();

  int nvars_;
  std::map<Monomial, double> terms_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

// Ordered monomial basis; construction guarantees pairwise-distinct entries
// in graded-lex order.
struct Basis {
  int nvars = 0;
  std::vector<Monomial> monomials;

  std::size_t size() const { return monomials.size(); }
};

// All monomials in nvars variables whose total degree lies in `degrees`.
// Every requested degree must be even and >= 2, so that the spanned
// polynomials vanish (with vanishing gradient) at the origin.
Basis generate_even_basis(int nvars, const std::set<int>& degrees);

// Textual form, one term per line: "<coeff> * x0^2 x1^1". A bare
// coefficient denotes the constant monomial. Round-trips exactly.
std::string format_term(const Monomial& m, double coeff);
std::string format_polynomial(const Polynomial& p);
Polynomial parse_polynomial(const std::string& text, int nvars);
// Single line -> (monomial, coeff); used by the value-function file reader,
// which must keep explicit zero coefficients.
std::pair<Monomial, double> parse_term(const std::string& line, int nvars);

}  // namespace ghjb
