#include "ghjb/sga.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ghjb/format.hpp"
#include "ghjb/halton.hpp"

namespace ghjb {

namespace {

void require_polynomial_form(const ControlAffineModel& model) {
  if (model.f_poly.empty() || model.g_poly.empty()) {
    throw std::invalid_argument("model has no polynomial form for the offline states");
  }
}

// closed-loop drift rows f + g u over the offline variables
std::vector<Polynomial> closed_loop_rows(const ControlAffineModel& model,
                                         const PolynomialPolicy& policy) {
  const int no = model.n_offline();
  std::vector<Polynomial> F;
  F.reserve(static_cast<std::size_t>(no));
  for (int v = 0; v < no; ++v) {
    Polynomial row = model.f_poly[static_cast<std::size_t>(v)];
    for (int c = 0; c < model.m; ++c) {
      const Polynomial& gvc = model.g_poly[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)];
      if (!gvc.is_zero()) row += gvc * policy.components[static_cast<std::size_t>(c)];
    }
    F.push_back(std::move(row));
  }
  return F;
}

// q + u'Ru as one polynomial
Polynomial running_cost_poly(const ControlAffineModel& model, const PolynomialPolicy& policy) {
  Polynomial s = model.state_cost_poly();
  for (int c = 0; c < model.m; ++c) {
    for (int d = 0; d < model.m; ++d) {
      if (model.R(c, d) == 0.0) continue;
      s += (policy.components[static_cast<std::size_t>(c)] *
            policy.components[static_cast<std::size_t>(d)]) *
           model.R(c, d);
    }
  }
  return s;
}

struct FlatTerm {
  std::vector<int> exps;
  double coeff;
};

std::vector<FlatTerm> flatten(const Polynomial& p) {
  std::vector<FlatTerm> out;
  out.reserve(p.term_count());
  for (const auto& [m, c] : p.terms()) out.push_back({m.exps, c});
  return out;
}

}  // namespace

Polynomial ValueFunction::polynomial() const {
  Polynomial p(basis.nvars);
  for (std::size_t i = 0; i < basis.monomials.size(); ++i) {
    p.add_term(basis.monomials[i], coeffs[static_cast<Eigen::Index>(i)]);
  }
  return p;
}

double ValueFunction::value(const Eigen::VectorXd& x_off) const {
  double r = 0.0;
  for (std::size_t i = 0; i < basis.monomials.size(); ++i) {
    r += coeffs[static_cast<Eigen::Index>(i)] * basis.monomials[i].evaluate(x_off);
  }
  return r;
}

Eigen::VectorXd ValueFunction::gradient_at(const Eigen::VectorXd& x_off) const {
  return polynomial().gradient_eval(x_off);
}

Eigen::VectorXd PolynomialPolicy::evaluate(const Eigen::VectorXd& x_off) const {
  Eigen::VectorXd u(static_cast<Eigen::Index>(components.size()));
  for (std::size_t c = 0; c < components.size(); ++c) {
    u[static_cast<Eigen::Index>(c)] = components[c].evaluate(x_off);
  }
  return u;
}

PolynomialPolicy improve_policy(const ValueFunction& V, const ControlAffineModel& model) {
  require_polynomial_form(model);
  const int no = model.n_offline();
  if (V.basis.nvars != no) {
    throw std::invalid_argument("improve_policy: value function dimension mismatch");
  }
  const std::vector<Polynomial> grad = V.polynomial().gradient();

  // t_c = (g' grad V)_c
  std::vector<Polynomial> t(static_cast<std::size_t>(model.m), Polynomial::zero(no));
  for (int c = 0; c < model.m; ++c) {
    for (int v = 0; v < no; ++v) {
      const Polynomial& gvc = model.g_poly[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)];
      if (!gvc.is_zero()) t[static_cast<std::size_t>(c)] += gvc * grad[static_cast<std::size_t>(v)];
    }
  }
  const Eigen::MatrixXd Rinv = model.R.llt().solve(Eigen::MatrixXd::Identity(model.m, model.m));
  PolynomialPolicy u;
  u.components.assign(static_cast<std::size_t>(model.m), Polynomial::zero(no));
  for (int c = 0; c < model.m; ++c) {
    for (int d = 0; d < model.m; ++d) {
      if (Rinv(c, d) == 0.0) continue;
      u.components[static_cast<std::size_t>(c)] += t[static_cast<std::size_t>(d)] * (-0.5 * Rinv(c, d));
    }
  }
  return u;
}

ValueFunction galerkin_evaluate(const ControlAffineModel& model, const PolynomialPolicy& policy,
                                const Basis& basis, double* rcond_out) {
  require_polynomial_form(model);
  const int no = model.n_offline();
  if (basis.nvars != no) throw std::invalid_argument("galerkin_evaluate: basis dimension mismatch");
  if (static_cast<int>(policy.components.size()) != model.m) {
    throw std::invalid_argument("galerkin_evaluate: policy has wrong input count");
  }
  const int N = static_cast<int>(basis.size());
  if (N == 0) throw std::invalid_argument("galerkin_evaluate: empty basis");

  const std::vector<Polynomial> F = closed_loop_rows(model, policy);
  std::vector<std::vector<FlatTerm>> Fterms;
  Fterms.reserve(static_cast<std::size_t>(no));
  for (const auto& f : F) Fterms.push_back(flatten(f));
  const std::vector<FlatTerm> Sterms = flatten(running_cost_poly(model, policy));

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(N);

  std::vector<int> shifted(static_cast<std::size_t>(no));
  std::vector<int> combined(static_cast<std::size_t>(no));

  for (int i = 0; i < N; ++i) {
    const Monomial& mi = basis.monomials[static_cast<std::size_t>(i)];
    for (int v = 0; v < no; ++v) {
      const int k = mi.exps[v];
      if (k == 0) continue;
      for (const FlatTerm& ft : Fterms[static_cast<std::size_t>(v)]) {
        for (int w = 0; w < no; ++w) {
          shifted[static_cast<std::size_t>(w)] = mi.exps[w] + ft.exps[static_cast<std::size_t>(w)];
        }
        shifted[static_cast<std::size_t>(v)] -= 1;
        const double cf = k * ft.coeff;
        for (int j = 0; j < N; ++j) {
          const Monomial& mj = basis.monomials[static_cast<std::size_t>(j)];
          for (int w = 0; w < no; ++w) {
            combined[static_cast<std::size_t>(w)] = shifted[static_cast<std::size_t>(w)] + mj.exps[w];
          }
          A(j, i) += cf * monomial_box_integral(combined, model.omega_box);
        }
      }
    }
  }
  for (const FlatTerm& st : Sterms) {
    for (int j = 0; j < N; ++j) {
      const Monomial& mj = basis.monomials[static_cast<std::size_t>(j)];
      for (int w = 0; w < no; ++w) {
        combined[static_cast<std::size_t>(w)] = st.exps[static_cast<std::size_t>(w)] + mj.exps[w];
      }
      b[j] -= st.coeff * monomial_box_integral(combined, model.omega_box);
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (rcond_out != nullptr) *rcond_out = rcond;
  if (!std::isfinite(rcond) || rcond < 1e-12) {
    throw std::runtime_error(
        "galerkin_evaluate: projection matrix is singular or ill-conditioned (rcond = " +
        format_double(rcond) + "); the policy may be inadmissible or the basis deficient");
  }

  ValueFunction vf;
  vf.basis = basis;
  vf.coeffs = lu.solve(b);
  vf.offline_indices = model.offline_indices;
  return vf;
}

AdmissibilityReport admissibility_check(const ControlAffineModel& model, const ValueFunction& V,
                                        const PolynomialPolicy& policy, int samples) {
  require_polynomial_form(model);
  const int no = model.n_offline();

  // L(V, u) = -grad V'(f + g u) - q - u'Ru as one polynomial
  const std::vector<Polynomial> F = closed_loop_rows(model, policy);
  const std::vector<Polynomial> grad = V.polynomial().gradient();
  Polynomial L = -running_cost_poly(model, policy);
  for (int v = 0; v < no; ++v) {
    if (!grad[static_cast<std::size_t>(v)].is_zero()) {
      L -= grad[static_cast<std::size_t>(v)] * F[static_cast<std::size_t>(v)];
    }
  }

  AdmissibilityReport rep;
  rep.samples = samples;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 1; s <= static_cast<std::uint64_t>(samples); ++s) {
    const Eigen::VectorXd x = halton_in_box(s, model.omega_box);
    const double val = L.evaluate(x);
    if (val < rep.min_value) {
      rep.min_value = val;
      rep.worst_point = x;
    }
  }
  rep.pass = rep.min_value >= -1e-8;
  return rep;
}

std::pair<ValueFunction, IterationLog> policy_iteration(const ControlAffineModel& model,
                                                        const Basis& basis,
                                                        const PolynomialPolicy& u0,
                                                        const PolicyIterationConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) {
    throw std::invalid_argument("policy_iteration: bad config");
  }
  PolynomialPolicy u = u0;
  IterationLog log;
  ValueFunction V;
  Eigen::VectorXd prev;
  double prev_integral = std::numeric_limits<double>::infinity();

  for (int k = 0; k < cfg.max_iter; ++k) {
    V = galerkin_evaluate(model, u, basis, &log.rcond);
    if (k == 0) {
      log.initial_policy_admissibility = admissibility_check(model, V, u0, cfg.admissibility_samples);
    }
    const double vint = V.polynomial().box_integral(model.omega_box);
    const double delta = (k == 0) ? std::numeric_limits<double>::infinity()
                                  : (V.coeffs - prev).cwiseAbs().maxCoeff();
    log.records.push_back({k, delta, vint});
    if (k > 0 && vint > prev_integral + 1e-9 * std::max(1.0, std::abs(prev_integral))) {
      log.monotone = false;
    }
    if (k > 0 && delta < cfg.tol) {
      log.converged = true;
      log.iterations = k;
      break;
    }
    prev = V.coeffs;
    prev_integral = vint;
    u = improve_policy(V, model);
    log.iterations = k + 1;
  }

  // positive-definiteness surrogate on a sampled grid of Omega \ {0}
  log.value_positive_on_samples = true;
  for (std::uint64_t s = 1; s <= 2048; ++s) {
    const Eigen::VectorXd x = halton_in_box(s, model.omega_box);
    if (x.cwiseAbs().maxCoeff() < 1e-3) continue;
    if (!(V.value(x) > 0.0)) {
      log.value_positive_on_samples = false;
      break;
    }
  }
  return {V, log};
}

void save_value_function(const ValueFunction& vf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open value-function file for writing: " + path);
  out << "ghjb value-function v1\n";
  out << "nvars " << vf.basis.nvars << "\n";
  out << "offline_indices";
  for (int idx : vf.offline_indices) out << " " << idx;
  out << "\n";
  out << "terms " << vf.basis.size() << "\n";
  for (std::size_t i = 0; i < vf.basis.size(); ++i) {
    out << format_term(vf.basis.monomials[i], vf.coeffs[static_cast<Eigen::Index>(i)]) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ValueFunction load_value_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open value-function file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "ghjb value-function v1") {
    throw std::runtime_error("bad value-function header in " + path);
  }
  int nvars = 0;
  std::size_t nterms = 0;
  ValueFunction vf;
  {
    std::string key;
    if (!(std::getline(in, line)) || (std::istringstream(line) >> key >> nvars, key != "nvars")) {
      throw std::runtime_error("bad nvars line in " + path);
    }
    if (!std::getline(in, line)) throw std::runtime_error("missing offline_indices in " + path);
    std::istringstream iss(line);
    iss >> key;
    if (key != "offline_indices") throw std::runtime_error("bad offline_indices line in " + path);
    int idx;
    while (iss >> idx) vf.offline_indices.push_back(idx);
    if (!(std::getline(in, line)) || (std::istringstream(line) >> key >> nterms, key != "terms")) {
      throw std::runtime_error("bad terms line in " + path);
    }
  }
  if (nvars < 1 || static_cast<int>(vf.offline_indices.size()) != nvars) {
    throw std::runtime_error("inconsistent value-function header in " + path);
  }
  vf.basis.nvars = nvars;
  vf.coeffs.resize(static_cast<Eigen::Index>(nterms));
  for (std::size_t i = 0; i < nterms; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated value-function file: " + path);
    auto [mono, coeff] = parse_term(line, nvars);
    vf.basis.monomials.push_back(mono);
    vf.coeffs[static_cast<Eigen::Index>(i)] = coeff;
  }
  return vf;
}

void write_iteration_log_csv(const IterationLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open iteration log for writing: " + path);
  out << "iter,max_delta,v_integral\n";
  for (const auto& r : log.records) {
    out << r.iter << "," << format_sig17(r.max_delta) << "," << format_sig17(r.v_integral) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ghjb
