#include "ghjb/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ghjb/format.hpp"

namespace ghjb {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& context,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) throw SchemaError("unknown key '" + key + "' in " + context);
  }
}

const json& require(const json& j, const std::string& context, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError("missing key '" + std::string(key) + "' in " + context);
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError("expected a number at " + where);
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError("expected an integer at " + where);
  return j.get<int>();
}

Eigen::VectorXd as_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError("expected an array at " + where);
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = as_number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Eigen::Vector3d as_vector3(const json& j, const std::string& where) {
  const Eigen::VectorXd v = as_vector(j, where);
  if (v.size() != 3) throw SchemaError("expected 3 entries at " + where);
  return v;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("invalid JSON in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw SchemaError("scenario root must be an object in " + path);
  check_keys(j, "scenario", {"name", "model", "basis", "initial_policy", "policy_iteration",
                             "barriers", "x0", "simulation", "output"});

  ScenarioConfig cfg;
  cfg.name = require(j, "scenario", "name").get<std::string>();

  {
    const json& jm = require(j, "scenario", "model");
    check_keys(jm, "model", {"type", "inertia", "u_bound"});
    cfg.model_type = require(jm, "model", "type").get<std::string>();
    if (cfg.model_type != "hovercraft" && cfg.model_type != "spacecraft") {
      throw SchemaError("model.type must be 'hovercraft' or 'spacecraft'");
    }
    if (jm.contains("inertia")) {
      if (cfg.model_type != "spacecraft") throw SchemaError("model.inertia only applies to the spacecraft");
      const json& ji = jm["inertia"];
      if (!ji.is_array() || ji.size() != 3) throw SchemaError("model.inertia must be a 3x3 array");
      for (int r = 0; r < 3; ++r) {
        const Eigen::Vector3d row = as_vector3(ji[static_cast<std::size_t>(r)], "model.inertia row");
        cfg.inertia.row(r) = row.transpose();
      }
    }
    if (jm.contains("u_bound")) {
      if (cfg.model_type != "spacecraft") throw SchemaError("model.u_bound only applies to the spacecraft");
      cfg.u_bound = as_number(jm["u_bound"], "model.u_bound");
    }
  }

  {
    const json& jb = require(j, "scenario", "basis");
    check_keys(jb, "basis", {"degrees"});
    const json& jd = require(jb, "basis", "degrees");
    if (!jd.is_array() || jd.empty()) throw SchemaError("basis.degrees must be a non-empty array");
    for (std::size_t i = 0; i < jd.size(); ++i) {
      cfg.basis_degrees.insert(as_int(jd[i], "basis.degrees"));
    }
  }

  {
    const json& jp = require(j, "scenario", "initial_policy");
    if (!jp.is_array() || jp.empty()) {
      throw SchemaError("initial_policy must be a non-empty array (one term list per input)");
    }
    for (std::size_t c = 0; c < jp.size(); ++c) {
      if (!jp[c].is_array()) throw SchemaError("initial_policy entries must be arrays of term strings");
      std::vector<std::string> comp;
      for (std::size_t t = 0; t < jp[c].size(); ++t) {
        if (!jp[c][t].is_string()) throw SchemaError("initial_policy terms must be strings");
        comp.push_back(jp[c][t].get<std::string>());
      }
      cfg.initial_policy_terms.push_back(std::move(comp));
    }
  }

  if (j.contains("policy_iteration")) {
    const json& jpi = j["policy_iteration"];
    check_keys(jpi, "policy_iteration", {"tol", "max_iter", "admissibility_samples"});
    if (jpi.contains("tol")) cfg.policy_iteration.tol = as_number(jpi["tol"], "policy_iteration.tol");
    if (jpi.contains("max_iter")) cfg.policy_iteration.max_iter = as_int(jpi["max_iter"], "policy_iteration.max_iter");
    if (jpi.contains("admissibility_samples")) {
      cfg.policy_iteration.admissibility_samples =
          as_int(jpi["admissibility_samples"], "policy_iteration.admissibility_samples");
    }
  }

  if (j.contains("barriers")) {
    const json& jb = j["barriers"];
    if (!jb.is_array()) throw SchemaError("barriers must be an array");
    for (std::size_t i = 0; i < jb.size(); ++i) {
      const json& b = jb[i];
      const std::string ctx = "barriers[" + std::to_string(i) + "]";
      BarrierConfig bc;
      bc.type = require(b, ctx, "type").get<std::string>();
      if (bc.type == "integrator_box") {
        check_keys(b, ctx, {"type", "state_index", "lo", "hi", "alpha"});
        bc.state_index = as_int(require(b, ctx, "state_index"), ctx + ".state_index");
        bc.lo = as_number(require(b, ctx, "lo"), ctx + ".lo");
        bc.hi = as_number(require(b, ctx, "hi"), ctx + ".hi");
        bc.alpha = as_number(require(b, ctx, "alpha"), ctx + ".alpha");
      } else if (bc.type == "pointing") {
        check_keys(b, ctx, {"type", "boresight", "inertial_dir", "half_cone_deg", "alpha1", "alpha2"});
        bc.boresight = as_vector3(require(b, ctx, "boresight"), ctx + ".boresight");
        bc.inertial_dir = as_vector3(require(b, ctx, "inertial_dir"), ctx + ".inertial_dir");
        bc.half_cone_deg = as_number(require(b, ctx, "half_cone_deg"), ctx + ".half_cone_deg");
        bc.alpha1 = as_number(require(b, ctx, "alpha1"), ctx + ".alpha1");
        bc.alpha2 = as_number(require(b, ctx, "alpha2"), ctx + ".alpha2");
      } else {
        throw SchemaError(ctx + ".type must be 'integrator_box' or 'pointing'");
      }
      cfg.barriers.push_back(std::move(bc));
    }
  }

  cfg.x0 = as_vector(require(j, "scenario", "x0"), "x0");

  if (j.contains("simulation")) {
    const json& js = j["simulation"];
    check_keys(js, "simulation", {"dt_sample", "substeps", "horizon", "stop_tol"});
    if (js.contains("dt_sample")) cfg.simulation.dt_sample = as_number(js["dt_sample"], "simulation.dt_sample");
    if (js.contains("substeps")) cfg.simulation.substeps = as_int(js["substeps"], "simulation.substeps");
    if (js.contains("horizon")) cfg.simulation.horizon = as_number(js["horizon"], "simulation.horizon");
    if (js.contains("stop_tol")) cfg.simulation.stop_tol = as_number(js["stop_tol"], "simulation.stop_tol");
  }

  if (j.contains("output")) {
    const json& jo = j["output"];
    check_keys(jo, "output", {"dir"});
    if (jo.contains("dir")) cfg.out_dir = jo["dir"].get<std::string>();
  }

  // cross-field checks that need no model construction
  const int expected_n = cfg.model_type == "hovercraft" ? 2 : 9;
  if (cfg.x0.size() != expected_n) {
    throw SchemaError("x0 must have " + std::to_string(expected_n) + " entries for model '" +
                      cfg.model_type + "'");
  }
  const int expected_m = cfg.model_type == "hovercraft" ? 1 : 3;
  if (static_cast<int>(cfg.initial_policy_terms.size()) != expected_m) {
    throw SchemaError("initial_policy must have " + std::to_string(expected_m) + " components");
  }
  return cfg;
}

ControlAffineModel build_model(const ScenarioConfig& cfg) {
  if (cfg.model_type == "hovercraft") return hovercraft_model();
  return spacecraft_model(cfg.inertia, cfg.u_bound);
}

Basis build_basis(const ScenarioConfig& cfg, const ControlAffineModel& model) {
  try {
    return generate_even_basis(model.n_offline(), cfg.basis_degrees);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("basis.degrees: ") + e.what());
  }
}

PolynomialPolicy build_initial_policy(const ScenarioConfig& cfg, const ControlAffineModel& model) {
  PolynomialPolicy u0;
  for (std::size_t c = 0; c < cfg.initial_policy_terms.size(); ++c) {
    std::string text;
    for (const auto& term : cfg.initial_policy_terms[c]) text += term + "\n";
    try {
      u0.components.push_back(parse_polynomial(text, model.n_offline()));
    } catch (const std::invalid_argument& e) {
      throw SchemaError("initial_policy[" + std::to_string(c) + "]: " + e.what());
    }
  }
  return u0;
}

std::vector<BarrierSpec> build_barriers(const ScenarioConfig& cfg, const ControlAffineModel& model) {
  std::vector<BarrierSpec> out;
  for (const BarrierConfig& bc : cfg.barriers) {
    if (bc.type == "integrator_box") {
      IntegratorBoxSpec spec{bc.state_index, bc.lo, bc.hi, bc.alpha};
      validate_integrator_box(spec, model);
      out.emplace_back(spec);
    } else {
      if (cfg.model_type != "spacecraft") {
        throw SchemaError("pointing barriers require the spacecraft model");
      }
      out.emplace_back(pointing_barrier(bc.boresight.normalized(), bc.inertial_dir,
                                        bc.half_cone_deg * M_PI / 180.0, cfg.inertia,
                                        bc.alpha1, bc.alpha2));
    }
  }
  return out;
}

std::string echo_params(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "name: " << cfg.name << "\n";
  out << "model.type: " << cfg.model_type << "\n";
  if (cfg.model_type == "spacecraft") {
    for (int r = 0; r < 3; ++r) {
      out << "model.inertia[" << r << "]:";
      for (int c = 0; c < 3; ++c) out << " " << format_double(cfg.inertia(r, c));
      out << "\n";
    }
    out << "model.u_bound: " << format_double(cfg.u_bound) << "\n";
  }
  out << "basis.degrees:";
  for (int d : cfg.basis_degrees) out << " " << d;
  out << "\n";
  for (std::size_t c = 0; c < cfg.initial_policy_terms.size(); ++c) {
    out << "initial_policy[" << c << "]:";
    for (const auto& t : cfg.initial_policy_terms[c]) out << " (" << t << ")";
    out << "\n";
  }
  out << "policy_iteration.tol: " << format_double(cfg.policy_iteration.tol) << "\n";
  out << "policy_iteration.max_iter: " << cfg.policy_iteration.max_iter << "\n";
  out << "policy_iteration.admissibility_samples: " << cfg.policy_iteration.admissibility_samples
      << "\n";
  for (std::size_t i = 0; i < cfg.barriers.size(); ++i) {
    const BarrierConfig& b = cfg.barriers[i];
    out << "barriers[" << i << "]: " << b.type;
    if (b.type == "integrator_box") {
      out << " state_index=" << b.state_index << " lo=" << format_double(b.lo)
          << " hi=" << format_double(b.hi) << " alpha=" << format_double(b.alpha);
    } else {
      out << " boresight=[" << format_double(b.boresight.x()) << " "
          << format_double(b.boresight.y()) << " " << format_double(b.boresight.z()) << "]"
          << " inertial_dir=[" << format_double(b.inertial_dir.x()) << " "
          << format_double(b.inertial_dir.y()) << " " << format_double(b.inertial_dir.z()) << "]"
          << " half_cone_deg=" << format_double(b.half_cone_deg)
          << " alpha1=" << format_double(b.alpha1) << " alpha2=" << format_double(b.alpha2);
    }
    out << "\n";
  }
  out << "x0:";
  for (Eigen::Index i = 0; i < cfg.x0.size(); ++i) out << " " << format_double(cfg.x0[i]);
  out << "\n";
  out << "simulation.dt_sample: " << format_double(cfg.simulation.dt_sample) << "\n";
  out << "simulation.substeps: " << cfg.simulation.substeps << "\n";
  out << "simulation.horizon: " << format_double(cfg.simulation.horizon) << "\n";
  out << "simulation.stop_tol: " << format_double(cfg.simulation.stop_tol) << "\n";
  out << "output.dir: " << cfg.out_dir << "\n";
  return out.str();
}

}  // namespace ghjb
