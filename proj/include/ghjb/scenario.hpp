#pragma once

#include <Eigen/Dense>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghjb/cbf.hpp"
#include "ghjb/dynamics.hpp"
#include "ghjb/sga.hpp"
#include "ghjb/sim.hpp"

namespace ghjb {

// Config file rejected before any computation runs.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

struct BarrierConfig {
  std::string type;  // "integrator_box" | "pointing"
  // integrator_box
  int state_index = -1;
  double lo = 0.0, hi = 0.0, alpha = 0.0;
  // pointing
  Eigen::Vector3d boresight = Eigen::Vector3d::Zero();
  Eigen::Vector3d inertial_dir = Eigen::Vector3d::Zero();
  double half_cone_deg = 0.0;
  double alpha1 = 1.0, alpha2 = 1.0;
};

struct ScenarioConfig {
  std::string name;

  std::string model_type;  // "hovercraft" | "spacecraft"
  Eigen::Matrix3d inertia = default_inertia();
  double u_bound = 0.123;  // spacecraft input box half-width

  std::set<int> basis_degrees;
  std::vector<std::vector<std::string>> initial_policy_terms;  // per input component
  PolicyIterationConfig policy_iteration;

  std::vector<BarrierConfig> barriers;

  Eigen::VectorXd x0;
  SimulationConfig simulation;
  std::string out_dir = "out";
};

// Parses and validates the scenario file; unknown keys are rejected with the
// offending key named.
ScenarioConfig load_scenario(const std::string& path);

ControlAffineModel build_model(const ScenarioConfig& cfg);
Basis build_basis(const ScenarioConfig& cfg, const ControlAffineModel& model);
PolynomialPolicy build_initial_policy(const ScenarioConfig& cfg, const ControlAffineModel& model);
std::vector<BarrierSpec> build_barriers(const ScenarioConfig& cfg, const ControlAffineModel& model);

// Deterministic "key: value" listing of every scenario parameter.
std::string echo_params(const ScenarioConfig& cfg);

}  // namespace ghjb
