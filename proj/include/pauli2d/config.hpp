#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pauli2d/eigensolver.hpp"
#include "pauli2d/fields.hpp"
#include "pauli2d/grid.hpp"
#include "pauli2d/pauli_operator.hpp"

namespace pauli2d {

using Json = nlohmann::ordered_json;

// {"kind": ..., "params": {...}}; linear_combination carries
// "terms": [{"weight": w, "field": {...}}] instead of params.
// Unknown keys are a ConfigError.
FieldDescriptor field_from_json(const Json& j);
Json field_to_json(const FieldDescriptor& f);

struct CertifyConfig {
  int N = 0;
  std::vector<double> rho;
  double epsilon_h = 0.0;
  std::optional<double> h_radius;
  bool search = true;       // search epsilon_h when the plain basis fails
  bool cross_check = false; // also run the eigensolver on the same grid
};

struct SweepConfig {
  std::vector<double> lambdas;
  std::vector<GridSpec> ladder;
  double c = 0.9;
  double rung_tolerance = 0.1;
};

struct ScenarioConfig {
  FieldDescriptor field;
  std::optional<GridSpec> grid;
  double g = 2.0;
  Spin spin = Spin::minus;
  double lambda = 1.0;
  EigenOptions eigen;
  std::vector<GridSpec> eigen_ladder;
  CertifyConfig certify;
  SweepConfig sweep;
  std::vector<double> radii;
  int angles = 64;
  int check_samples = 10;
  std::uint64_t seed = 20240611;
};

ScenarioConfig parse_scenario(const Json& j);
ScenarioConfig parse_scenario_text(const std::string& text);
// Fully resolved configuration, defaults included.
Json scenario_to_json(const ScenarioConfig& c);

}  // namespace pauli2d
