#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughscat/bem_solver.hpp"
#include "roughscat/geometry.hpp"
#include "roughscat/incident.hpp"
#include "roughscat/inverse.hpp"
#include "roughscat/types.hpp"

namespace roughscat {

// Field-level configuration error; `field` is the dotted key path.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::invalid_argument("config: " + field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct IncidentSpec {
  enum class Type { plane, point } type = Type::plane;
  double phi = 0.0;
  double theta = 0.0;
  Vec3 z = Vec3::Zero();
};

struct IdentitySection {
  int reciprocity_pairs = 3;
  int symmetry_pairs = 5;
  int reflected_triples = 100;
  int extension_samples = 50;
};

struct IndicatorLine {
  Vec3 start = Vec3::Zero();
  Vec3 end = Vec3::Zero();
  int count = 8;
};

struct IndicatorSection {
  std::vector<IndicatorLine> lines;
};

struct InversionSection {
  Parametrization parametrization = Parametrization::bump_hw;
  std::vector<double> init;
  double data_target_h = 0.07;
  double noise = 0.01;
  double alpha = -1.0;
  int max_iterations = 30;
  int grid_n = 5;
  std::vector<int> free_nodes;  // empty: center cross
  double upper = 1.0;
};

struct MaxwellSection {
  Vec3 y{0.0, 0.0, 0.5};
  Vec3 p{1.0, 0.0, 0.0};
  std::optional<double> k;  // defaults to the scene wavenumber
  int plane_samples = 200;
  int pairs = 100;
};

// Suite thresholds before --tolerance-scale is applied.
struct Tolerances {
  double flat_null = 1e-12;
  double reciprocity = 2e-2;
  double symmetry = 2e-2;
  double reflected_farfield = 1e-12;
  double extension = 1e-12;
  double radiation_slope_center = -2.0;
  double radiation_slope_halfwidth = 0.2;
  double pec = 1e-12;
  double reflection_principle = 1e-12;
  double maxwell_fd = 1e-5;
  double silver_muller_slope = -0.8;
  double indicator_ratio = 10.0;
  double indicator_off_ratio = 2.0;
  double inversion_param = 0.05;
  double inversion_residual_factor = 3.0;
  double convergence = 5e-2;
};

// Loosen every threshold by `scale` >= 0 (1 leaves them unchanged). Error bounds
// are multiplied, slope windows widen around their centre, ratio floors divide.
Tolerances scaled(const Tolerances& t, double scale);

struct SceneConfig {
  double k = 2.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  ProfileSpec profile;
  std::vector<IncidentSpec> incidents;
  double target_h = 0.1;
  int n_theta = 10;
  int n_phi = 10;
  std::string output_dir;  // empty: not set in the file
  std::uint64_t seed = 1;
  IdentitySection identities;
  std::optional<IndicatorSection> indicator;
  std::optional<InversionSection> inversion;
  MaxwellSection maxwell;
  Tolerances tolerances;
  std::string hash;  // hex content hash of the canonical config, output_dir excluded
};

/// Parses and validates a JSON config. Unknown keys are rejected.
SceneConfig parse_config(const std::string& text);
SceneConfig load_config(const std::string& path);

std::vector<IncidentWave> make_incidents(const SceneConfig& cfg);
DirectionGrid make_grid(const SceneConfig& cfg);

}  // namespace roughscat
