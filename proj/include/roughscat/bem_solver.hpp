#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "roughscat/geometry.hpp"
#include "roughscat/incident.hpp"
#include "roughscat/panel_quadrature.hpp"

namespace roughscat {

enum class Formulation { dirichlet_combined, neumann_single };

std::string to_string(Formulation f);
Formulation formulation_for(BoundaryCondition bc);

// Piecewise-constant density of the layer-potential representation of the
// scattered field on the perturbed part of the surface.
//   dirichlet_combined: u(x) = int [dG_D/dnu(y) - i eta G_D(x, y)] density(y) ds(y)
//   neumann_single:     u(x) = int G_N(x, y) density(y) ds(y)
struct LayerDensity {
  Eigen::VectorXcd coefficients;
  Formulation formulation = Formulation::dirichlet_combined;
  double coupling = 0.0;  // eta, 1/length
  double k = 1.0;
};

struct SolveReport {
  std::size_t panel_count = 0;
  double condition_estimate = 0.0;  // 1-norm estimate
  double residual_norm = 0.0;
  double rhs_norm = 0.0;
  double wall_time_s = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Observation directions on the upper hemisphere:
// xhat = (sin phi cos theta, sin phi sin theta, cos phi).
struct DirectionGrid {
  std::vector<Vec3> directions;
  std::vector<double> theta;  // azimuth
  std::vector<double> phi;    // polar angle from +e3

  std::size_t size() const { return directions.size(); }
};

// n_phi polar midpoints in (0, pi/2) times n_theta azimuths in [0, 2 pi).
DirectionGrid make_hemisphere_grid(int n_theta, int n_phi);
DirectionGrid make_direction_grid(const std::vector<Vec3>& directions);

struct FarFieldPattern {
  DirectionGrid grid;
  Eigen::VectorXcd values;
  double k = 1.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  double mesh_h = 0.0;
  std::string scene_hash;
};

struct SolverOptions {
  QuadratureOptions quadrature;
  double max_condition = 1e8;
  double residual_tolerance = 1e-10;  // relative to the right-hand side norm
};

/// Collocation matrix of the second-kind boundary equation on one mesh,
/// factorised once and reused for every right-hand side.
class BoundaryOperator {
 public:
  BoundaryOperator(const PanelMesh& mesh, double k, BoundaryCondition bc, const SolverOptions& opts = {});

  const PanelMesh& mesh() const { return mesh_; }
  double k() const { return k_; }
  BoundaryCondition bc() const { return bc_; }
  double coupling() const { return eta_; }
  double condition_estimate() const { return condition_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  Eigen::VectorXcd right_hand_side(const IncidentWave& inc) const;
  std::pair<LayerDensity, SolveReport> solve(const Eigen::VectorXcd& rhs) const;
  std::pair<LayerDensity, SolveReport> solve(const IncidentWave& inc) const;

 private:
  PanelMesh mesh_;
  double k_;
  BoundaryCondition bc_;
  double eta_;
  SolverOptions opts_;
  Eigen::MatrixXcd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double condition_ = 0.0;
  double assembly_time_ = 0.0;
};

// Rejects meshes of dipping profiles and point sources within 2h of the surface.
void check_solvable(const PanelMesh& mesh, const IncidentWave& inc);

std::pair<LayerDensity, SolveReport> solve_scattered(const PanelMesh& mesh, const IncidentWave& inc,
                                                     const SolverOptions& opts = {});

// Minimum admissible distance, in units of mesh.h, for near-field evaluation.
inline constexpr double kEvalClearance = 2.0;

// Scattered field at x. Requires x (and x' when x3 < 0) at least 2h from every panel.
Complex eval_scattered(const LayerDensity& density, const PanelMesh& mesh, const Vec3& x,
                       const QuadratureOptions& quad = {});
// Same without the clearance check; the caller guarantees admissibility.
Complex eval_scattered_unchecked(const LayerDensity& density, const PanelMesh& mesh, const Vec3& x,
                                 const QuadratureOptions& quad = {});

FarFieldPattern eval_farfield(const LayerDensity& density, const PanelMesh& mesh, const DirectionGrid& grid);

void write_farfield_csv(std::ostream& out, const FarFieldPattern& ff, const std::string& extra_header = {});
void write_density_csv(std::ostream& out, const LayerDensity& density);

}  // namespace roughscat
