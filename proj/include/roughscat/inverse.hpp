#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "roughscat/bem_solver.hpp"
#include "roughscat/geometry.hpp"
#include "roughscat/incident.hpp"
#include "roughscat/scene.hpp"

namespace roughscat {

enum class Parametrization { bump_hw, piecewise_linear };

std::string to_string(Parametrization p);

// Unknowns of a parametric profile.
//   bump_hw:          values = (a, sigma) of a gaussian bump with support radius R.
//   piecewise_linear: values = heights at the free nodes of an n x n grid; all
//                     other nodes hold base_heights, the boundary ring stays 0.
struct ProfileParams {
  Parametrization kind = Parametrization::bump_hw;
  Eigen::VectorXd values;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double support_radius = 1.0;
  int grid_n = 0;
  std::vector<int> free_nodes;  // row-major node indices j*n + i
  std::vector<double> base_heights;

  Eigen::Index size() const { return values.size(); }
};

// Bump bounds: a in [0, 2R], sigma in [0.02R, 2R].
ProfileParams make_bump_params(double a, double sigma, double support_radius = 1.0);
// All free heights start at `initial`, bounded by [0, upper].
ProfileParams make_pl_params(int grid_n, const std::vector<int>& free_nodes, double initial, double upper,
                             double support_radius = 1.0);
// Center node of an odd grid and its four axis neighbours.
std::vector<int> center_cross_nodes(int grid_n);

// Throws std::invalid_argument on out-of-bounds values or a pinned boundary node.
void validate_params(const ProfileParams& p);
ProfileSpec to_profile_spec(const ProfileParams& p);
ProfileParams with_values(const ProfileParams& p, const Eigen::VectorXd& values);

// Incidents, observation grid and discretisation shared by every forward solve.
struct ForwardSetup {
  std::vector<IncidentWave> incidents;
  DirectionGrid grid;
  double target_h = 0.1;
  SolverOptions solver;
};

/// Far-field values stacked incident-major: index = i_incident * |grid| + i_direction.
Eigen::VectorXcd forward_map(const ProfileParams& params, const ForwardSetup& setup);

// Far-field data together with the discretisation that produced it.
struct ObservedData {
  Eigen::VectorXcd values;
  std::uint64_t discretization_hash = 0;
  std::string scene_hash;
};

ObservedData synthesize_data(const ProfileParams& truth, const ForwardSetup& setup);

// Complex gaussian noise scaled so that |noise| = level * |data| exactly.
Eigen::VectorXcd add_noise(const Eigen::VectorXcd& data, double level, std::uint64_t seed);

struct InversionConfig {
  double alpha = -1.0;  // < 0 selects 1e-3 noise_level^2 |data|^2 / |theta_ref|^2
  int max_iterations = 30;
  double fd_step = 1e-4;  // relative Jacobian column step
  int max_halvings = 20;
  double step_tolerance = 1e-4;  // stop on |delta| / |theta| below this
  double noise_level = 0.0;      // relative noise estimate |e| / |data|
};

struct InversionTrace {
  std::vector<double> objective;         // entry 0 is the initial objective
  std::vector<Eigen::VectorXd> params;   // iterate after each entry of objective
  std::vector<double> relative_step;
  int iterations = 0;
  bool converged = false;
  double alpha = 0.0;
  double final_residual = 0.0;  // |F(theta) - data|
};

class InversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InverseCrimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using ResidualFunction = std::function<Eigen::VectorXcd(const Eigen::VectorXd&)>;

/// Damped Gauss-Newton on 1/2 |F(theta) - data|^2 + alpha |theta - theta_ref|^2 with a
/// forward-difference Jacobian, projection onto the bounds and step halving.
std::pair<Eigen::VectorXd, InversionTrace> gauss_newton(const ResidualFunction& forward, const Eigen::VectorXcd& data,
                                                        const Eigen::VectorXd& init, const Eigen::VectorXd& lower,
                                                        const Eigen::VectorXd& upper, const InversionConfig& cfg);

/// Profile reconstruction. Refuses data produced on the inversion mesh.
std::pair<ProfileParams, InversionTrace> invert_profile(const ObservedData& data, const ForwardSetup& setup,
                                                        const InversionConfig& cfg, const ProfileParams& init);

void write_trace_csv(std::ostream& out, const InversionTrace& trace, const std::string& scene_hash);

struct IndicatorMap {
  std::vector<Vec3> points;
  std::vector<double> values;  // |w_sc(z; z)|
  std::string scene_hash;
};

/// One point-source solve per sample on a single factorised operator.
IndicatorMap blow_up_indicator(const Scene& scene, const std::vector<Vec3>& samples);

void write_indicator_csv(std::ostream& out, const IndicatorMap& map);

/// |farfield(a) - farfield(b)| / |farfield(a)| for one incident.
double residual_separation(const SurfaceProfile& a, const SurfaceProfile& b, const IncidentWave& incident,
                           const DirectionGrid& grid, double target_h, const SolverOptions& solver = {});

// Square pyramid on a grid_n x grid_n grid: apex at the center node, apex/2 on
// the surrounding ring. With `asymmetric`, the node two steps along +x1 gets apex/4.
ProfileSpec pyramid_spec(double apex, int grid_n = 9, bool asymmetric = false, double support_radius = 1.0);
// Quarter turn about the x3 axis of a piecewise-linear profile: node (i, j) -> (-j, i) about the center.
ProfileSpec rotate_quarter(const ProfileSpec& spec);

}  // namespace roughscat
