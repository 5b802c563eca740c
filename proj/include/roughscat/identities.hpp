#pragma once

#include <functional>
#include <vector>

#include "roughscat/bem_solver.hpp"
#include "roughscat/reports.hpp"
#include "roughscat/scene.hpp"

namespace roughscat {

// Minimum distance, in units of mesh.h, between identity sample points and the surface.
inline constexpr double kIdentityClearance = 5.0;

/// 4 pi w_inf(-d; z) against u_sc(z; d), each from its own forward solve.
IdentityReport check_mixed_reciprocity(const Scene& scene, const Vec3& d, const Vec3& z);
IdentityReport check_mixed_reciprocity(const BoundaryOperator& op, const Vec3& d, const Vec3& z,
                                       const std::string& scene_hash = {});

/// w_sc(x; y) against w_sc(y; x).
IdentityReport check_point_symmetry(const Scene& scene, const Vec3& x, const Vec3& y);
IdentityReport check_point_symmetry(const BoundaryOperator& op, const Vec3& x, const Vec3& y,
                                    const std::string& scene_hash = {});

/// Closed-form check of 4 pi w_re_inf(-d; z) = u_re(z; d) = -+ e^{ik d.z'}; no solve.
IdentityReport check_reflected_farfield(const Vec3& z, const Vec3& d, double k, BoundaryCondition bc);

/// Odd (Dirichlet) or even (Neumann) extension across the ground plane:
/// max over samples of |u(x~, -x3) +- u(x~, x3)|. lhs/rhs hold the worst sample.
IdentityReport check_extension(const LayerDensity& density, const PanelMesh& mesh, const std::vector<Vec3>& samples,
                               const std::string& scene_hash = {});

struct RadiationSampling {
  double r_min = 10.0;
  double r_max = 100.0;
  int radii = 12;
  double step = 1e-3;  // central-difference step for d/dr
};

/// Log-log slope of |d_r u - ik u| along r xhat.
SlopeReport radiation_slope(const std::function<Complex(const Vec3&)>& field, double k, const Vec3& xhat,
                            const RadiationSampling& sampling, std::string name = "radiation_decay");

/// Radiation decay of a solved scattered field over r in [10R, 100R].
SlopeReport check_radiation_decay(const LayerDensity& density, const PanelMesh& mesh, const Vec3& xhat,
                                  const std::string& scene_hash = {});

}  // namespace roughscat
