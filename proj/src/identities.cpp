#include "roughscat/identities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "roughscat/halfspace_green.hpp"

namespace roughscat {

namespace {

void require_clearance(const PanelMesh& mesh, const Vec3& p, const char* what) {
  const double dist = distance_to_mesh(mesh, p);
  if (dist < kIdentityClearance * mesh.h) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s (%g, %g, %g) is %.3g from the surface; identities need >= 5h = %.3g", what,
                  p[0], p[1], p[2], dist, kIdentityClearance * mesh.h);
    throw std::invalid_argument(buf);
  }
}

IncidentWave plane_wave_from_direction(const Vec3& d, double k, BoundaryCondition bc) {
  if (!(d[2] < 0.0) || std::abs(d.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("incident direction must be a unit vector with negative x3");
  }
  const double phi = std::acos(std::clamp(-d[2], -1.0, 1.0));
  const double theta = std::atan2(d[1], d[0]);
  return make_plane_wave(phi, theta, k, bc);
}

}  // namespace

IdentityReport check_mixed_reciprocity(const BoundaryOperator& op, const Vec3& d, const Vec3& z,
                                       const std::string& scene_hash) {
  const PanelMesh& mesh = op.mesh();
  require_clearance(mesh, z, "reciprocity point z");
  const IncidentWave plane = plane_wave_from_direction(d, op.k(), op.bc());
  const IncidentWave point = make_point_source(z, op.k(), op.bc());
  // Direction of the plane wave actually used, so both sides see the same d.
  const Vec3 d_used = plane.plane().direction();

  const auto [plane_density, plane_report] = op.solve(plane);
  const auto [point_density, point_report] = op.solve(point);
  const FarFieldPattern ff = eval_farfield(point_density, mesh, make_direction_grid({-d_used}));
  const Complex lhs = 4.0 * kPi * ff.values[0];
  const Complex rhs = eval_scattered(plane_density, mesh, z);
  return make_identity_report("mixed_reciprocity", lhs, rhs, scene_hash);
}

IdentityReport check_mixed_reciprocity(const Scene& scene, const Vec3& d, const Vec3& z) {
  const BoundaryOperator op(scene.mesh, scene.k, scene.bc);
  return check_mixed_reciprocity(op, d, z, scene.hash);
}

IdentityReport check_point_symmetry(const BoundaryOperator& op, const Vec3& x, const Vec3& y,
                                    const std::string& scene_hash) {
  const PanelMesh& mesh = op.mesh();
  if ((x - y).norm() < kSingularityGuard) throw std::invalid_argument("point symmetry needs x != y");
  require_clearance(mesh, x, "symmetry point x");
  require_clearance(mesh, y, "symmetry point y");
  const auto [from_y, ry] = op.solve(make_point_source(y, op.k(), op.bc()));
  const auto [from_x, rx] = op.solve(make_point_source(x, op.k(), op.bc()));
  return make_identity_report("point_symmetry", eval_scattered(from_y, mesh, x), eval_scattered(from_x, mesh, y),
                              scene_hash);
}

IdentityReport check_point_symmetry(const Scene& scene, const Vec3& x, const Vec3& y) {
  const BoundaryOperator op(scene.mesh, scene.k, scene.bc);
  return check_point_symmetry(op, x, y, scene.hash);
}

IdentityReport check_reflected_farfield(const Vec3& z, const Vec3& d, double k, BoundaryCondition bc) {
  if (!(z[2] >= 0.0)) throw std::invalid_argument("reflected far field: z3 must be >= 0");
  const IncidentWave plane = plane_wave_from_direction(d, k, bc);
  const double sign = image_sign(bc);
  // Left: far-field coefficient of the image source sign * Phi(., z') in direction -d.
  const Vec3 z_img = ground_mirror(z);
  const Vec3 obs = -plane.plane().direction();
  const Complex w_re_inf = sign * std::exp(-kI * (k * obs.dot(z_img))) / (4.0 * kPi);
  // Right: Snell-reflected plane wave sign * e^{ik d'.z}.
  const Complex u_re = sign * std::exp(kI * (k * plane.plane().specular().dot(z)));
  return make_identity_report("reflected_farfield", 4.0 * kPi * w_re_inf, u_re);
}

IdentityReport check_extension(const LayerDensity& density, const PanelMesh& mesh, const std::vector<Vec3>& samples,
                               const std::string& scene_hash) {
  const bool dirichlet = density.formulation == Formulation::dirichlet_combined;
  const double clearance = kEvalClearance * mesh.h;
  IdentityReport worst = make_identity_report(dirichlet ? "odd_extension" : "even_extension", {}, {}, scene_hash);
  for (const Vec3& x : samples) {
    if (std::hypot(x[0], x[1], x[2]) <= mesh.support_radius) {
      throw std::invalid_argument("extension samples must satisfy |x| > R");
    }
    const Vec3 xm = ground_mirror(x);
    if (distance_to_mesh(mesh, x) < clearance || distance_to_mesh(mesh, xm) < clearance) {
      throw std::invalid_argument("extension sample too close to the surface or its image panels");
    }
    const Complex below = eval_scattered_unchecked(density, mesh, xm);
    const Complex above = eval_scattered_unchecked(density, mesh, x);
    const Complex expected = dirichlet ? -above : above;
    const double err = std::abs(below - expected);
    if (err >= worst.abs_err) worst = make_identity_report(worst.name, below, expected, scene_hash);
  }
  return worst;
}

SlopeReport radiation_slope(const std::function<Complex(const Vec3&)>& field, double k, const Vec3& xhat,
                            const RadiationSampling& s, std::string name) {
  if (s.radii < 2 || !(s.r_min > 0.0) || !(s.r_max > s.r_min)) throw std::invalid_argument("radiation: bad sampling");
  SlopeReport rep;
  rep.name = std::move(name);
  bool all_zero = true;
  for (int i = 0; i < s.radii; ++i) {
    const double r = s.r_min * std::pow(s.r_max / s.r_min, static_cast<double>(i) / (s.radii - 1));
    const Complex u = field(r * xhat);
    const Complex du = (field((r + s.step) * xhat) - field((r - s.step) * xhat)) / (2.0 * s.step);
    const double res = std::abs(du - kI * k * u);
    all_zero = all_zero && res == 0.0;
    rep.radii.push_back(r);
    rep.residuals.push_back(res);
  }
  rep.vacuous = all_zero;
  if (!all_zero) rep.slope = loglog_slope(rep.radii, rep.residuals);
  return rep;
}

SlopeReport check_radiation_decay(const LayerDensity& density, const PanelMesh& mesh, const Vec3& xhat,
                                  const std::string& scene_hash) {
  const double R = mesh.support_radius;
  RadiationSampling s;
  s.r_min = 10.0 * R;
  s.r_max = 100.0 * R;
  auto field = [&](const Vec3& x) { return eval_scattered_unchecked(density, mesh, x); };
  SlopeReport rep = radiation_slope(field, density.k, xhat, s);
  rep.scene_hash = scene_hash;
  return rep;
}

}  // namespace roughscat
