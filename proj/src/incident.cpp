#include "roughscat/incident.hpp"

#include <cmath>
#include <stdexcept>

#include "roughscat/halfspace_green.hpp"

namespace roughscat {

Vec3 PlaneWave::direction() const {
  return {std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), -std::cos(phi)};
}

Vec3 PlaneWave::specular() const { return ground_mirror(direction()); }

IncidentWave make_plane_wave(double phi, double theta, double k, BoundaryCondition bc) {
  if (!(phi > -kPi / 2 && phi < kPi / 2)) throw std::invalid_argument("plane wave: phi must lie in (-pi/2, pi/2)");
  if (!std::isfinite(theta)) throw std::invalid_argument("plane wave: theta is not finite");
  make_kernel(k, bc);
  return {PlaneWave{phi, theta}, k, bc};
}

IncidentWave make_point_source(const Vec3& z, double k, BoundaryCondition bc) {
  if (!z.allFinite()) throw std::invalid_argument("point source: location is not finite");
  if (!(z[2] > 0.0)) throw std::invalid_argument("point source: z3 must be positive");
  make_kernel(k, bc);
  return {PointSource{z}, k, bc};
}

void check_source_above(const IncidentWave& w, const SurfaceProfile& profile) {
  if (!w.is_point()) return;
  const Vec3& z = w.point().z;
  if (!(z[2] > profile.height(z))) {
    throw std::invalid_argument("point source lies on or below the surface (z3 <= f(z~))");
  }
}

Complex eval_plane_pair(const IncidentWave& w, const Vec3& x) {
  const Vec3 d = w.plane().direction();
  const double k = w.k;
  const double gamma = -d[2];
  const Complex lateral = std::exp(kI * (k * (d[0] * x[0] + d[1] * x[1])));
  return lateral * (std::exp(-kI * (k * gamma * x[2])) + image_sign(w.bc) * std::exp(kI * (k * gamma * x[2])));
}

CVec3 grad_plane_pair(const IncidentWave& w, const Vec3& x) {
  const Vec3 d = w.plane().direction();
  const Vec3 ds = ground_mirror(d);
  const double k = w.k;
  const double gamma = -d[2];
  const Complex lateral = kI * k * std::exp(kI * (k * (d[0] * x[0] + d[1] * x[1])));
  const Complex down = lateral * std::exp(-kI * (k * gamma * x[2]));
  const Complex up = lateral * std::exp(kI * (k * gamma * x[2]));
  return down * d.cast<Complex>() + image_sign(w.bc) * up * ds.cast<Complex>();
}

Complex eval_point_pair(const IncidentWave& w, const Vec3& x) {
  const Vec3& z = w.point().z;
  if ((x - z).norm() < kSingularityGuard) throw std::domain_error("point source pair evaluated at the source z");
  if ((x - ground_mirror(z)).norm() < kSingularityGuard) {
    throw std::domain_error("point source pair evaluated at the image source z'");
  }
  return eval_G(GreenKernel{w.k, w.bc}, x, z);
}

CVec3 grad_point_pair(const IncidentWave& w, const Vec3& x) {
  const Vec3& z = w.point().z;
  if ((x - z).norm() < kSingularityGuard) throw std::domain_error("point source pair evaluated at the source z");
  if ((x - ground_mirror(z)).norm() < kSingularityGuard) {
    throw std::domain_error("point source pair evaluated at the image source z'");
  }
  return grad_G_x(GreenKernel{w.k, w.bc}, x, z);
}

Complex eval_pair(const IncidentWave& w, const Vec3& x) {
  return w.is_plane() ? eval_plane_pair(w, x) : eval_point_pair(w, x);
}

CVec3 grad_pair(const IncidentWave& w, const Vec3& x) {
  return w.is_plane() ? grad_plane_pair(w, x) : grad_point_pair(w, x);
}

}  // namespace roughscat
