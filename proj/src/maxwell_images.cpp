#include "roughscat/maxwell_images.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughscat/halfspace_green.hpp"

namespace roughscat {

DipoleSource make_dipole(const Vec3& y, const Vec3& p, double k) {
  if (!(y[2] > 0.0)) throw std::invalid_argument("dipole: y3 must be positive");
  if (!(p.norm() > 0.0) || !p.allFinite()) throw std::invalid_argument("dipole: polarisation must be nonzero");
  make_kernel(k, BoundaryCondition::dirichlet);
  return {y, p, k};
}

EMSample eval_dipole(const DipoleSource& src, const Vec3& x) {
  const Vec3 rvec = x - src.y;
  const double r = rvec.norm();
  if (r < kSingularityGuard) throw std::domain_error("dipole field evaluated at the dipole point");
  const double k = src.k;
  const Vec3 rhat = rvec / r;
  const Complex phi = fundamental(k, r);
  const Complex a = kI * k - 1.0 / r;
  const Complex g = phi * a;                        // dPhi/dr
  const Complex gp = phi * (a * a + 1.0 / (r * r));  // d2Phi/dr2
  const CVec3 p = src.p.cast<Complex>();
  const CVec3 rh = rhat.cast<Complex>();

  EMSample s;
  s.x = x;
  s.H = g * cross(rh, p);
  // Hessian(Phi) p = Phi'' (rhat.p) rhat + Phi'/r (p - (rhat.p) rhat).
  const Complex rp = rhat.dot(src.p);
  const CVec3 hess_p = gp * rp * rh + (g / r) * (p - rp * rh);
  s.E = (kI / k) * (hess_p + k * k * phi * p);
  return s;
}

EMSample eval_image_field(const DipoleSource& src, const Plane& plane, const Vec3& x) {
  const Vec3 xr = mirror(x, plane);
  if ((xr - src.y).norm() < kSingularityGuard) throw std::domain_error("image field evaluated at the image dipole");
  const EMSample in = eval_dipole(src, xr);
  EMSample s;
  s.x = x;
  s.E = -mirror_direction(in.E, plane);
  s.H = mirror_direction(in.H, plane);
  return s;
}

EMSample eval_total_field(const DipoleSource& src, const Plane& plane, const Vec3& x) {
  const EMSample in = eval_dipole(src, x);
  const EMSample re = eval_image_field(src, plane, x);
  return {x, in.E + re.E, in.H + re.H};
}

CVec3 fd_curl(const std::function<CVec3(const Vec3&)>& f, const Vec3& x, double step) {
  std::array<CVec3, 3> d;  // d[j] = dF/dx_j
  for (int j = 0; j < 3; ++j) {
    Vec3 xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    d[j] = (f(xp) - f(xm)) / (2.0 * step);
  }
  return {d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]};
}

Complex fd_divergence(const std::function<CVec3(const Vec3&)>& f, const Vec3& x, double step) {
  Complex div{};
  for (int j = 0; j < 3; ++j) {
    Vec3 xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    div += (f(xp)[j] - f(xm)[j]) / (2.0 * step);
  }
  return div;
}

double maxwell_residual(const EMField& field, double k, const Vec3& x, double step) {
  const EMSample s = field(x);
  auto E = [&](const Vec3& p) { return field(p).E; };
  auto H = [&](const Vec3& p) { return field(p).H; };
  const double r1 = (fd_curl(E, x, step) - kI * k * s.H).norm();
  const double r2 = (fd_curl(H, x, step) + kI * k * s.E).norm();
  return std::max(r1, r2) / (k * std::max(s.E.norm(), s.H.norm()));
}

double divergence_residual(const EMField& field, double k, const Vec3& x, double step) {
  const EMSample s = field(x);
  auto E = [&](const Vec3& p) { return field(p).E; };
  auto H = [&](const Vec3& p) { return field(p).H; };
  const double r = std::max(std::abs(fd_divergence(E, x, step)), std::abs(fd_divergence(H, x, step)));
  return r / (k * std::max(s.E.norm(), s.H.norm()));
}

ResidualReport check_pec(const DipoleSource& src, const Plane& plane, const std::vector<Vec3>& plane_samples) {
  ResidualReport rep;
  rep.name = "pec_tangential";
  const CVec3 nu = plane.normal.cast<Complex>();
  for (const Vec3& x : plane_samples) {
    if (std::abs((x - plane.point).dot(plane.normal)) > 1e-12 * std::max(1.0, x.norm())) {
      throw std::invalid_argument("pec samples must lie on the plane");
    }
    const EMSample in = eval_dipole(src, x);
    const EMSample re = eval_image_field(src, plane, x);
    const double tangential = cross(nu, in.E + re.E).norm();
    rep.residual = std::max(rep.residual, tangential / in.E.norm());
    ++rep.samples;
  }
  return rep;
}

ReflectionPrincipleReport check_reflection_principle(const DipoleSource& src, const Plane& plane,
                                                     const std::vector<Vec3>& samples) {
  ReflectionPrincipleReport rep;
  rep.electric.name = "reflection_principle_E";
  rep.magnetic.name = "reflection_principle_H";
  const Vec3 y_img = mirror(src.y, plane);
  for (const Vec3& x : samples) {
    const Vec3 xr = mirror(x, plane);
    // Skip the singular pair {y, y'}.
    if ((x - src.y).norm() < 1e-9 || (x - y_img).norm() < 1e-9) continue;
    const EMSample a = eval_total_field(src, plane, x);
    const EMSample b = eval_total_field(src, plane, xr);
    const double scale = std::max({a.E.norm(), b.E.norm(), a.H.norm(), b.H.norm()});
    const double e_res = (a.E + mirror_direction(b.E, plane)).norm() / scale;
    const double h_res = (a.H - mirror_direction(b.H, plane)).norm() / scale;
    rep.electric.residual = std::max(rep.electric.residual, e_res);
    rep.magnetic.residual = std::max(rep.magnetic.residual, h_res);
    ++rep.electric.samples;
    ++rep.magnetic.samples;
  }
  return rep;
}

SilverMullerReport check_silver_muller(const DipoleSource& src, const Plane& plane, const Vec3& xhat, int radii) {
  if (!(xhat[2] > 0.0)) throw std::invalid_argument("silver-muller direction must point into the upper half space");
  if (radii < 2) throw std::invalid_argument("silver-muller: need at least two radii");
  const Vec3 dir = xhat.normalized();
  SilverMullerReport rep;
  rep.sommerfeld.name = "silver_muller";
  rep.amplitude.name = "electric_amplitude";
  const double r_min = 10.0 / src.k;
  const double r_max = 100.0 / src.k;
  for (int i = 0; i < radii; ++i) {
    const double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (radii - 1));
    const Vec3 x = r * dir;
    const EMSample s = eval_image_field(src, plane, x);
    const double sm = (cross(s.H, x.cast<Complex>()) - r * s.E).norm();
    rep.sommerfeld.radii.push_back(r);
    rep.sommerfeld.residuals.push_back(sm);
    rep.amplitude.radii.push_back(r);
    rep.amplitude.residuals.push_back(s.E.norm());
  }
  rep.sommerfeld.slope = loglog_slope(rep.sommerfeld.radii, rep.sommerfeld.residuals);
  rep.amplitude.slope = loglog_slope(rep.amplitude.radii, rep.amplitude.residuals);
  return rep;
}

}  // namespace roughscat
