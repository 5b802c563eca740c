#pragma once

#include "roughscat/types.hpp"

namespace roughscat {

// Points closer than this to a source or its image are treated as coincident.
inline constexpr double kSingularityGuard = 1e-12;

// Free-space Helmholtz fundamental solution e^{ikr} / (4 pi r).
inline Complex fundamental(double k, double r) { return std::exp(kI * (k * r)) / (4.0 * kPi * r); }

// Gradient in y of the fundamental solution centred at p.
inline CVec3 grad_fundamental_y(double k, const Vec3& p, const Vec3& y) {
  const Vec3 diff = y - p;
  const double r = diff.norm();
  const Complex dphi = fundamental(k, r) * (kI * k - 1.0 / r) / r;
  return dphi * diff.cast<Complex>();
}

/// Method-of-images kernel G(x, y) = Phi(x, y) -+ Phi(x, y'), y' the ground
/// mirror of y. Defined for every x outside {y, y'}, including x3 < 0.
struct GreenKernel {
  double k = 1.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
};

GreenKernel make_kernel(double k, BoundaryCondition bc);

Complex eval_G(const GreenKernel& kern, const Vec3& x, const Vec3& y);
CVec3 grad_G_y(const GreenKernel& kern, const Vec3& x, const Vec3& y);
CVec3 grad_G_x(const GreenKernel& kern, const Vec3& x, const Vec3& y);

// Coefficient of e^{ik|x|}/|x| in eval_G as |x| -> infinity along xhat:
// (1/4 pi)(e^{-ik xhat.y} -+ e^{-ik xhat.y'}).
Complex farfield_kernel(const GreenKernel& kern, const Vec3& xhat, const Vec3& y);
CVec3 farfield_kernel_grad_y(const GreenKernel& kern, const Vec3& xhat, const Vec3& y);

}  // namespace roughscat
