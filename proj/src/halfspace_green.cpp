#include "roughscat/halfspace_green.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roughscat {

namespace {

void require_upper_direction(const Vec3& xhat) {
  if (!(xhat[2] > 0.0) || std::abs(xhat.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("far-field direction must be a unit vector with positive third component");
  }
}

void require_apart(const Vec3& x, const Vec3& y) {
  if ((x - y).norm() < kSingularityGuard) {
    throw std::domain_error("Green kernel evaluated at the source point y");
  }
  if ((x - ground_mirror(y)).norm() < kSingularityGuard) {
    throw std::domain_error("Green kernel evaluated at the image point y'");
  }
}

}  // namespace

GreenKernel make_kernel(double k, BoundaryCondition bc) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("wavenumber k must be positive and finite");
  return {k, bc};
}

Complex eval_G(const GreenKernel& kern, const Vec3& x, const Vec3& y) {
  require_apart(x, y);
  const double r = (x - y).norm();
  const double r_img = (x - ground_mirror(y)).norm();
  return fundamental(kern.k, r) + image_sign(kern.bc) * fundamental(kern.k, r_img);
}

CVec3 grad_G_y(const GreenKernel& kern, const Vec3& x, const Vec3& y) {
  require_apart(x, y);
  // Phi(x, y') = Phi(x', y) as a function of y.
  return grad_fundamental_y(kern.k, x, y) + image_sign(kern.bc) * grad_fundamental_y(kern.k, ground_mirror(x), y);
}

CVec3 grad_G_x(const GreenKernel& kern, const Vec3& x, const Vec3& y) {
  require_apart(x, y);
  return grad_fundamental_y(kern.k, y, x) + image_sign(kern.bc) * grad_fundamental_y(kern.k, ground_mirror(y), x);
}

Complex farfield_kernel(const GreenKernel& kern, const Vec3& xhat, const Vec3& y) {
  require_upper_direction(xhat);
  const double k = kern.k;
  return (std::exp(-kI * (k * xhat.dot(y))) + image_sign(kern.bc) * std::exp(-kI * (k * xhat.dot(ground_mirror(y))))) /
         (4.0 * kPi);
}

CVec3 farfield_kernel_grad_y(const GreenKernel& kern, const Vec3& xhat, const Vec3& y) {
  require_upper_direction(xhat);
  const double k = kern.k;
  const Complex direct = -kI * k * std::exp(-kI * (k * xhat.dot(y))) / (4.0 * kPi);
  const Complex image = -kI * k * std::exp(-kI * (k * xhat.dot(ground_mirror(y)))) / (4.0 * kPi);
  return direct * xhat.cast<Complex>() + image_sign(kern.bc) * image * ground_mirror(xhat).cast<Complex>();
}

}  // namespace roughscat
