#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace roughscat {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

enum class BoundaryCondition { dirichlet, neumann };

inline std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

inline BoundaryCondition boundary_condition_from_string(const std::string& name) {
  if (name == "dirichlet") return BoundaryCondition::dirichlet;
  if (name == "neumann") return BoundaryCondition::neumann;
  throw std::invalid_argument("unknown boundary condition '" + name + "' (expected dirichlet or neumann)");
}

// Sign of the image source: -1 keeps u = 0 on the plane, +1 keeps du/dx3 = 0.
inline double image_sign(BoundaryCondition bc) { return bc == BoundaryCondition::dirichlet ? -1.0 : 1.0; }

/// Reflection of a point across the ground plane {x3 = 0}.
inline Vec3 ground_mirror(const Vec3& x) { return {x[0], x[1], -x[2]}; }

// Bilinear cross product. Eigen's cross() conjugates its result for complex scalars.
inline CVec3 cross(const CVec3& a, const CVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace roughscat
