#pragma once

#include <string>

#include "roughscat/geometry.hpp"
#include "roughscat/types.hpp"

namespace roughscat {

// A meshed surface with the wave parameters shared by every solve on it.
struct Scene {
  SurfaceProfile profile;
  PanelMesh mesh;
  double k = 1.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  std::string hash;  // hex; covers profile, mesh, k and bc
};

Scene make_scene(const ProfileSpec& profile, double target_h, double k, BoundaryCondition bc);
Scene make_scene(const SurfaceProfile& profile, double target_h, double k, BoundaryCondition bc);

}  // namespace roughscat
