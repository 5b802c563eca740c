#include "roughscat/scene.hpp"

#include "roughscat/halfspace_green.hpp"
#include "roughscat/hashing.hpp"

namespace roughscat {

Scene make_scene(const SurfaceProfile& profile, double target_h, double k, BoundaryCondition bc) {
  make_kernel(k, bc);
  Scene s{profile, mesh_perturbation(profile, target_h), k, bc, {}};
  s.hash = hash_hex(Hasher().add(s.mesh.hash).add(k).add(to_string(bc)).value());
  return s;
}

Scene make_scene(const ProfileSpec& profile, double target_h, double k, BoundaryCondition bc) {
  return make_scene(build_profile(profile), target_h, k, bc);
}

}  // namespace roughscat
