#pragma once

#include <variant>

#include "roughscat/geometry.hpp"
#include "roughscat/types.hpp"

namespace roughscat {

/// Plane wave e^{ik x.d} with d = (alpha, beta, -gamma), parametrised by the
/// incidence angles. phi is the polar angle from the downward vertical,
/// theta the azimuth.
struct PlaneWave {
  double phi = 0.0;
  double theta = 0.0;

  Vec3 direction() const;  // d, in the lower hemisphere
  Vec3 specular() const;   // d' = (alpha, beta, gamma)
};

struct PointSource {
  Vec3 z = Vec3::Zero();
};

struct IncidentWave {
  std::variant<PlaneWave, PointSource> source;
  double k = 1.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;

  bool is_plane() const { return std::holds_alternative<PlaneWave>(source); }
  bool is_point() const { return std::holds_alternative<PointSource>(source); }
  const PlaneWave& plane() const { return std::get<PlaneWave>(source); }
  const PointSource& point() const { return std::get<PointSource>(source); }
};

IncidentWave make_plane_wave(double phi, double theta, double k, BoundaryCondition bc);
IncidentWave make_point_source(const Vec3& z, double k, BoundaryCondition bc);

// Throws unless the point source lies strictly above the profile.
void check_source_above(const IncidentWave& w, const SurfaceProfile& profile);

// u^in + u^re for a plane wave.
Complex eval_plane_pair(const IncidentWave& w, const Vec3& x);
CVec3 grad_plane_pair(const IncidentWave& w, const Vec3& x);

// Phi(x, z) -+ Phi(x, z') for a point source.
Complex eval_point_pair(const IncidentWave& w, const Vec3& x);
CVec3 grad_point_pair(const IncidentWave& w, const Vec3& x);

// Dispatch on the wave kind.
Complex eval_pair(const IncidentWave& w, const Vec3& x);
CVec3 grad_pair(const IncidentWave& w, const Vec3& x);

}  // namespace roughscat
