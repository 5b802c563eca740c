#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "roughscat/types.hpp"

namespace roughscat {

enum class ProfileKind { zero, gaussian_bump, piecewise_linear };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

// Description of a surface perturbation, validated by build_profile.
//
// Piecewise-linear heights live on an n x n node grid covering the square
// [-R/sqrt(2), R/sqrt(2)]^2 inscribed in the support disc, stored row-major
// with the x index running fastest: heights[j * n + i] sits at
// (-L + i*s, -L + j*s). Grid cells are split along alternating diagonals
// so that every even-parity node is a vertex of all eight incident facets.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::zero;
  double support_radius = 1.0;
  double amplitude = 0.0;
  double width = 0.0;
  int grid_n = 0;
  std::vector<double> heights;
  bool allow_dip = false;
};

class SurfaceProfile {
 public:
  ProfileKind kind() const { return spec_.kind; }
  double support_radius() const { return spec_.support_radius; }
  const ProfileSpec& spec() const { return spec_; }

  // Lipschitz constant of f, i.e. the largest facet gradient norm.
  double max_slope() const { return max_slope_; }
  double max_height() const { return max_height_; }
  bool allows_dip() const { return spec_.allow_dip; }
  bool dips() const { return min_height_ < 0.0; }

  double height(double x1, double x2) const;
  double height(const Vec3& x) const { return height(x[0], x[1]); }

  // Half-width of the inscribed node square and node spacing (piecewise linear only).
  double grid_half_width() const;
  double grid_spacing() const;

  // Stable content hash over the canonical description.
  std::uint64_t hash() const { return hash_; }

 private:
  friend SurfaceProfile build_profile(const ProfileSpec& spec);
  double pl_height(double x1, double x2) const;

  ProfileSpec spec_;
  double max_slope_ = 0.0;
  double max_height_ = 0.0;
  double min_height_ = 0.0;
  double gauss_floor_ = 0.0;
  std::uint64_t hash_ = 0;
};

SurfaceProfile build_profile(const ProfileSpec& spec);

struct Panel {
  std::array<Vec3, 3> vertices;
  Vec3 centroid;
  double area = 0.0;
  Vec3 normal;  // unit, directed into the upper domain
  double diameter = 0.0;
};

struct PanelMesh {
  std::vector<Panel> panels;
  double h = 0.0;  // nominal radial ring spacing
  double support_radius = 0.0;
  double outer_radius = 0.0;
  int rings = 0;
  bool from_dipping_profile = false;
  std::uint64_t discretization_hash = 0;  // depends on the triangulation, not on f
  std::uint64_t hash = 0;                 // discretization plus lifted geometry

  std::size_t size() const { return panels.size(); }
  double total_area() const;
};

// Mapped polar triangulation of the disc: ring j carries 6j vertices, the
// outer ring circumscribes |x~| = R so the whole support is covered.
PanelMesh mesh_perturbation(const SurfaceProfile& profile, double target_h);

void write_mesh_csv(std::ostream& out, const PanelMesh& mesh);

struct Plane {
  Vec3 point;
  Vec3 normal;
};

Plane make_plane(const Vec3& point, const Vec3& normal);
inline Plane ground_plane() { return {Vec3::Zero(), Vec3::UnitZ()}; }

// Facet x3 = A x1 + B x2 + C promoted to a plane with unit normal (-A, -B, 1)/h.
Plane plane_from_facet(double A, double B, double C);

Vec3 mirror(const Vec3& x, const Plane& plane);
// Linear part of the reflection, acting on directions and field vectors.
Vec3 mirror_direction(const Vec3& v, const Plane& plane);
CVec3 mirror_direction(const CVec3& v, const Plane& plane);

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
double distance_to_panel(const Panel& panel, const Vec3& p);
double distance_to_mesh(const PanelMesh& mesh, const Vec3& p);

}  // namespace roughscat
