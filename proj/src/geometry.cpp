#include "roughscat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <Eigen/LU>

#include "roughscat/hashing.hpp"

namespace roughscat {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::zero: return "zero";
    case ProfileKind::gaussian_bump: return "gaussian_bump";
    case ProfileKind::piecewise_linear: return "piecewise_linear";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "zero") return ProfileKind::zero;
  if (name == "gaussian_bump") return ProfileKind::gaussian_bump;
  if (name == "piecewise_linear") return ProfileKind::piecewise_linear;
  throw std::invalid_argument("unknown profile kind '" + name + "'");
}

namespace {

struct GridFacet {
  std::array<int, 3> node;  // linear node indices
};

// Two facets per cell, diagonal through the even-parity corners.
std::vector<GridFacet> grid_facets(int n) {
  std::vector<GridFacet> facets;
  facets.reserve(2 * (n - 1) * (n - 1));
  auto id = [n](int i, int j) { return j * n + i; };
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      if ((i + j) % 2 == 0) {
        facets.push_back({{id(i, j), id(i + 1, j), id(i + 1, j + 1)}});
        facets.push_back({{id(i, j), id(i + 1, j + 1), id(i, j + 1)}});
      } else {
        facets.push_back({{id(i, j), id(i + 1, j), id(i, j + 1)}});
        facets.push_back({{id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)}});
      }
    }
  }
  return facets;
}

}  // namespace

double SurfaceProfile::grid_half_width() const { return spec_.support_radius / std::sqrt(2.0); }

double SurfaceProfile::grid_spacing() const {
  if (spec_.kind != ProfileKind::piecewise_linear) return 0.0;
  return 2.0 * grid_half_width() / (spec_.grid_n - 1);
}

double SurfaceProfile::pl_height(double x1, double x2) const {
  const int n = spec_.grid_n;
  const double half = grid_half_width();
  const double s = grid_spacing();
  if (std::abs(x1) >= half || std::abs(x2) >= half) return 0.0;
  const double gx = (x1 + half) / s;
  const double gy = (x2 + half) / s;
  const int i = std::clamp(static_cast<int>(std::floor(gx)), 0, n - 2);
  const int j = std::clamp(static_cast<int>(std::floor(gy)), 0, n - 2);
  const double u = gx - i;
  const double v = gy - j;
  const auto& h = spec_.heights;
  const double h00 = h[j * n + i];
  const double h10 = h[j * n + i + 1];
  const double h01 = h[(j + 1) * n + i];
  const double h11 = h[(j + 1) * n + i + 1];
  if ((i + j) % 2 == 0) {
    if (u >= v) return h00 + u * (h10 - h00) + v * (h11 - h10);
    return h00 + v * (h01 - h00) + u * (h11 - h01);
  }
  if (u + v <= 1.0) return h00 + u * (h10 - h00) + v * (h01 - h00);
  return h11 + (1.0 - u) * (h01 - h11) + (1.0 - v) * (h10 - h11);
}

double SurfaceProfile::height(double x1, double x2) const {
  const double R = spec_.support_radius;
  const double rho2 = x1 * x1 + x2 * x2;
  if (rho2 >= R * R) return 0.0;
  switch (spec_.kind) {
    case ProfileKind::zero: return 0.0;
    case ProfileKind::gaussian_bump: {
      const double s2 = spec_.width * spec_.width;
      return spec_.amplitude * (std::exp(-rho2 / (2.0 * s2)) - gauss_floor_) / (1.0 - gauss_floor_);
    }
    case ProfileKind::piecewise_linear: return pl_height(x1, x2);
  }
  return 0.0;
}

SurfaceProfile build_profile(const ProfileSpec& spec) {
  const double R = spec.support_radius;
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw std::invalid_argument("profile: support radius must be positive and finite");
  }
  SurfaceProfile p;
  p.spec_ = spec;
  Hasher hasher;
  hasher.add(to_string(spec.kind)).add(R);

  switch (spec.kind) {
    case ProfileKind::zero:
      p.spec_.amplitude = p.spec_.width = 0.0;
      p.spec_.grid_n = 0;
      p.spec_.heights.clear();
      break;

    case ProfileKind::gaussian_bump: {
      const double a = spec.amplitude;
      const double s = spec.width;
      if (!std::isfinite(a)) throw std::invalid_argument("profile: gaussian amplitude is not finite");
      if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("profile: gaussian width must be positive");
      p.gauss_floor_ = std::exp(-R * R / (2.0 * s * s));
      // |f'(r)| = |a| r / s^2 exp(-r^2 / 2s^2) / (1 - floor), maximal at r = min(s, R).
      const double r_star = std::min(s, R);
      p.max_slope_ = std::abs(a) * r_star / (s * s) * std::exp(-r_star * r_star / (2.0 * s * s)) /
                     (1.0 - p.gauss_floor_);
      p.max_height_ = std::max(a, 0.0);
      p.min_height_ = std::min(a, 0.0);
      p.spec_.grid_n = 0;
      p.spec_.heights.clear();
      hasher.add(a).add(s);
      break;
    }

    case ProfileKind::piecewise_linear: {
      const int n = spec.grid_n;
      if (n < 3) throw std::invalid_argument("profile: piecewise_linear grid needs at least 3x3 nodes");
      if (spec.heights.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("profile: expected " + std::to_string(n * n) + " heights, got " +
                                    std::to_string(spec.heights.size()));
      }
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const double h = spec.heights[j * n + i];
          if (std::isnan(h) || !std::isfinite(h)) {
            throw std::invalid_argument("profile: height at node (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") is not finite");
          }
          const bool ring = i == 0 || j == 0 || i == n - 1 || j == n - 1;
          if (ring && h != 0.0) {
            throw std::invalid_argument("profile: boundary-ring height at node (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") must be 0");
          }
        }
      }
      const auto [lo, hi] = std::minmax_element(spec.heights.begin(), spec.heights.end());
      p.min_height_ = *lo;
      p.max_height_ = *hi;
      const double s = p.grid_spacing();
      double slope = 0.0;
      for (const auto& f : grid_facets(n)) {
        // Facet gradient from the two legs in grid coordinates.
        std::array<Eigen::Vector2d, 3> xy;
        std::array<double, 3> z;
        for (int c = 0; c < 3; ++c) {
          xy[c] = {(f.node[c] % n) * s, (f.node[c] / n) * s};
          z[c] = spec.heights[f.node[c]];
        }
        Eigen::Matrix2d m;
        m << (xy[1] - xy[0]).transpose(), (xy[2] - xy[0]).transpose();
        const Eigen::Vector2d g = m.inverse() * Eigen::Vector2d(z[1] - z[0], z[2] - z[0]);
        slope = std::max(slope, g.norm());
      }
      p.max_slope_ = slope;
      hasher.add(n);
      for (double h : spec.heights) hasher.add(h);
      break;
    }
  }

  if (p.min_height_ < 0.0 && !spec.allow_dip) {
    throw std::invalid_argument("profile: f < 0 somewhere (dipping perturbation); set allow_dip to override");
  }
  hasher.add(static_cast<int>(spec.allow_dip));
  p.hash_ = hasher.value();
  return p;
}

double PanelMesh::total_area() const {
  double a = 0.0;
  for (const auto& p : panels) a += p.area;
  return a;
}

namespace {

Panel make_panel(const Vec3& a, const Vec3& b, const Vec3& c) {
  Panel p;
  p.vertices = {a, b, c};
  Vec3 n = (b - a).cross(c - a);
  if (n[2] < 0.0) {
    std::swap(p.vertices[1], p.vertices[2]);
    n = -n;
  }
  const double twice_area = n.norm();
  p.area = 0.5 * twice_area;
  p.normal = n / twice_area;
  p.centroid = (a + b + c) / 3.0;
  p.diameter = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  return p;
}

}  // namespace

PanelMesh mesh_perturbation(const SurfaceProfile& profile, double target_h) {
  const double R = profile.support_radius();
  if (!(target_h > 0.0) || target_h > R / 4.0) {
    throw std::invalid_argument("mesh: target_h must lie in (0, R/4]");
  }
  if (profile.allows_dip()) {
    throw std::invalid_argument("mesh: refusing to mesh a profile flagged allow_dip (dipping perturbations are not supported)");
  }
  const int n = static_cast<int>(std::ceil(R / target_h - 1e-12));
  const double outer = R / std::cos(kPi / (6.0 * n));

  auto ring_point = [&](int ring, int m) -> Vec3 {
    if (ring == 0) return {0.0, 0.0, profile.height(0.0, 0.0)};
    const double rho = outer * ring / n;
    const double t = 2.0 * kPi * m / (6.0 * ring);
    const double x1 = rho * std::cos(t);
    const double x2 = rho * std::sin(t);
    const double x3 = ring == n ? 0.0 : profile.height(x1, x2);
    return {x1, x2, x3};
  };
  auto ring_angle = [](int ring, int m) { return static_cast<double>(m) / (6.0 * ring); };

  PanelMesh mesh;
  mesh.panels.reserve(6 * n * n);
  for (int m = 0; m < 6; ++m) {
    mesh.panels.push_back(make_panel(ring_point(0, 0), ring_point(1, m), ring_point(1, (m + 1) % 6)));
  }
  for (int ring = 2; ring <= n; ++ring) {
    const int inner_count = 6 * (ring - 1);
    const int outer_count = 6 * ring;
    int a = 0;
    int b = 0;
    // Zip the two rings by angle; each step consumes one vertex.
    while (a < inner_count || b < outer_count) {
      const double next_inner = ring_angle(ring - 1, a + 1);
      const double next_outer = ring_angle(ring, b + 1);
      if (b < outer_count && (a >= inner_count || next_outer <= next_inner)) {
        mesh.panels.push_back(make_panel(ring_point(ring - 1, a % inner_count), ring_point(ring, b),
                                         ring_point(ring, (b + 1) % outer_count)));
        ++b;
      } else {
        mesh.panels.push_back(make_panel(ring_point(ring - 1, a), ring_point(ring - 1, (a + 1) % inner_count),
                                         ring_point(ring, b % outer_count)));
        ++a;
      }
    }
  }

  mesh.h = R / n;
  mesh.support_radius = R;
  mesh.outer_radius = outer;
  mesh.rings = n;
  mesh.from_dipping_profile = profile.dips();
  mesh.discretization_hash = Hasher().add(std::string_view("polar-rings-v1")).add(R).add(n).value();
  mesh.hash = Hasher().add(mesh.discretization_hash).add(profile.hash()).value();
  return mesh;
}

void write_mesh_csv(std::ostream& out, const PanelMesh& mesh) {
  out << "panel_id,v1x,v1y,v1z,v2x,v2y,v2z,v3x,v3y,v3z,cx,cy,cz,area,nx,ny,nz\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    out << buf;
  };
  for (std::size_t i = 0; i < mesh.panels.size(); ++i) {
    const auto& p = mesh.panels[i];
    out << i;
    for (const auto& v : p.vertices) {
      put(v[0]), put(v[1]), put(v[2]);
    }
    put(p.centroid[0]), put(p.centroid[1]), put(p.centroid[2]);
    put(p.area);
    put(p.normal[0]), put(p.normal[1]), put(p.normal[2]);
    out << '\n';
  }
}

Plane make_plane(const Vec3& point, const Vec3& normal) {
  const double len = normal.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw std::invalid_argument("plane: normal must be nonzero");
  return {point, normal / len};
}

Plane plane_from_facet(double A, double B, double C) {
  const double h = std::sqrt(A * A + B * B + 1.0);
  return {Vec3(0.0, 0.0, C), Vec3(-A / h, -B / h, 1.0 / h)};
}

Vec3 mirror(const Vec3& x, const Plane& plane) {
  return x - 2.0 * (x - plane.point).dot(plane.normal) * plane.normal;
}

Vec3 mirror_direction(const Vec3& v, const Plane& plane) {
  return v - 2.0 * v.dot(plane.normal) * plane.normal;
}

CVec3 mirror_direction(const CVec3& v, const Plane& plane) {
  const CVec3 n = plane.normal.cast<Complex>();
  return v - 2.0 * (n.transpose() * v)(0) * n;
}

// Ericson, Real-Time Collision Detection, 5.1.5.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double distance_to_panel(const Panel& panel, const Vec3& p) {
  const auto& v = panel.vertices;
  return (p - closest_point_on_triangle(p, v[0], v[1], v[2])).norm();
}

double distance_to_mesh(const PanelMesh& mesh, const Vec3& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& panel : mesh.panels) {
    // Cheap reject via the circumscribing ball around the centroid.
    if ((p - panel.centroid).norm() - panel.diameter >= d) continue;
    d = std::min(d, distance_to_panel(panel, p));
  }
  return d;
}

}  // namespace roughscat
