#pragma once

#include "roughscat/geometry.hpp"
#include "roughscat/types.hpp"

namespace roughscat {

// Integrals of the free-space kernel over one flat panel for a single
// singular point p:
//   single = int_T Phi(p, y) ds(y),   grad_y = int_T grad_y Phi(p, y) ds(y).
// Half-space kernels are assembled from two of these (p = x and p = x').
struct PanelIntegral {
  Complex single{};
  CVec3 grad_y = CVec3::Zero();
};

enum class PanelRule { centroid, dunavant7, near_singular };

struct QuadratureOptions {
  // Rule selection by dist(p, T) / diam(T).
  double near_ratio = 1.0;
  double mid_ratio = 4.0;
  int near_angular_points = 16;
  int near_radial_points = 10;
};

PanelRule select_rule(const Panel& panel, const Vec3& p, const QuadratureOptions& opts = {});

PanelIntegral integrate_panel(const Panel& panel, const Vec3& p, double k, const QuadratureOptions& opts = {});

// Same, with the rule forced (used by the quadrature tests).
PanelIntegral integrate_panel_with(PanelRule rule, const Panel& panel, const Vec3& p, double k,
                                   const QuadratureOptions& opts = {});

}  // namespace roughscat
