#include "roughscat/panel_quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "roughscat/halfspace_green.hpp"

namespace roughscat {

namespace {

struct Rule1D {
  std::vector<double> x;  // on [0, 1]
  std::vector<double> w;
};

constexpr int kMaxGaussPoints = 32;

// Golub-Welsch on the Legendre Jacobi matrix, mapped to [0, 1].
Rule1D make_gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  Rule1D r;
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    r.x.push_back(0.5 * (eig.eigenvalues()(i) + 1.0));
    r.w.push_back(v0 * v0);  // 2 v0^2 on [-1, 1], halved for [0, 1]
  }
  return r;
}

const Rule1D& gauss_rule(int n) {
  static const std::array<Rule1D, kMaxGaussPoints + 1> rules = [] {
    std::array<Rule1D, kMaxGaussPoints + 1> all;
    for (int n = 1; n <= kMaxGaussPoints; ++n) all[n] = make_gauss_legendre(n);
    return all;
  }();
  if (n < 1 || n > kMaxGaussPoints) throw std::invalid_argument("gauss rule order out of range");
  return rules[n];
}

struct TriRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> w;  // sums to 1
};

// Degree-5 seven point rule (Radon / Dunavant).
const TriRule& dunavant7() {
  static const TriRule rule = [] {
    const double s15 = std::sqrt(15.0);
    const double a = (6.0 - s15) / 21.0;
    const double b = (6.0 + s15) / 21.0;
    const double wa = (155.0 - s15) / 1200.0;
    const double wb = (155.0 + s15) / 1200.0;
    TriRule r;
    r.bary = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {a, a, 1 - 2 * a}, {a, 1 - 2 * a, a}, {1 - 2 * a, a, a},
              {b, b, 1 - 2 * b},           {b, 1 - 2 * b, b}, {1 - 2 * b, b, b}};
    r.w = {9.0 / 40, wa, wa, wa, wb, wb, wb};
    return r;
  }();
  return rule;
}

inline void accumulate(PanelIntegral& acc, double k, const Vec3& p, const Vec3& y, double weight) {
  const Vec3 diff = y - p;
  const double r = diff.norm();
  const Complex phi = fundamental(k, r);
  acc.single += weight * phi;
  const Complex dphi = weight * phi * (kI * k - 1.0 / r) / r;
  acc.grad_y += dphi * diff.cast<Complex>();
}

// Polar integration over the sub-triangle (q, v1, v2) with q the point of T
// nearest to p. y = q + s (v1 - q + t (v2 - v1)), dA = 2 |sub| s ds dt.
// For delta = |p - q| > 0 the radial variable is sinh-mapped with scale
// delta so the near-singular peak of the kernel is resolved.
void polar_subtriangle(PanelIntegral& acc, double k, const Vec3& p, const Vec3& q, const Vec3& v1, const Vec3& v2,
                       double delta, const QuadratureOptions& opts) {
  const double twice_area = (v1 - q).cross(v2 - q).norm();
  if (twice_area <= 0.0) return;
  const Rule1D& rt = gauss_rule(opts.near_angular_points);
  const Rule1D& rs = gauss_rule(opts.near_radial_points);
  for (std::size_t it = 0; it < rt.x.size(); ++it) {
    const Vec3 ray = (v1 - q) + rt.x[it] * (v2 - v1);
    const double len = ray.norm();
    if (delta > 1e-14 * len) {
      const double umax = std::asinh(len / delta);
      for (std::size_t is = 0; is < rs.x.size(); ++is) {
        const double u = umax * rs.x[is];
        const double s = delta / len * std::sinh(u);
        const double ds = delta / len * std::cosh(u) * umax * rs.w[is];
        accumulate(acc, k, p, q + s * ray, twice_area * s * ds * rt.w[it]);
      }
    } else {
      for (std::size_t is = 0; is < rs.x.size(); ++is) {
        const double s = rs.x[is];
        accumulate(acc, k, p, q + s * ray, twice_area * s * rs.w[is] * rt.w[it]);
      }
    }
  }
}

}  // namespace

PanelRule select_rule(const Panel& panel, const Vec3& p, const QuadratureOptions& opts) {
  const double centre_dist = (p - panel.centroid).norm();
  // The centroid distance bounds the panel distance from above and below by one diameter.
  if (centre_dist - panel.diameter >= opts.mid_ratio * panel.diameter) return PanelRule::centroid;
  const double dist = distance_to_panel(panel, p);
  if (dist >= opts.mid_ratio * panel.diameter) return PanelRule::centroid;
  if (dist >= opts.near_ratio * panel.diameter) return PanelRule::dunavant7;
  return PanelRule::near_singular;
}

PanelIntegral integrate_panel_with(PanelRule rule, const Panel& panel, const Vec3& p, double k,
                                   const QuadratureOptions& opts) {
  PanelIntegral acc;
  const auto& v = panel.vertices;
  switch (rule) {
    case PanelRule::centroid:
      accumulate(acc, k, p, panel.centroid, panel.area);
      break;
    case PanelRule::dunavant7: {
      const TriRule& tr = dunavant7();
      for (std::size_t i = 0; i < tr.w.size(); ++i) {
        const auto& b = tr.bary[i];
        accumulate(acc, k, p, b[0] * v[0] + b[1] * v[1] + b[2] * v[2], panel.area * tr.w[i]);
      }
      break;
    }
    case PanelRule::near_singular: {
      const Vec3 q = closest_point_on_triangle(p, v[0], v[1], v[2]);
      const double delta = (p - q).norm();
      polar_subtriangle(acc, k, p, q, v[0], v[1], delta, opts);
      polar_subtriangle(acc, k, p, q, v[1], v[2], delta, opts);
      polar_subtriangle(acc, k, p, q, v[2], v[0], delta, opts);
      break;
    }
  }
  return acc;
}

PanelIntegral integrate_panel(const Panel& panel, const Vec3& p, double k, const QuadratureOptions& opts) {
  return integrate_panel_with(select_rule(panel, p, opts), panel, p, k, opts);
}

}  // namespace roughscat
