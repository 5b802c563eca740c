#include <doctest.h>

#include <cmath>

#include "roughscat/halfspace_green.hpp"
#include "roughscat/panel_quadrature.hpp"

using namespace roughscat;

namespace {

Panel make_panel(const Vec3& a, const Vec3& b, const Vec3& c) {
  Panel p;
  p.vertices = {a, b, c};
  p.centroid = (a + b + c) / 3.0;
  const Vec3 n = (b - a).cross(c - a);
  p.area = 0.5 * n.norm();
  p.normal = n.normalized();
  p.diameter = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  return p;
}

// Brute-force reference: uniform subdivision into 4^levels sub-triangles with
// a 7-point rule on each. Only used where p is off the panel.
PanelIntegral reference(const Panel& panel, const Vec3& p, double k, int levels) {
  PanelIntegral acc;
  std::vector<std::array<Vec3, 3>> tris{{panel.vertices[0], panel.vertices[1], panel.vertices[2]}};
  for (int l = 0; l < levels; ++l) {
    std::vector<std::array<Vec3, 3>> next;
    for (const auto& t : tris) {
      const Vec3 ab = 0.5 * (t[0] + t[1]), bc = 0.5 * (t[1] + t[2]), ca = 0.5 * (t[2] + t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({ab, t[1], bc});
      next.push_back({ca, bc, t[2]});
      next.push_back({ab, bc, ca});
    }
    tris.swap(next);
  }
  for (const auto& t : tris) {
    const PanelIntegral s = integrate_panel_with(PanelRule::dunavant7, make_panel(t[0], t[1], t[2]), p, k);
    acc.single += s.single;
    acc.grad_y += s.grad_y;
  }
  return acc;
}

}  // namespace

TEST_CASE("rule selection by distance over diameter") {
  const Panel t = make_panel({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
  CHECK(select_rule(t, {0.3, 0.3, 10.0}) == PanelRule::centroid);
  CHECK(select_rule(t, {0.3, 0.3, 2.0}) == PanelRule::dunavant7);
  CHECK(select_rule(t, {0.3, 0.3, 0.1}) == PanelRule::near_singular);
  CHECK(select_rule(t, {0.3, 0.3, 0.0}) == PanelRule::near_singular);
}

TEST_CASE("self integral at the centroid of an equilateral triangle") {
  // int_T 1/r dA from the centroid = 6 rho ln(2 + sqrt 3), rho the inradius.
  const double a = 0.2;
  const Panel t = make_panel({0, 0, 0}, {a, 0, 0}, {a / 2, a * std::sqrt(3.0) / 2, 0});
  const double rho = a / (2 * std::sqrt(3.0));
  const double exact = 6 * rho * std::log(2 + std::sqrt(3.0)) / (4 * kPi);
  const double k = 1e-6;
  const PanelIntegral s = integrate_panel(t, t.centroid, k);
  CHECK(s.single.real() == doctest::Approx(exact).epsilon(1e-6));
  CHECK(s.single.imag() == doctest::Approx(k * t.area / (4 * kPi)).epsilon(1e-6));
  // In-plane gradient of a symmetric configuration vanishes.
  CHECK(std::abs(s.grad_y[0]) < 1e-10);
  CHECK(std::abs(s.grad_y[2]) < 1e-12);
}

TEST_CASE("near-singular rule matches a subdivided reference off the panel") {
  const Panel t = make_panel({0, 0, 0}, {0.1, 0.01, 0.02}, {0.03, 0.09, -0.01});
  const double k = 2.0;
  for (const Vec3& p : {Vec3(0.04, 0.03, 0.01), Vec3(0.04, 0.03, 0.03), Vec3(0.12, 0.05, 0.02)}) {
    const PanelIntegral got = integrate_panel(t, p, k);
    const PanelIntegral ref = reference(t, p, k, 6);
    CHECK(std::abs(got.single - ref.single) <= 1e-6 * std::abs(ref.single));
    CHECK((got.grad_y - ref.grad_y).norm() <= 1e-4 * ref.grad_y.norm());
  }
}

TEST_CASE("tiers agree in the far zone") {
  const Panel t = make_panel({0, 0, 0}, {0.1, 0, 0}, {0, 0.1, 0.02});
  const Vec3 p(0.5, 0.6, 0.7);
  const PanelIntegral c = integrate_panel_with(PanelRule::centroid, t, p, 2.0);
  const PanelIntegral d = integrate_panel_with(PanelRule::dunavant7, t, p, 2.0);
  const PanelIntegral n = integrate_panel_with(PanelRule::near_singular, t, p, 2.0);
  CHECK(std::abs(c.single - d.single) <= 1e-3 * std::abs(d.single));
  CHECK(std::abs(n.single - d.single) <= 1e-8 * std::abs(d.single));
}
