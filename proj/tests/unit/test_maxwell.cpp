#include <doctest.h>

#include <random>

#include "roughscat/halfspace_green.hpp"
#include "roughscat/maxwell_images.hpp"

using namespace roughscat;

namespace {

const DipoleSource kSrc = make_dipole({0.2, -0.1, 0.7}, {1.0, 0.5, 0.3}, 2.0);

std::vector<Vec3> random_points(int n, std::uint64_t seed, double half = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-half, half);
  std::vector<Vec3> out;
  while (static_cast<int>(out.size()) < n) {
    const Vec3 x(u(rng), u(rng), u(rng));
    if ((x - kSrc.y).norm() > 0.2 && (x - ground_mirror(kSrc.y)).norm() > 0.2) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("dipole fields satisfy Maxwell's equations (FD oracle)") {
  const double step = 1e-4 / kSrc.k;
  EMField in = [](const Vec3& x) { return eval_dipole(kSrc, x); };
  EMField re = [](const Vec3& x) { return eval_image_field(kSrc, ground_plane(), x); };
  // Duality: (H, -E) is a Maxwell field as well.
  EMField dual = [](const Vec3& x) {
    EMSample s = eval_dipole(kSrc, x);
    return EMSample{x, s.H, -s.E};
  };
  for (const Vec3& x : random_points(20, 3)) {
    CHECK(maxwell_residual(in, kSrc.k, x, step) <= 1e-5);
    CHECK(maxwell_residual(re, kSrc.k, x, step) <= 1e-5);
    CHECK(maxwell_residual(dual, kSrc.k, x, step) <= 1e-5);
    CHECK(divergence_residual(in, kSrc.k, x, step) <= 1e-5);
    CHECK(divergence_residual(re, kSrc.k, x, step) <= 1e-5);
  }
}

TEST_CASE("H is grad Phi cross p") {
  for (const Vec3& x : random_points(10, 4)) {
    const CVec3 g = -grad_fundamental_y(kSrc.k, x, kSrc.y);  // gradient in x
    const CVec3 expect = cross(g, kSrc.p.cast<Complex>());
    CHECK((eval_dipole(kSrc, x).H - expect).norm() <= 1e-14 * expect.norm());
  }
  CHECK_THROWS_AS(eval_dipole(kSrc, kSrc.y), std::domain_error);
  CHECK_THROWS_AS(make_dipole({0, 0, -1}, {1, 0, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_dipole({0, 0, 1}, {0, 0, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("far zone: |E| halves when the distance doubles") {
  const Vec3 dir = Vec3(0.3, 0.4, 0.6).normalized();
  const double r = 1e3 / kSrc.k;
  const double ratio = eval_dipole(kSrc, kSrc.y + 2 * r * dir).E.norm() / eval_dipole(kSrc, kSrc.y + r * dir).E.norm();
  CHECK(ratio >= 0.45);
  CHECK(ratio <= 0.55);
}

TEST_CASE("fields are linear in the polarisation") {
  const DipoleSource twice = make_dipole(kSrc.y, 2.0 * kSrc.p, kSrc.k);
  const Vec3 x(0.4, 0.3, 1.2);
  CHECK((eval_dipole(twice, x).E - 2.0 * eval_dipole(kSrc, x).E).norm() <= 1e-15 * eval_dipole(twice, x).E.norm());
  CHECK((eval_image_field(twice, ground_plane(), x).H - 2.0 * eval_image_field(kSrc, ground_plane(), x).H).norm() <=
        1e-15 * eval_image_field(twice, ground_plane(), x).H.norm());
}

TEST_CASE("PEC condition on the mirror plane") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<Vec3> on;
  for (int i = 0; i < 200; ++i) on.push_back({u(rng), u(rng), 0.0});
  CHECK(check_pec(kSrc, ground_plane(), on).residual <= 1e-12);
  // Displaced plane x3 = 1 with a dipole above it.
  const DipoleSource high = make_dipole({0.1, 0.2, 1.6}, {0.3, -1.0, 0.5}, 2.0);
  const Plane raised = make_plane({0, 0, 1}, Vec3::UnitZ());
  std::vector<Vec3> on_raised;
  for (const Vec3& p : on) on_raised.push_back(p + Vec3(0, 0, 1));
  CHECK(check_pec(high, raised, on_raised).residual <= 1e-12);
  // The same image construction does not make {x3 = 0} a conductor.
  double worst = 0.0;
  for (const Vec3& p : on) {
    const EMSample t = eval_total_field(high, raised, p);
    worst = std::max(worst, cross(Vec3::UnitZ().cast<Complex>(), t.E).norm() / t.E.norm());
  }
  CHECK(worst > 1e-3);
  CHECK_THROWS_AS(check_pec(kSrc, ground_plane(), {Vec3(0, 0, 0.5)}), std::invalid_argument);
}

TEST_CASE("reflection principle and singularity pairing") {
  const ReflectionPrincipleReport r = check_reflection_principle(kSrc, ground_plane(), random_points(100, 12));
  CHECK(r.electric.residual <= 1e-12);
  CHECK(r.magnetic.residual <= 1e-12);
  CHECK(r.electric.samples == 100);
  // Principle does not depend on the polarisation.
  const DipoleSource normal = make_dipole(kSrc.y, Vec3::UnitZ(), kSrc.k);
  const ReflectionPrincipleReport n = check_reflection_principle(normal, ground_plane(), random_points(100, 12));
  CHECK(n.electric.residual <= 1e-12);
  CHECK(n.magnetic.residual <= 1e-12);
  const Vec3 img = ground_mirror(kSrc.y);
  const double far = eval_total_field(kSrc, ground_plane(), kSrc.y + Vec3(0, 0, 100.0 / kSrc.k)).E.norm();
  CHECK(eval_total_field(kSrc, ground_plane(), kSrc.y + Vec3(1e-3, 0, 0)).E.norm() > 1e6 * far);
  CHECK(eval_total_field(kSrc, ground_plane(), img + Vec3(1e-3, 0, 0)).E.norm() > 1e6 * far);
  CHECK_THROWS_AS(eval_image_field(kSrc, ground_plane(), img), std::domain_error);
}

TEST_CASE("Silver-Muller decay of the image field") {
  const SilverMullerReport a = check_silver_muller(kSrc, ground_plane(), Vec3::UnitZ());
  CHECK(a.sommerfeld.slope <= -0.8);
  CHECK(a.amplitude.slope >= -1.2);
  CHECK(a.amplitude.slope <= -0.8);
  const DipoleSource fast = make_dipole(kSrc.y, kSrc.p, 2.0 * kSrc.k);
  const SilverMullerReport b = check_silver_muller(fast, ground_plane(), Vec3::UnitZ());
  CHECK(std::abs(a.sommerfeld.slope - b.sommerfeld.slope) < 0.1);
  CHECK(std::abs(a.amplitude.slope - b.amplitude.slope) < 0.1);
  CHECK_THROWS_AS(check_silver_muller(kSrc, ground_plane(), -Vec3::UnitZ()), std::invalid_argument);
}
