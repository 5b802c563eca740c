#pragma once

#include <functional>
#include <vector>

#include "roughscat/geometry.hpp"
#include "roughscat/reports.hpp"
#include "roughscat/types.hpp"

namespace roughscat {

// Electric dipole at y with real polarisation p:
//   H = curl(p Phi(., y)) = grad Phi x p,   E = (i/k) curl H.
struct DipoleSource {
  Vec3 y = Vec3::UnitZ();
  Vec3 p = Vec3::UnitX();
  double k = 1.0;
};

DipoleSource make_dipole(const Vec3& y, const Vec3& p, double k);

struct EMSample {
  Vec3 x = Vec3::Zero();
  CVec3 E = CVec3::Zero();
  CVec3 H = CVec3::Zero();
};

EMSample eval_dipole(const DipoleSource& src, const Vec3& x);

// Image of the dipole in a perfectly conducting plane:
//   E_re(x) = -R0 E_in(R x),   H_re(x) = +R0 H_in(R x),
// R the reflection across the plane and R0 its linear part.
EMSample eval_image_field(const DipoleSource& src, const Plane& plane, const Vec3& x);

// Dipole plus image.
EMSample eval_total_field(const DipoleSource& src, const Plane& plane, const Vec3& x);

using EMField = std::function<EMSample(const Vec3&)>;

// Central-difference curl and divergence; step 1e-4/k unless given.
CVec3 fd_curl(const std::function<CVec3(const Vec3&)>& f, const Vec3& x, double step);
Complex fd_divergence(const std::function<CVec3(const Vec3&)>& f, const Vec3& x, double step);

// max(|curl E - ik H|, |curl H + ik E|) / (k max(|E|, |H|)) at x.
double maxwell_residual(const EMField& field, double k, const Vec3& x, double step);
// max(|div E|, |div H|) / (k max(|E|, |H|)) at x.
double divergence_residual(const EMField& field, double k, const Vec3& x, double step);

/// max |nu x (E_in + E_re)| / |E_in| over samples on the plane.
ResidualReport check_pec(const DipoleSource& src, const Plane& plane, const std::vector<Vec3>& plane_samples);

struct ReflectionPrincipleReport {
  ResidualReport electric;  // |E(x) + R0 E(R x)| / scale
  ResidualReport magnetic;  // |H(x) - R0 H(R x)| / scale
};

/// Reflection principle for the total field over pairs (x, R x); the pair
/// containing the dipole and its image is skipped.
ReflectionPrincipleReport check_reflection_principle(const DipoleSource& src, const Plane& plane,
                                                     const std::vector<Vec3>& samples);

struct SilverMullerReport {
  SlopeReport sommerfeld;  // |H x x - r E| along r xhat
  SlopeReport amplitude;   // |E| along r xhat
};

/// Decay of the Silver-Muller residual of the image field over r in [10, 100]/k.
SilverMullerReport check_silver_muller(const DipoleSource& src, const Plane& plane, const Vec3& xhat, int radii = 12);

}  // namespace roughscat
