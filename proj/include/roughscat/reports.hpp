#pragma once

#include <string>
#include <vector>

#include "roughscat/types.hpp"

namespace roughscat {

struct IdentityReport {
  std::string name;
  Complex lhs{};
  Complex rhs{};
  double abs_err = 0.0;
  double rel_err = 0.0;
  std::string scene_hash;

  bool passes(double tol) const { return rel_err <= tol; }
};

// rel_err = |lhs - rhs| / max(|lhs|, |rhs|, 1e-300).
IdentityReport make_identity_report(std::string name, Complex lhs, Complex rhs, std::string scene_hash = {});

// Log-log decay fit of a residual sampled along a ray.
struct SlopeReport {
  std::string name;
  double slope = 0.0;
  bool vacuous = false;  // residual identically zero
  std::vector<double> radii;
  std::vector<double> residuals;
  std::string scene_hash;

  bool within(double lo, double hi) const { return vacuous || (slope >= lo && slope <= hi); }
};

// Maximum of a residual over a sample set, already normalised by the field scale.
struct ResidualReport {
  std::string name;
  double residual = 0.0;
  std::size_t samples = 0;
  std::string scene_hash;
};

std::string to_json_line(const IdentityReport& r);
std::string to_json_line(const SlopeReport& r);
std::string to_json_line(const ResidualReport& r);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace roughscat
