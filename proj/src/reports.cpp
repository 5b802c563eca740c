#include "roughscat/reports.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace roughscat {

IdentityReport make_identity_report(std::string name, Complex lhs, Complex rhs, std::string scene_hash) {
  IdentityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = r.abs_err / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  r.scene_hash = std::move(scene_hash);
  return r;
}

std::string to_json_line(const IdentityReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["lhs_re"] = r.lhs.real();
  j["lhs_im"] = r.lhs.imag();
  j["rhs_re"] = r.rhs.real();
  j["rhs_im"] = r.rhs.imag();
  j["abs_err"] = r.abs_err;
  j["rel_err"] = r.rel_err;
  j["scene_hash"] = r.scene_hash;
  return j.dump();
}

std::string to_json_line(const SlopeReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["slope"] = r.vacuous ? nlohmann::ordered_json() : nlohmann::ordered_json(r.slope);
  j["vacuous"] = r.vacuous;
  j["r_min"] = r.radii.empty() ? 0.0 : r.radii.front();
  j["r_max"] = r.radii.empty() ? 0.0 : r.radii.back();
  j["scene_hash"] = r.scene_hash;
  return j.dump();
}

std::string to_json_line(const ResidualReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["residual"] = r.residual;
  j["samples"] = r.samples;
  j["scene_hash"] = r.scene_hash;
  return j.dump();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace roughscat
