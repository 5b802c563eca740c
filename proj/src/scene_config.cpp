#include "roughscat/scene_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "roughscat/halfspace_green.hpp"
#include "roughscat/hashing.hpp"

namespace roughscat {

namespace {

using nlohmann::json;

// Walks one JSON object, remembering its key path and which keys were read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(field(key), "missing required key");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field(key), "must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ConfigError(field(key), "must be positive");
    return x;
  }
  int integer(const std::string& key, int fallback, int min_value) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < min_value || x > 1000000) {
      throw ConfigError(field(key), "must lie in [" + std::to_string(min_value) + ", 1000000]");
    }
    return static_cast<int>(x);
  }
  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    return v.get<std::string>();
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
    return v.get<bool>();
  }
  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw ConfigError(field(key), "expected an array of numbers");
      out.push_back(e.get<double>());
      if (!std::isfinite(out.back())) throw ConfigError(field(key), "entries must be finite");
    }
    return out;
  }
  Vec3 point(const std::string& key) {
    const std::vector<double> v = numbers(key);
    if (v.size() != 3) throw ConfigError(field(key), "expected 3 coordinates");
    return {v[0], v[1], v[2]};
  }
  Vec3 point(const std::string& key, const Vec3& fallback) { return has(key) ? point(key) : fallback; }

  Section child(const std::string& key) { return Section(raw(key), field(key)); }

  // Strict mode: every key present must have been read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
auto rethrow_as(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

ProfileSpec parse_profile(Section s) {
  ProfileSpec p;
  const std::string kind = s.string("kind");
  p.support_radius = s.positive("support_radius", 1.0);
  if (kind == "pyramid") {
    const double apex = s.number("apex");
    const int n = s.integer("grid_n", 9, 7);
    const bool asym = s.boolean("asymmetric", false);
    const bool rotated = s.boolean("rotated", false);
    s.finish();
    p = rethrow_as(s.field("kind"), [&] {
      const ProfileSpec base = pyramid_spec(apex, n, asym, p.support_radius);
      return rotated ? rotate_quarter(base) : base;
    });
    return p;
  }
  p.kind = rethrow_as(s.field("kind"), [&] { return profile_kind_from_string(kind); });
  switch (p.kind) {
    case ProfileKind::zero:
      break;
    case ProfileKind::gaussian_bump:
      p.amplitude = s.number("amplitude");
      p.width = s.positive("width", 0.25);
      break;
    case ProfileKind::piecewise_linear:
      p.grid_n = s.integer("grid_n", 0, 3);
      p.heights = s.numbers("heights");
      break;
  }
  p.allow_dip = s.boolean("allow_dip", false);
  s.finish();
  return p;
}

IncidentSpec parse_incident(Section s) {
  IncidentSpec inc;
  const std::string type = s.string("type");
  if (type == "plane") {
    inc.type = IncidentSpec::Type::plane;
    inc.phi = s.number("phi", 0.0);
    inc.theta = s.number("theta", 0.0);
  } else if (type == "point") {
    inc.type = IncidentSpec::Type::point;
    inc.z = s.point("z");
  } else {
    throw ConfigError(s.field("type"), "expected \"plane\" or \"point\"");
  }
  s.finish();
  return inc;
}

Tolerances parse_tolerances(Section s) {
  Tolerances t;
  auto tol = [&](const char* key, double& v) { v = s.positive(key, v); };
  tol("flat_null", t.flat_null);
  tol("reciprocity", t.reciprocity);
  tol("symmetry", t.symmetry);
  tol("reflected_farfield", t.reflected_farfield);
  tol("extension", t.extension);
  t.radiation_slope_center = s.number("radiation_slope_center", t.radiation_slope_center);
  tol("radiation_slope_halfwidth", t.radiation_slope_halfwidth);
  tol("pec", t.pec);
  tol("reflection_principle", t.reflection_principle);
  tol("maxwell_fd", t.maxwell_fd);
  t.silver_muller_slope = s.number("silver_muller_slope", t.silver_muller_slope);
  tol("indicator_ratio", t.indicator_ratio);
  tol("indicator_off_ratio", t.indicator_off_ratio);
  tol("inversion_param", t.inversion_param);
  tol("inversion_residual_factor", t.inversion_residual_factor);
  tol("convergence", t.convergence);
  s.finish();
  return t;
}

}  // namespace

Tolerances scaled(const Tolerances& t, double f) {
  if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("tolerance scale must be positive");
  Tolerances o = t;
  for (double* v : {&o.flat_null, &o.reciprocity, &o.symmetry, &o.reflected_farfield, &o.extension, &o.pec,
                    &o.reflection_principle, &o.maxwell_fd, &o.inversion_param, &o.inversion_residual_factor,
                    &o.convergence, &o.radiation_slope_halfwidth, &o.indicator_off_ratio}) {
    *v *= f;
  }
  // Silver-Muller bound is -1 + margin; the margin scales.
  o.silver_muller_slope = -1.0 + (t.silver_muller_slope + 1.0) * f;
  o.indicator_ratio = t.indicator_ratio / f;
  return o;
}

SceneConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("not valid JSON: ") + e.what());
  }
  Section s(root, "");
  SceneConfig c;
  c.k = s.positive("k", c.k);
  c.bc = rethrow_as("bc", [&] { return boundary_condition_from_string(s.string("bc")); });
  c.profile = parse_profile(s.child("profile"));
  const SurfaceProfile profile = rethrow_as("profile", [&] { return build_profile(c.profile); });

  const json& incs = s.raw("incidents");
  if (!incs.is_array() || incs.empty()) throw ConfigError("incidents", "expected a non-empty array");
  for (std::size_t i = 0; i < incs.size(); ++i) {
    c.incidents.push_back(parse_incident(Section(incs[i], "incidents[" + std::to_string(i) + "]")));
  }

  {
    Section m = s.child("mesh");
    c.target_h = m.positive("target_h", c.target_h);
    m.finish();
  }
  if (c.target_h > profile.support_radius() / 4.0) throw ConfigError("mesh.target_h", "must not exceed R/4");
  if (s.has("farfield")) {
    Section f = s.child("farfield");
    c.n_theta = f.integer("n_theta", c.n_theta, 1);
    c.n_phi = f.integer("n_phi", c.n_phi, 1);
    f.finish();
  }
  if (s.has("output_dir")) c.output_dir = s.string("output_dir");
  if (s.has("seed")) {
    const json& v = s.raw("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    c.seed = v.get<std::uint64_t>();
  }

  if (s.has("identities")) {
    Section q = s.child("identities");
    c.identities.reciprocity_pairs = q.integer("reciprocity_pairs", c.identities.reciprocity_pairs, 0);
    c.identities.symmetry_pairs = q.integer("symmetry_pairs", c.identities.symmetry_pairs, 0);
    c.identities.reflected_triples = q.integer("reflected_triples", c.identities.reflected_triples, 0);
    c.identities.extension_samples = q.integer("extension_samples", c.identities.extension_samples, 0);
    q.finish();
  }
  if (s.has("indicator")) {
    Section q = s.child("indicator");
    IndicatorSection ind;
    const json& lines = q.raw("lines");
    if (!lines.is_array() || lines.empty()) throw ConfigError(q.field("lines"), "expected a non-empty array");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      Section l(lines[i], q.field("lines[" + std::to_string(i) + "]"));
      IndicatorLine line;
      line.start = l.point("start");
      line.end = l.point("end");
      line.count = l.integer("count", line.count, 2);
      l.finish();
      ind.lines.push_back(line);
    }
    q.finish();
    c.indicator = ind;
  }
  if (s.has("inversion")) {
    Section q = s.child("inversion");
    InversionSection inv;
    const std::string par = q.string("parametrization");
    if (par == "bump_hw") {
      inv.parametrization = Parametrization::bump_hw;
    } else if (par == "piecewise_linear") {
      inv.parametrization = Parametrization::piecewise_linear;
    } else {
      throw ConfigError(q.field("parametrization"), "expected \"bump_hw\" or \"piecewise_linear\"");
    }
    if (q.has("init")) inv.init = q.numbers("init");
    inv.data_target_h = q.positive("data_target_h", inv.data_target_h);
    inv.noise = q.number("noise", inv.noise);
    if (inv.noise < 0.0) throw ConfigError(q.field("noise"), "must be >= 0");
    inv.alpha = q.number("alpha", inv.alpha);
    inv.max_iterations = q.integer("max_iterations", inv.max_iterations, 1);
    inv.grid_n = q.integer("grid_n", inv.grid_n, 5);
    if (q.has("free_nodes")) {
      for (double v : q.numbers("free_nodes")) {
        if (v != std::floor(v)) throw ConfigError(q.field("free_nodes"), "expected integer node indices");
        inv.free_nodes.push_back(static_cast<int>(v));
      }
    }
    inv.upper = q.positive("upper", inv.upper);
    q.finish();
    if (inv.data_target_h > profile.support_radius() / 4.0) {
      throw ConfigError("inversion.data_target_h", "must not exceed R/4");
    }
    c.inversion = inv;
  }
  if (s.has("maxwell")) {
    Section q = s.child("maxwell");
    c.maxwell.y = q.point("y", c.maxwell.y);
    c.maxwell.p = q.point("p", c.maxwell.p);
    if (q.has("k")) c.maxwell.k = q.positive("k", 1.0);
    c.maxwell.plane_samples = q.integer("plane_samples", c.maxwell.plane_samples, 1);
    c.maxwell.pairs = q.integer("pairs", c.maxwell.pairs, 1);
    q.finish();
    if (!(c.maxwell.y[2] > 0.0)) throw ConfigError("maxwell.y", "dipole must sit above the plane (y3 > 0)");
    if (!(c.maxwell.p.norm() > 0.0)) throw ConfigError("maxwell.p", "polarisation must be nonzero");
  }
  if (s.has("tolerances")) c.tolerances = parse_tolerances(s.child("tolerances"));
  s.finish();

  // Module preconditions, checked before any compute.
  rethrow_as("k", [&] { return make_kernel(c.k, c.bc); });
  for (std::size_t i = 0; i < c.incidents.size(); ++i) {
    const std::string field = "incidents[" + std::to_string(i) + "]";
    rethrow_as(field, [&] {
      const IncidentSpec& is = c.incidents[i];
      if (is.type == IncidentSpec::Type::plane) return make_plane_wave(is.phi, is.theta, c.k, c.bc);
      IncidentWave w = make_point_source(is.z, c.k, c.bc);
      check_source_above(w, profile);
      return w;
    });
  }

  json canonical = root;
  canonical.erase("output_dir");
  c.hash = hash_hex(Hasher().add(canonical.dump()).value());
  return c;
}

SceneConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<IncidentWave> make_incidents(const SceneConfig& cfg) {
  std::vector<IncidentWave> out;
  for (const IncidentSpec& is : cfg.incidents) {
    out.push_back(is.type == IncidentSpec::Type::plane ? make_plane_wave(is.phi, is.theta, cfg.k, cfg.bc)
                                                       : make_point_source(is.z, cfg.k, cfg.bc));
  }
  return out;
}

DirectionGrid make_grid(const SceneConfig& cfg) { return make_hemisphere_grid(cfg.n_theta, cfg.n_phi); }

}  // namespace roughscat
