#include <doctest.h>

#include "roughscat/scene_config.hpp"

using namespace roughscat;

namespace {

const char* kBase = R"({
  "k": 2.0,
  "bc": "neumann",
  "profile": {"kind": "gaussian_bump", "amplitude": 0.3, "width": 0.25},
  "incidents": [{"type": "plane", "phi": 0.2, "theta": 0.1}, {"type": "point", "z": [0, 0, 1.2]}],
  "mesh": {"target_h": 0.1},
  "farfield": {"n_theta": 6, "n_phi": 4},
  "output_dir": "somewhere",
  "seed": 4
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

std::string error_field(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("a valid config parses") {
  const SceneConfig c = parse_config(kBase);
  CHECK(c.k == 2.0);
  CHECK(c.bc == BoundaryCondition::neumann);
  CHECK(c.profile.kind == ProfileKind::gaussian_bump);
  CHECK(c.incidents.size() == 2);
  CHECK(c.incidents[1].type == IncidentSpec::Type::point);
  CHECK(c.n_theta == 6);
  CHECK(c.output_dir == "somewhere");
  CHECK(c.seed == 4);
  CHECK(make_incidents(c).size() == 2);
  CHECK(make_grid(c).size() == 24);
  CHECK(c.hash.size() == 16);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(error_field(replace(kBase, "\"seed\": 4", "\"sede\": 4")) == "sede");
  CHECK(error_field(replace(kBase, "\"width\": 0.25", "\"widht\": 0.25")) == "profile.widht");
  CHECK(error_field(replace(kBase, "\"seed\": 4", "\"seed\": 4, \"tolerances\": {\"reciprocty\": 0.1}")) ==
        "tolerances.reciprocty");
}

TEST_CASE("values are validated field by field") {
  CHECK(error_field(replace(kBase, "\"k\": 2.0", "\"k\": -2.0")) == "k");
  CHECK(error_field(replace(kBase, "\"neumann\"", "\"robin\"")) == "bc");
  CHECK(error_field(replace(kBase, "\"target_h\": 0.1", "\"target_h\": 0.5")) == "mesh.target_h");
  CHECK(error_field(replace(kBase, "\"amplitude\": 0.3", "\"amplitude\": -0.3")) == "profile");
  CHECK(error_field(replace(kBase, "\"phi\": 0.2", "\"phi\": 2.0")) == "incidents[0]");
  CHECK(error_field(replace(kBase, "[0, 0, 1.2]", "[0, 0, 0.1]")) == "incidents[1]");
  CHECK(error_field(replace(kBase, "[0, 0, 1.2]", "[0, 1.2]")) == "incidents[1].z");
  CHECK(error_field(replace(kBase, "\"n_phi\": 4", "\"n_phi\": 0")) == "farfield.n_phi");
  CHECK(error_field("{not json") == "<root>");
  CHECK(error_field(replace(kBase, "\"mesh\": {\"target_h\": 0.1},", "")) == "mesh");
}

TEST_CASE("content hash tracks the physics, not the output directory") {
  const std::string h0 = parse_config(kBase).hash;
  CHECK(parse_config(kBase).hash == h0);
  CHECK(parse_config(replace(kBase, "\"somewhere\"", "\"elsewhere\"")).hash == h0);
  CHECK(parse_config(replace(kBase, "\"k\": 2.0", "\"k\": 2.5")).hash != h0);
  CHECK(parse_config(replace(kBase, "\"seed\": 4", "\"seed\": 5")).hash != h0);
}

TEST_CASE("optional sections") {
  const std::string with = replace(kBase, "\"seed\": 4", R"("seed": 4,
    "inversion": {"parametrization": "bump_hw", "init": [0.15, 0.4], "data_target_h": 0.07, "noise": 0.01},
    "indicator": {"lines": [{"start": [0, 0, 1.5], "end": [0, 0, 0.6], "count": 8}]},
    "maxwell": {"y": [0, 0, 0.5], "p": [0, 1, 0], "k": 3.0})");
  const SceneConfig c = parse_config(with);
  REQUIRE(c.inversion);
  CHECK(c.inversion->init.size() == 2);
  REQUIRE(c.indicator);
  CHECK(c.indicator->lines[0].count == 8);
  CHECK(c.maxwell.k.value() == 3.0);
  CHECK(error_field(replace(with, "\"bump_hw\"", "\"spline\"")) == "inversion.parametrization");
  CHECK(error_field(replace(with, "[0, 0, 0.5]", "[0, 0, -0.5]")) == "maxwell.y");
}

TEST_CASE("tolerance scaling loosens every threshold") {
  const Tolerances t;
  const Tolerances s = scaled(t, 2.0);
  CHECK(s.reciprocity == 2 * t.reciprocity);
  CHECK(s.indicator_ratio == t.indicator_ratio / 2);
  CHECK(s.silver_muller_slope == doctest::Approx(-0.6));
  CHECK(s.radiation_slope_halfwidth == 0.4);
  const Tolerances same = scaled(t, 1.0);
  CHECK(same.silver_muller_slope == doctest::Approx(t.silver_muller_slope));
  CHECK_THROWS_AS(scaled(t, 0.0), std::invalid_argument);
}
