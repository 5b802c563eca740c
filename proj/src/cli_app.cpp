#include "roughscat/cli_app.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "roughscat/bem_solver.hpp"
#include "roughscat/halfspace_green.hpp"
#include "roughscat/hashing.hpp"
#include "roughscat/identities.hpp"
#include "roughscat/inverse.hpp"
#include "roughscat/maxwell_images.hpp"
#include "roughscat/scene.hpp"
#include "roughscat/scene_config.hpp"

namespace roughscat {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Context {
  SceneConfig cfg;
  Tolerances tol;
  fs::path out;
  std::string hash;  // scene hash embedded in every artifact
  std::ostream& log;
  RunResult result;
  bool all_pass = true;

  std::ofstream open(const std::string& name) {
    fs::create_directories(out);
    const fs::path p = out / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    result.artifacts.push_back(p.string());
    return f;
  }

  void verdict(const std::string& name, bool ok, const std::string& detail) {
    all_pass = all_pass && ok;
    log << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path resolve_out(const RunOptions& opts, const SceneConfig& cfg) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv(kOutputEnvVar); env && *env) return env;
  return "roughscat_out";
}

Scene scene_of(const Context& c) {
  Scene s = make_scene(c.cfg.profile, c.cfg.target_h, c.cfg.k, c.cfg.bc);
  s.hash = c.hash;
  return s;
}

int ring_count(double R, double h) { return static_cast<int>(std::ceil(R / h - 1e-12)); }

// Random unit direction with negative x3 and polar angle at most 60 degrees from -e3.
Vec3 random_incident_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pol(0.0, kPi / 3.0), az(0.0, 2.0 * kPi);
  const double p = pol(rng), t = az(rng);
  return make_plane_wave(p, t, 1.0, BoundaryCondition::dirichlet).plane().direction();
}

// Point above the perturbation, at least 5h above the highest surface point.
Vec3 random_point_above(std::mt19937_64& rng, const Scene& s) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double R = s.profile.support_radius();
  const double rho = 0.8 * R * std::sqrt(u(rng));
  const double ang = 2.0 * kPi * u(rng);
  const double base = s.profile.max_height() + kIdentityClearance * s.mesh.h + 0.05;
  return {rho * std::cos(ang), rho * std::sin(ang), base + 0.7 * u(rng)};
}

int cmd_forward(Context& c) {
  const Scene scene = scene_of(c);
  const BoundaryOperator op(scene.mesh, scene.k, scene.bc);
  const std::vector<IncidentWave> incs = make_incidents(c.cfg);
  const DirectionGrid grid = make_grid(c.cfg);
  c.log << "mesh: " << scene.mesh.size() << " panels, h=" << scene.mesh.h
        << ", condition estimate " << fmt("%.3g", op.condition_estimate()) << '\n';
  for (std::size_t i = 0; i < incs.size(); ++i) {
    const auto [density, report] = op.solve(incs[i]);
    FarFieldPattern ff = eval_farfield(density, scene.mesh, grid);
    ff.scene_hash = c.hash;
    const IncidentSpec& is = c.cfg.incidents[i];
    std::string extra = is.type == IncidentSpec::Type::plane
                            ? "incident=plane" + fmt(" phi=%.17g", is.phi) + fmt(" theta=%.17g", is.theta)
                            : "incident=point" + fmt(" z=(%.17g", is.z[0]) + fmt(",%.17g", is.z[1]) +
                                  fmt(",%.17g)", is.z[2]);
    std::ofstream f = c.open("farfield_" + std::to_string(i) + ".csv");
    write_farfield_csv(f, ff, extra);
    c.log << "incident " << i << ": residual " << fmt("%.3g", report.residual_norm / std::max(report.rhs_norm, 1e-300))
          << " relative\n";
  }
  return 0;
}

int cmd_identities(Context& c) {
  const Scene scene = scene_of(c);
  const BoundaryOperator op(scene.mesh, scene.k, scene.bc);
  std::mt19937_64 rng(c.cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::ofstream f = c.open("identities.jsonl");
  const Tolerances& t = c.tol;

  double worst = 0.0;
  for (int i = 0; i < c.cfg.identities.reciprocity_pairs; ++i) {
    const Vec3 d = random_incident_direction(rng);
    const Vec3 z = random_point_above(rng, scene);
    const IdentityReport r = check_mixed_reciprocity(op, d, z, c.hash);
    f << to_json_line(r) << '\n';
    worst = std::max(worst, r.rel_err);
  }
  c.verdict("mixed_reciprocity", worst <= t.reciprocity, "max rel_err " + fmt("%.3e", worst));

  worst = 0.0;
  for (int i = 0; i < c.cfg.identities.symmetry_pairs; ++i) {
    Vec3 x = random_point_above(rng, scene), y = random_point_above(rng, scene);
    while ((x - y).norm() < 0.1) y = random_point_above(rng, scene);
    const IdentityReport r = check_point_symmetry(op, x, y, c.hash);
    f << to_json_line(r) << '\n';
    worst = std::max(worst, r.rel_err);
  }
  c.verdict("point_symmetry", worst <= t.symmetry, "max rel_err " + fmt("%.3e", worst));

  worst = 0.0;
  for (int i = 0; i < c.cfg.identities.reflected_triples; ++i) {
    const Vec3 z{4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0, 2.0 * u(rng)};
    const Vec3 d = random_incident_direction(rng);
    const double k = 0.5 + 4.5 * u(rng);
    IdentityReport r = check_reflected_farfield(z, d, k, scene.bc);
    r.scene_hash = c.hash;
    if (i < 3) f << to_json_line(r) << '\n';
    worst = std::max(worst, r.rel_err);
  }
  c.verdict("reflected_farfield", worst <= t.reflected_farfield, "max rel_err " + fmt("%.3e", worst));

  const IncidentWave wave = make_plane_wave(0.3, 0.5, scene.k, scene.bc);
  const LayerDensity density = op.solve(wave).first;
  std::vector<Vec3> ext;
  const double R = scene.profile.support_radius();
  for (int i = 0; i < c.cfg.identities.extension_samples; ++i) {
    const double rho = R * (1.5 + 1.5 * u(rng));
    const double ang = 2.0 * kPi * u(rng);
    ext.push_back({rho * std::cos(ang), rho * std::sin(ang), 0.2 + 1.3 * u(rng)});
  }
  if (!ext.empty()) {
    const IdentityReport r = check_extension(density, scene.mesh, ext, c.hash);
    f << to_json_line(r) << '\n';
    c.verdict(r.name, r.rel_err <= t.extension, "worst rel_err " + fmt("%.3e", r.rel_err));
  }

  const double lo = t.radiation_slope_center - t.radiation_slope_halfwidth;
  const double hi = t.radiation_slope_center + t.radiation_slope_halfwidth;
  const Vec3 xhat = Vec3(0.3, 0.2, 0.9).normalized();
  const SlopeReport solved = check_radiation_decay(density, scene.mesh, xhat, c.hash);
  f << to_json_line(solved) << '\n';
  c.verdict("radiation_decay_solved", solved.within(lo, hi),
            solved.vacuous ? std::string("residual identically zero") : "slope " + fmt("%.3f", solved.slope));
  const GreenKernel kern = make_kernel(scene.k, scene.bc);
  const Vec3 y0(0.1, -0.2, 0.5);
  RadiationSampling rs;
  rs.r_min = 10.0 * R;
  rs.r_max = 100.0 * R;
  SlopeReport bare = radiation_slope([&](const Vec3& x) { return eval_G(kern, x, y0); }, scene.k, xhat, rs,
                                     "radiation_decay_kernel");
  bare.scene_hash = c.hash;
  f << to_json_line(bare) << '\n';
  c.verdict("radiation_decay_kernel", bare.within(lo, hi), "slope " + fmt("%.3f", bare.slope));
  return 0;
}

int cmd_maxwell(Context& c) {
  const MaxwellSection& m = c.cfg.maxwell;
  const double k = m.k.value_or(c.cfg.k);
  const DipoleSource src = make_dipole(m.y, m.p, k);
  const Plane plane = ground_plane();
  const Tolerances& t = c.tol;
  std::mt19937_64 rng(c.cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::ofstream f = c.open("maxwell.jsonl");

  std::vector<Vec3> on_plane;
  for (int i = 0; i < m.plane_samples; ++i) on_plane.push_back({3.0 * u(rng), 3.0 * u(rng), 0.0});
  ResidualReport pec = check_pec(src, plane, on_plane);
  pec.scene_hash = c.hash;
  f << to_json_line(pec) << '\n';
  c.verdict("pec_tangential", pec.residual <= t.pec, fmt("%.3e", pec.residual));

  std::vector<Vec3> box;
  for (int i = 0; i < m.pairs; ++i) box.push_back({2.0 * u(rng), 2.0 * u(rng), 2.0 * u(rng)});
  ReflectionPrincipleReport rp = check_reflection_principle(src, plane, box);
  rp.electric.scene_hash = rp.magnetic.scene_hash = c.hash;
  f << to_json_line(rp.electric) << '\n' << to_json_line(rp.magnetic) << '\n';
  c.verdict("reflection_principle",
            rp.electric.residual <= t.reflection_principle && rp.magnetic.residual <= t.reflection_principle,
            "E " + fmt("%.3e", rp.electric.residual) + ", H " + fmt("%.3e", rp.magnetic.residual));

  const double step = 1e-4 / k;
  const Vec3 y_img = mirror(src.y, plane);
  ResidualReport fd{"maxwell_fd", 0.0, 0, c.hash};
  ResidualReport div{"divergence_fd", 0.0, 0, c.hash};
  EMField in = [&](const Vec3& x) { return eval_dipole(src, x); };
  EMField re = [&](const Vec3& x) { return eval_image_field(src, plane, x); };
  for (int i = 0; i < 20; ++i) {
    const Vec3 x{2.0 * u(rng), 2.0 * u(rng), 2.0 * u(rng)};
    if ((x - src.y).norm() < 0.2 || (x - y_img).norm() < 0.2) continue;
    for (const EMField* field : {&in, &re}) {
      fd.residual = std::max(fd.residual, maxwell_residual(*field, k, x, step));
      div.residual = std::max(div.residual, divergence_residual(*field, k, x, step));
      ++fd.samples;
      ++div.samples;
    }
  }
  f << to_json_line(fd) << '\n' << to_json_line(div) << '\n';
  c.verdict("maxwell_fd", fd.residual <= t.maxwell_fd && div.residual <= t.maxwell_fd,
            "curl " + fmt("%.3e", fd.residual) + ", div " + fmt("%.3e", div.residual));

  // E blows up at the dipole and equally at its image.
  const double far = eval_total_field(src, plane, src.y + Vec3(0, 0, 100.0 / k)).E.norm();
  const double near_y = eval_total_field(src, plane, src.y + Vec3(1e-3, 0, 0)).E.norm();
  const double near_img = eval_total_field(src, plane, y_img + Vec3(1e-3, 0, 0)).E.norm();
  ResidualReport pairing{"singularity_pairing", std::min(near_y, near_img) / far, 2, c.hash};
  f << to_json_line(pairing) << '\n';
  c.verdict("singularity_pairing", pairing.residual > 1e6, "min |E| ratio " + fmt("%.3e", pairing.residual));

  SilverMullerReport sm = check_silver_muller(src, plane, Vec3::UnitZ());
  sm.sommerfeld.scene_hash = sm.amplitude.scene_hash = c.hash;
  f << to_json_line(sm.sommerfeld) << '\n' << to_json_line(sm.amplitude) << '\n';
  c.verdict("silver_muller", sm.sommerfeld.slope <= t.silver_muller_slope,
            "slope " + fmt("%.3f", sm.sommerfeld.slope) + ", |E| slope " + fmt("%.3f", sm.amplitude.slope));
  return 0;
}

int cmd_indicator(Context& c) {
  if (!c.cfg.indicator) throw ConfigError("indicator", "section required by the indicator subcommand");
  const Scene scene = scene_of(c);
  std::vector<Vec3> samples;
  for (const IndicatorLine& l : c.cfg.indicator->lines) {
    for (int i = 0; i < l.count; ++i) samples.push_back(l.start + (l.end - l.start) * (double(i) / (l.count - 1)));
  }
  const IndicatorMap map = blow_up_indicator(scene, samples);
  std::ofstream f = c.open("indicator.csv");
  write_indicator_csv(f, map);

  std::size_t off = 0;
  for (std::size_t li = 0; li < c.cfg.indicator->lines.size(); ++li) {
    const IndicatorLine& l = c.cfg.indicator->lines[li];
    const std::vector<double> v(map.values.begin() + off, map.values.begin() + off + l.count);
    off += l.count;
    const double first = v.front(), last = v.back();
    const std::string name = "indicator_line_" + std::to_string(li);
    if (scene.profile.height(l.end) > 0.0) {
      bool monotone = true;
      for (int i = std::max(1, l.count - 4); i < l.count; ++i) monotone = monotone && v[i] > v[i - 1];
      const double ratio = last / first;
      c.verdict(name, monotone && ratio >= c.tol.indicator_ratio,
                std::string(monotone ? "increasing" : "not increasing") + " over the last samples, ratio " +
                    fmt("%.3g", ratio));
    } else {
      const double ratio = last == 0.0 ? 0.0 : last / first;
      c.verdict(name, ratio <= c.tol.indicator_off_ratio, "off-perturbation ratio " + fmt("%.3g", ratio));
    }
  }
  return 0;
}

template <class F>
auto rethrow_init(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("inversion.init", e.what());
  }
}

int cmd_invert(Context& c) {
  if (!c.cfg.inversion) throw ConfigError("inversion", "section required by the invert subcommand");
  const InversionSection& s = *c.cfg.inversion;
  const double R = c.cfg.profile.support_radius;

  ProfileParams init;
  if (s.parametrization == Parametrization::bump_hw) {
    if (s.init.size() != 2) throw ConfigError("inversion.init", "bump_hw needs [a, sigma]");
    init = rethrow_init([&] { return make_bump_params(s.init[0], s.init[1], R); });
  } else {
    const std::vector<int> nodes = s.free_nodes.empty() ? center_cross_nodes(s.grid_n) : s.free_nodes;
    const double start = s.init.empty() ? 0.1 : s.init[0];
    init = rethrow_init([&] { return make_pl_params(s.grid_n, nodes, start, s.upper, R); });
    if (s.init.size() > 1) {
      if (s.init.size() != nodes.size()) throw ConfigError("inversion.init", "one value or one per free node");
      init.values = Eigen::Map<const Eigen::VectorXd>(s.init.data(), static_cast<Eigen::Index>(s.init.size()));
      rethrow_init([&] { validate_params(init); return 0; });
    }
  }

  ForwardSetup setup;
  setup.incidents = make_incidents(c.cfg);
  setup.grid = make_grid(c.cfg);
  setup.target_h = c.cfg.target_h;

  // Synthetic data from the configured profile on its own mesh.
  const SurfaceProfile truth = build_profile(c.cfg.profile);
  const PanelMesh data_mesh = mesh_perturbation(truth, s.data_target_h);
  if (data_mesh.discretization_hash ==
      mesh_perturbation(build_profile(to_profile_spec(init)), setup.target_h).discretization_hash) {
    throw InverseCrimeError("inverse crime: inversion.data_target_h and mesh.target_h give the same discretization (hash " +
                            hash_hex(data_mesh.discretization_hash) + "); choose different mesh sizes");
  }
  const BoundaryOperator data_op(data_mesh, c.cfg.k, c.cfg.bc);
  ObservedData data;
  data.discretization_hash = data_mesh.discretization_hash;
  data.scene_hash = c.hash;
  const auto m = static_cast<Eigen::Index>(setup.grid.size());
  Eigen::VectorXcd clean(m * static_cast<Eigen::Index>(setup.incidents.size()));
  for (std::size_t i = 0; i < setup.incidents.size(); ++i) {
    clean.segment(static_cast<Eigen::Index>(i) * m, m) =
        eval_farfield(data_op.solve(setup.incidents[i]).first, data_mesh, setup.grid).values;
  }
  data.values = add_noise(clean, s.noise, c.cfg.seed);

  InversionConfig ic;
  ic.alpha = s.alpha;
  ic.max_iterations = s.max_iterations;
  ic.noise_level = s.noise;
  const auto [est, trace] = invert_profile(data, setup, ic, init);

  std::ofstream tf = c.open("trace.csv");
  write_trace_csv(tf, trace, c.hash);
  ordered_json out;
  out["scene_hash"] = c.hash;
  out["parametrization"] = to_string(est.kind);
  out["params"] = std::vector<double>(est.values.data(), est.values.data() + est.values.size());
  out["iterations"] = trace.iterations;
  out["converged"] = trace.converged;
  out["alpha"] = trace.alpha;
  out["residual"] = trace.final_residual;
  const double floor = s.noise * clean.norm();
  out["noise_floor"] = floor;

  if (est.kind == Parametrization::bump_hw && truth.kind() == ProfileKind::gaussian_bump) {
    const double ea = std::abs(est.values[0] - truth.spec().amplitude) / std::abs(truth.spec().amplitude);
    const double es = std::abs(est.values[1] - truth.spec().width) / truth.spec().width;
    out["param_rel_err"] = {ea, es};
    c.verdict("inversion_params", std::max(ea, es) <= c.tol.inversion_param,
              "relative errors a " + fmt("%.3e", ea) + ", sigma " + fmt("%.3e", es));
  }
  if (est.kind == Parametrization::piecewise_linear && floor > 0.0) {
    c.verdict("inversion_residual", trace.final_residual <= c.tol.inversion_residual_factor * floor,
              "residual " + fmt("%.4g", trace.final_residual) + " vs noise floor " + fmt("%.4g", floor));
  }
  std::ofstream jf = c.open("inversion.json");
  jf << out.dump(2) << '\n';
  return 0;
}

int cmd_convergence(Context& c) {
  const std::vector<IncidentWave> incs = make_incidents(c.cfg);
  const DirectionGrid grid = make_grid(c.cfg);
  const SurfaceProfile profile = build_profile(c.cfg.profile);
  auto farfield = [&](double h) {
    const PanelMesh mesh = mesh_perturbation(profile, h);
    const BoundaryOperator op(mesh, c.cfg.k, c.cfg.bc);
    const auto m = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXcd v(m * static_cast<Eigen::Index>(incs.size()));
    for (std::size_t i = 0; i < incs.size(); ++i) {
      v.segment(static_cast<Eigen::Index>(i) * m, m) = eval_farfield(op.solve(incs[i]).first, mesh, grid).values;
    }
    return v;
  };
  const double h = c.cfg.target_h;
  const Eigen::VectorXcd coarse = farfield(h);
  const Eigen::VectorXcd fine = farfield(h / 2.0);
  const double scale = fine.cwiseAbs().maxCoeff();
  const double diff = (coarse - fine).cwiseAbs().maxCoeff();
  const double rel = scale > 0.0 ? diff / scale : diff;
  ordered_json out;
  out["scene_hash"] = c.hash;
  out["h"] = h;
  out["h_half"] = h / 2.0;
  out["max_abs_diff"] = diff;
  out["max_abs_fine"] = scale;
  out["rel_diff"] = rel;
  std::ofstream f = c.open("convergence.json");
  f << out.dump(2) << '\n';
  c.verdict("self_convergence", rel <= c.tol.convergence, "max-norm relative difference " + fmt("%.3e", rel));
  return 0;
}

void print_plan(const std::string& sub, const Context& c) {
  const SceneConfig& cfg = c.cfg;
  const double R = cfg.profile.support_radius;
  const int n = ring_count(R, cfg.target_h);
  c.log << "plan: " << sub << '\n'
        << "  scene_hash " << c.hash << '\n'
        << "  profile " << to_string(cfg.profile.kind) << ", R=" << R << '\n'
        << "  k=" << cfg.k << " bc=" << to_string(cfg.bc) << '\n'
        << "  mesh target_h=" << cfg.target_h << " -> " << 6 * n * n << " panels\n"
        << "  incidents " << cfg.incidents.size() << ", far-field grid " << cfg.n_theta << "x" << cfg.n_phi << '\n'
        << "  output " << c.out.string() << '\n';
  if (sub == "identities") {
    c.log << "  reciprocity " << cfg.identities.reciprocity_pairs << ", symmetry " << cfg.identities.symmetry_pairs
          << ", reflected " << cfg.identities.reflected_triples << ", extension " << cfg.identities.extension_samples
          << " samples\n";
  } else if (sub == "convergence") {
    const int n2 = ring_count(R, cfg.target_h / 2.0);
    c.log << "  refined mesh " << 6 * n2 * n2 << " panels\n";
  } else if (sub == "invert" && cfg.inversion) {
    const int nd = ring_count(R, cfg.inversion->data_target_h);
    c.log << "  data mesh " << 6 * nd * nd << " panels, noise " << cfg.inversion->noise << '\n';
  }
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"forward", "identities", "maxwell", "indicator", "invert", "convergence"};
  return names;
}

RunResult run_command(const std::string& sub, const RunOptions& opts, std::ostream& log) {
  RunResult res;
  if (std::find(subcommands().begin(), subcommands().end(), sub) == subcommands().end()) {
    log << "error: unknown subcommand '" << sub << "'\n";
    res.exit_code = 2;
    return res;
  }
  try {
    if (opts.threads < 0) throw ConfigError("--threads", "must be >= 0");
    SceneConfig cfg = load_config(opts.config_path);
    const Tolerances tol = scaled(cfg.tolerances, opts.tolerance_scale);
    Context c{std::move(cfg), tol, {}, {}, log, {}, true};
    c.out = resolve_out(opts, c.cfg);
    // Scene hash: discretised scene plus the canonical config.
    const SurfaceProfile profile = build_profile(c.cfg.profile);
    const PanelMesh mesh = mesh_perturbation(profile, c.cfg.target_h);
    c.hash = hash_hex(Hasher().add(mesh.hash).add(c.cfg.k).add(to_string(c.cfg.bc)).add(c.cfg.hash).value());
    c.result.scene_hash = c.hash;
    if (opts.dry_run) {
      print_plan(sub, c);
      return c.result;
    }
    if (opts.threads > 0) omp_set_num_threads(opts.threads);

    if (sub == "forward") cmd_forward(c);
    else if (sub == "identities") cmd_identities(c);
    else if (sub == "maxwell") cmd_maxwell(c);
    else if (sub == "indicator") cmd_indicator(c);
    else if (sub == "invert") cmd_invert(c);
    else cmd_convergence(c);

    res = c.result;
    res.exit_code = c.all_pass ? 0 : 1;
    log << (c.all_pass ? "all checks passed" : "tolerance breached") << " (scene_hash " << c.hash << ")\n";
  } catch (const InverseCrimeError& e) {
    log << "error: " << e.what() << '\n';
    res.exit_code = 2;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    res.exit_code = 2;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    res.exit_code = 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    res.exit_code = 3;
  }
  return res;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"roughscat: acoustic scattering by a locally perturbed ground plane"};
  app.require_subcommand(1);
  RunOptions opts;
  app.add_option("--config", opts.config_path, "scene config (JSON)")->required();
  app.add_option("--out", opts.out_dir, std::string("output directory (default: config, then $") + kOutputEnvVar + ")");
  app.add_option("--threads", opts.threads, "cap on worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--dry-run", opts.dry_run, "validate the config and print the plan without solving");
  app.add_option("--tolerance-scale", opts.tolerance_scale, "multiplies every suite tolerance")
      ->check(CLI::PositiveNumber);
  app.fallthrough();
  const std::map<std::string, std::string> help{
      {"forward", "solve every incident and write far-field CSVs"},
      {"identities", "reciprocity, symmetry, reflection, extension and radiation checks"},
      {"maxwell", "PEC, reflection principle, Maxwell residual and Silver-Muller checks"},
      {"indicator", "blow-up indicator along the configured lines"},
      {"invert", "synthetic-data profile reconstruction"},
      {"convergence", "far-field self-convergence between h and h/2"}};
  for (const std::string& name : subcommands()) {
    const auto it = help.find(name);
    app.add_subcommand(name, it == help.end() ? std::string{} : it->second);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  return run_command(sub, opts, std::cout).exit_code;
}

}  // namespace roughscat
