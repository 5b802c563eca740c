#include "roughscat/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "roughscat/hashing.hpp"

namespace roughscat {

std::string to_string(Parametrization p) { return p == Parametrization::bump_hw ? "bump_hw" : "piecewise_linear"; }

ProfileParams make_bump_params(double a, double sigma, double support_radius) {
  ProfileParams p;
  p.kind = Parametrization::bump_hw;
  p.support_radius = support_radius;
  p.values = Eigen::Vector2d(a, sigma);
  p.lower = Eigen::Vector2d(0.0, 0.02 * support_radius);
  p.upper = Eigen::Vector2d(2.0 * support_radius, 2.0 * support_radius);
  validate_params(p);
  return p;
}

ProfileParams make_pl_params(int grid_n, const std::vector<int>& free_nodes, double initial, double upper,
                             double support_radius) {
  ProfileParams p;
  p.kind = Parametrization::piecewise_linear;
  p.support_radius = support_radius;
  p.grid_n = grid_n;
  p.free_nodes = free_nodes;
  p.base_heights.assign(static_cast<std::size_t>(grid_n) * grid_n, 0.0);
  const auto m = static_cast<Eigen::Index>(free_nodes.size());
  p.values = Eigen::VectorXd::Constant(m, initial);
  p.lower = Eigen::VectorXd::Zero(m);
  p.upper = Eigen::VectorXd::Constant(m, upper);
  validate_params(p);
  return p;
}

std::vector<int> center_cross_nodes(int n) {
  if (n < 5 || n % 2 == 0) throw std::invalid_argument("center_cross_nodes: grid size must be odd and >= 5");
  const int c = n / 2;
  return {c * n + c, c * n + c - 1, c * n + c + 1, (c - 1) * n + c, (c + 1) * n + c};
}

void validate_params(const ProfileParams& p) {
  const Eigen::Index m = p.values.size();
  if (p.lower.size() != m || p.upper.size() != m) throw std::invalid_argument("params: bounds size mismatch");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!std::isfinite(p.values[i]) || p.values[i] < p.lower[i] || p.values[i] > p.upper[i]) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "params: entry %ld = %g outside [%g, %g]", static_cast<long>(i), p.values[i],
                    p.lower[i], p.upper[i]);
      throw std::invalid_argument(buf);
    }
  }
  if (p.kind == Parametrization::bump_hw) {
    if (m != 2) throw std::invalid_argument("params: bump_hw takes exactly (a, sigma)");
    return;
  }
  const int n = p.grid_n;
  if (n < 3 || p.base_heights.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("params: piecewise_linear grid/base heights mismatch");
  }
  if (p.free_nodes.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("params: free node count mismatch");
  for (int idx : p.free_nodes) {
    const int i = idx % n, j = idx / n;
    if (idx < 0 || idx >= n * n) throw std::invalid_argument("params: free node index out of range");
    if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
      throw std::invalid_argument("params: boundary-ring nodes are pinned to 0 and cannot be free");
    }
  }
}

ProfileSpec to_profile_spec(const ProfileParams& p) {
  ProfileSpec s;
  s.support_radius = p.support_radius;
  if (p.kind == Parametrization::bump_hw) {
    s.kind = ProfileKind::gaussian_bump;
    s.amplitude = p.values[0];
    s.width = p.values[1];
    return s;
  }
  s.kind = ProfileKind::piecewise_linear;
  s.grid_n = p.grid_n;
  s.heights = p.base_heights;
  for (std::size_t i = 0; i < p.free_nodes.size(); ++i) {
    s.heights[static_cast<std::size_t>(p.free_nodes[i])] = p.values[static_cast<Eigen::Index>(i)];
  }
  return s;
}

ProfileParams with_values(const ProfileParams& p, const Eigen::VectorXd& values) {
  ProfileParams q = p;
  q.values = values;
  return q;
}

namespace {

void check_setup(const ForwardSetup& setup) {
  if (setup.incidents.empty()) throw std::invalid_argument("forward: no incidents");
  if (setup.grid.size() == 0) throw std::invalid_argument("forward: empty far-field grid");
  const IncidentWave& first = setup.incidents.front();
  for (const IncidentWave& w : setup.incidents) {
    if (w.k != first.k || w.bc != first.bc) throw std::invalid_argument("forward: incidents must share k and bc");
  }
}

}  // namespace

Eigen::VectorXcd forward_map(const ProfileParams& params, const ForwardSetup& setup) {
  validate_params(params);
  check_setup(setup);
  const SurfaceProfile profile = build_profile(to_profile_spec(params));
  const PanelMesh mesh = mesh_perturbation(profile, setup.target_h);
  const IncidentWave& first = setup.incidents.front();
  const BoundaryOperator op(mesh, first.k, first.bc, setup.solver);
  const auto m = static_cast<Eigen::Index>(setup.grid.size());
  Eigen::VectorXcd out(m * static_cast<Eigen::Index>(setup.incidents.size()));
  for (std::size_t i = 0; i < setup.incidents.size(); ++i) {
    const auto [density, report] = op.solve(setup.incidents[i]);
    out.segment(static_cast<Eigen::Index>(i) * m, m) = eval_farfield(density, mesh, setup.grid).values;
  }
  return out;
}

ObservedData synthesize_data(const ProfileParams& truth, const ForwardSetup& setup) {
  const SurfaceProfile profile = build_profile(to_profile_spec(truth));
  const PanelMesh mesh = mesh_perturbation(profile, setup.target_h);
  ObservedData d;
  d.values = forward_map(truth, setup);
  d.discretization_hash = mesh.discretization_hash;
  d.scene_hash = hash_hex(Hasher().add(mesh.hash).add(setup.incidents.front().k).value());
  return d;
}

Eigen::VectorXcd add_noise(const Eigen::VectorXcd& data, double level, std::uint64_t seed) {
  if (!(level >= 0.0)) throw std::invalid_argument("noise level must be >= 0");
  if (level == 0.0 || data.size() == 0) return data;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd e(data.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    e[i] = Complex(re, im);
  }
  return data + e * (level * data.norm() / e.norm());
}

std::pair<Eigen::VectorXd, InversionTrace> gauss_newton(const ResidualFunction& forward, const Eigen::VectorXcd& data,
                                                        const Eigen::VectorXd& init, const Eigen::VectorXd& lower,
                                                        const Eigen::VectorXd& upper, const InversionConfig& cfg) {
  if (cfg.max_iterations < 1 || !(cfg.fd_step > 0.0) || cfg.max_halvings < 1 || !(cfg.step_tolerance > 0.0)) {
    throw std::invalid_argument("inversion config: iteration counts and steps must be positive");
  }
  const Eigen::Index m = init.size();
  const Eigen::VectorXd ref = init;
  auto project = [&](Eigen::VectorXd t) { return t.cwiseMax(lower).cwiseMin(upper).eval(); };

  InversionTrace trace;
  // Default weight: 1e-3 |d|^2 / |theta_ref|^2, scaled by the squared noise level so the
  // penalty stays below the misfit floor instead of dominating it.
  trace.alpha = cfg.alpha >= 0.0 ? cfg.alpha
                                 : 1e-3 * cfg.noise_level * cfg.noise_level * data.squaredNorm() /
                                       std::max(ref.squaredNorm(), 1e-300);
  const double alpha = trace.alpha;
  auto objective = [&](const Eigen::VectorXcd& r, const Eigen::VectorXd& t) {
    return 0.5 * r.squaredNorm() + alpha * (t - ref).squaredNorm();
  };

  Eigen::VectorXd theta = project(init);
  Eigen::VectorXcd resid = forward(theta) - data;
  double obj = objective(resid, theta);
  trace.objective.push_back(obj);
  trace.params.push_back(theta);

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    Eigen::MatrixXcd J(resid.size(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
      double step = cfg.fd_step * std::max(std::abs(theta[j]), 1e-2 * std::max(1.0, std::abs(upper[j] - lower[j])));
      if (theta[j] + step > upper[j]) step = -step;
      Eigen::VectorXd tp = theta;
      tp[j] += step;
      J.col(j) = (forward(tp) - data - resid) / step;
    }
    const Eigen::MatrixXd A = (J.adjoint() * J).real() + 2.0 * alpha * Eigen::MatrixXd::Identity(m, m);
    const Eigen::VectorXd g = (J.adjoint() * resid).real() + 2.0 * alpha * (theta - ref);
    // Parameters pinned at a bound with the gradient pushing outward stay fixed;
    // the step is solved on the remaining free set.
    std::vector<Eigen::Index> free;
    for (Eigen::Index j = 0; j < m; ++j) {
      const bool pinned = (theta[j] <= lower[j] && g[j] > 0.0) || (theta[j] >= upper[j] && g[j] < 0.0);
      if (!pinned) free.push_back(j);
    }
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(m);
    if (!free.empty()) {
      const auto nf = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd Af(nf, nf);
      Eigen::VectorXd gf(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        gf[a] = g[free[a]];
        for (Eigen::Index b = 0; b < nf; ++b) Af(a, b) = A(free[a], free[b]);
      }
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(Af);
      if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        throw InversionError("gauss-newton: normal equations are not positive definite");
      }
      const Eigen::VectorXd df = -ldlt.solve(gf);
      for (Eigen::Index a = 0; a < nf; ++a) delta[free[a]] = df[a];
    }
    if (!delta.allFinite()) throw InversionError("gauss-newton: Jacobian solve produced a non-finite step");

    double scale = 1.0;
    bool accepted = false;
    Eigen::VectorXd cand;
    Eigen::VectorXcd cand_resid;
    double cand_obj = obj;
    for (int h = 0; h <= cfg.max_halvings; ++h, scale *= 0.5) {
      cand = project(theta + scale * delta);
      if (cand == theta) {  // zero update: already at the fixed point
        cand_resid = resid;
        cand_obj = obj;
        accepted = true;
        break;
      }
      cand_resid = forward(cand) - data;
      cand_obj = objective(cand_resid, cand);
      if (cand_obj <= obj) {
        accepted = true;
        break;
      }
      // Below the stopping tolerance a failed decrease means theta is stationary
      // to the accuracy of the finite-difference Jacobian.
      if ((cand - theta).norm() < cfg.step_tolerance * std::max(theta.norm(), 1e-300)) {
        cand = theta;
        cand_resid = resid;
        cand_obj = obj;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw InversionError("gauss-newton: objective did not decrease after " + std::to_string(cfg.max_halvings) +
                           " step halvings");
    }
    const double rel_step = (cand - theta).norm() / std::max(theta.norm(), 1e-300);
    theta = cand;
    resid = cand_resid;
    obj = cand_obj;
    trace.objective.push_back(obj);
    trace.params.push_back(theta);
    trace.relative_step.push_back(rel_step);
    trace.iterations = it;
    if (rel_step < cfg.step_tolerance) {
      trace.converged = true;
      break;
    }
  }
  trace.final_residual = resid.norm();
  return {theta, trace};
}

std::pair<ProfileParams, InversionTrace> invert_profile(const ObservedData& data, const ForwardSetup& setup,
                                                        const InversionConfig& cfg, const ProfileParams& init) {
  validate_params(init);
  check_setup(setup);
  const auto expected = static_cast<Eigen::Index>(setup.incidents.size() * setup.grid.size());
  if (data.values.size() != expected) {
    throw std::invalid_argument("invert: data length " + std::to_string(data.values.size()) + " does not match " +
                                std::to_string(expected) + " = incidents x directions");
  }
  const PanelMesh inv_mesh = mesh_perturbation(build_profile(to_profile_spec(init)), setup.target_h);
  if (inv_mesh.discretization_hash == data.discretization_hash) {
    throw InverseCrimeError("inverse crime: data were generated on the inversion mesh (discretization hash " +
                            hash_hex(inv_mesh.discretization_hash) +
                            "); synthesize data with a different target_h");
  }
  auto forward = [&](const Eigen::VectorXd& t) { return forward_map(with_values(init, t), setup); };
  auto [theta, trace] = gauss_newton(forward, data.values, init.values, init.lower, init.upper, cfg);
  return {with_values(init, theta), trace};
}

void write_trace_csv(std::ostream& out, const InversionTrace& trace, const std::string& scene_hash) {
  out << "# scene_hash=" << scene_hash << " alpha=" << trace.alpha << '\n';
  out << "iter,objective";
  const Eigen::Index m = trace.params.empty() ? 0 : trace.params.front().size();
  for (Eigen::Index j = 0; j < m; ++j) out << ",p" << j;
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < trace.objective.size(); ++i) {
    out << i;
    std::snprintf(buf, sizeof buf, ",%.17g", trace.objective[i]);
    out << buf;
    for (Eigen::Index j = 0; j < m; ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g", trace.params[i][j]);
      out << buf;
    }
    out << '\n';
  }
}

IndicatorMap blow_up_indicator(const Scene& scene, const std::vector<Vec3>& samples) {
  IndicatorMap map;
  map.scene_hash = scene.hash;
  map.points = samples;
  map.values.resize(samples.size());
  for (const Vec3& z : samples) {
    if (!(z[2] > scene.profile.height(z))) throw std::invalid_argument("indicator: sample below the surface");
    check_solvable(scene.mesh, make_point_source(z, scene.k, scene.bc));
  }
  const BoundaryOperator op(scene.mesh, scene.k, scene.bc);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [density, report] = op.solve(make_point_source(samples[i], scene.k, scene.bc));
    map.values[i] = std::abs(eval_scattered(density, scene.mesh, samples[i]));
  }
  return map;
}

void write_indicator_csv(std::ostream& out, const IndicatorMap& map) {
  out << "# scene_hash=" << map.scene_hash << '\n' << "x,y,z,I\n";
  char buf[128];
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    const Vec3& p = map.points[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p[0], p[1], p[2], map.values[i]);
    out << buf;
  }
}

double residual_separation(const SurfaceProfile& a, const SurfaceProfile& b, const IncidentWave& incident,
                           const DirectionGrid& grid, double target_h, const SolverOptions& solver) {
  auto farfield = [&](const SurfaceProfile& p) {
    const PanelMesh mesh = mesh_perturbation(p, target_h);
    const BoundaryOperator op(mesh, incident.k, incident.bc, solver);
    return eval_farfield(op.solve(incident).first, mesh, grid).values;
  };
  const Eigen::VectorXcd fa = farfield(a);
  const Eigen::VectorXcd fb = farfield(b);
  const double na = fa.norm();
  if (!(na > 0.0)) throw std::invalid_argument("residual_separation: reference far field vanishes");
  return (fa - fb).norm() / na;
}

ProfileSpec pyramid_spec(double apex, int n, bool asymmetric, double support_radius) {
  if (n < 7 || n % 2 == 0) throw std::invalid_argument("pyramid: grid size must be odd and >= 7");
  ProfileSpec s;
  s.kind = ProfileKind::piecewise_linear;
  s.support_radius = support_radius;
  s.grid_n = n;
  s.heights.assign(static_cast<std::size_t>(n) * n, 0.0);
  const int c = n / 2;
  auto at = [&](int i, int j) -> double& { return s.heights[static_cast<std::size_t>(j * n + i)]; };
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) at(c + di, c + dj) = 0.5 * apex;
  }
  at(c, c) = apex;
  if (asymmetric) at(c + 2, c) = 0.25 * apex;
  return s;
}

ProfileSpec rotate_quarter(const ProfileSpec& spec) {
  if (spec.kind != ProfileKind::piecewise_linear) throw std::invalid_argument("rotate_quarter: piecewise_linear only");
  const int n = spec.grid_n;
  const int c = n / 2;
  if (n % 2 == 0) throw std::invalid_argument("rotate_quarter: grid size must be odd");
  ProfileSpec out = spec;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int di = i - c, dj = j - c;
      const int ni = c - dj, nj = c + di;
      out.heights[static_cast<std::size_t>(nj * n + ni)] = spec.heights[static_cast<std::size_t>(j * n + i)];
    }
  }
  return out;
}

}  // namespace roughscat
