#include "roughscat/bem_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "roughscat/halfspace_green.hpp"
#include "roughscat/hashing.hpp"

namespace roughscat {

namespace {

inline Complex rdot(const Vec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline CVec3 ground_mirror(const CVec3& v) { return {v[0], v[1], -v[2]}; }

}  // namespace

std::string to_string(Formulation f) {
  return f == Formulation::dirichlet_combined ? "dirichlet_combined" : "neumann_single";
}

Formulation formulation_for(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? Formulation::dirichlet_combined : Formulation::neumann_single;
}

DirectionGrid make_hemisphere_grid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("direction grid: n_theta and n_phi must be >= 1");
  DirectionGrid g;
  for (int ip = 0; ip < n_phi; ++ip) {
    const double phi = (ip + 0.5) * (kPi / 2.0) / n_phi;
    for (int it = 0; it < n_theta; ++it) {
      const double theta = it * 2.0 * kPi / n_theta;
      g.phi.push_back(phi);
      g.theta.push_back(theta);
      g.directions.emplace_back(std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi));
    }
  }
  return g;
}

DirectionGrid make_direction_grid(const std::vector<Vec3>& directions) {
  DirectionGrid g;
  for (const Vec3& d : directions) {
    if (!(d[2] > 0.0) || std::abs(d.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("direction grid: every direction must be a unit vector with positive x3");
    }
    g.directions.push_back(d);
    g.phi.push_back(std::acos(std::clamp(d[2], -1.0, 1.0)));
    g.theta.push_back(std::atan2(d[1], d[0]));
  }
  return g;
}

BoundaryOperator::BoundaryOperator(const PanelMesh& mesh, double k, BoundaryCondition bc, const SolverOptions& opts)
    : mesh_(mesh), k_(k), bc_(bc), eta_(k), opts_(opts) {
  make_kernel(k, bc);
  if (mesh.from_dipping_profile) {
    throw std::invalid_argument("solver: dipping profiles (f < 0) are not supported by the half-space representation");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto& panels = mesh_.panels;
  const auto n = static_cast<Eigen::Index>(panels.size());
  matrix_.resize(n, n);
  const bool dirichlet = bc == BoundaryCondition::dirichlet;
  const double jump = dirichlet ? 0.5 : -0.5;
  const auto& quad = opts_.quadrature;

#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 x = panels[i].centroid;
    const Vec3 xm = roughscat::ground_mirror(x);
    const Vec3& nu_i = panels[i].normal;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Panel& pj = panels[j];
      const PanelIntegral direct = integrate_panel(pj, x, k_, quad);
      const PanelIntegral image = integrate_panel(pj, xm, k_, quad);
      Complex a;
      if (dirichlet) {
        a = rdot(pj.normal, direct.grad_y - image.grad_y) - kI * eta_ * (direct.single - image.single);
      } else {
        a = -rdot(nu_i, direct.grad_y + ground_mirror(image.grad_y));
      }
      matrix_(i, j) = a;
    }
    matrix_(i, i) += jump;
  }

  lu_.compute(matrix_);
  const double rcond = lu_.rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  assembly_time_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!(condition_ <= opts_.max_condition)) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "solver: condition estimate %.3e exceeds %.1e; k = %g is likely near an interior resonance "
                  "of the %s formulation",
                  condition_, opts_.max_condition, k_, to_string(formulation_for(bc_)).c_str());
    throw SolverError(buf);
  }
}

Eigen::VectorXcd BoundaryOperator::right_hand_side(const IncidentWave& inc) const {
  if (inc.k != k_ || inc.bc != bc_) throw std::invalid_argument("solver: incident wave k/bc differ from the operator");
  const auto& panels = mesh_.panels;
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(panels.size()));
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Vec3& x = panels[i].centroid;
    rhs[static_cast<Eigen::Index>(i)] =
        bc_ == BoundaryCondition::dirichlet ? -eval_pair(inc, x) : -rdot(panels[i].normal, grad_pair(inc, x));
  }
  return rhs;
}

std::pair<LayerDensity, SolveReport> BoundaryOperator::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != matrix_.rows()) throw std::invalid_argument("solver: right-hand side has the wrong length");
  const auto start = std::chrono::steady_clock::now();
  LayerDensity density;
  density.formulation = formulation_for(bc_);
  density.coupling = bc_ == BoundaryCondition::dirichlet ? eta_ : 0.0;
  density.k = k_;
  density.coefficients = lu_.solve(rhs);

  SolveReport report;
  report.panel_count = mesh_.size();
  report.condition_estimate = condition_;
  report.rhs_norm = rhs.norm();
  report.residual_norm = (matrix_ * density.coefficients - rhs).norm();
  report.wall_time_s = assembly_time_ + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!density.coefficients.allFinite() || report.residual_norm > opts_.residual_tolerance * report.rhs_norm) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "solver: residual %.3e exceeds %.1e x rhs norm %.3e", report.residual_norm,
                  opts_.residual_tolerance, report.rhs_norm);
    throw SolverError(buf);
  }
  return {std::move(density), report};
}

std::pair<LayerDensity, SolveReport> BoundaryOperator::solve(const IncidentWave& inc) const {
  check_solvable(mesh_, inc);
  return solve(right_hand_side(inc));
}

void check_solvable(const PanelMesh& mesh, const IncidentWave& inc) {
  if (mesh.from_dipping_profile) {
    throw std::invalid_argument("solver: dipping profiles (f < 0) are not supported by the half-space representation");
  }
  make_kernel(inc.k, inc.bc);
  if (inc.is_point()) {
    const Vec3& z = inc.point().z;
    if (!(z[2] > 0.0)) throw std::invalid_argument("solver: point source must lie above the ground plane");
    const double dist = distance_to_mesh(mesh, z);
    if (dist < kEvalClearance * mesh.h) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "solver: point source is %.3g from the surface, closer than 2h = %.3g", dist,
                    kEvalClearance * mesh.h);
      throw std::invalid_argument(buf);
    }
  }
}

std::pair<LayerDensity, SolveReport> solve_scattered(const PanelMesh& mesh, const IncidentWave& inc,
                                                     const SolverOptions& opts) {
  check_solvable(mesh, inc);
  const BoundaryOperator op(mesh, inc.k, inc.bc, opts);
  return op.solve(inc);
}

Complex eval_scattered_unchecked(const LayerDensity& density, const PanelMesh& mesh, const Vec3& x,
                                 const QuadratureOptions& quad) {
  const Vec3 xm = roughscat::ground_mirror(x);
  const bool dirichlet = density.formulation == Formulation::dirichlet_combined;
  Complex u{};
  for (std::size_t j = 0; j < mesh.panels.size(); ++j) {
    const Complex c = density.coefficients[static_cast<Eigen::Index>(j)];
    if (c == Complex{}) continue;
    const Panel& pj = mesh.panels[j];
    const PanelIntegral direct = integrate_panel(pj, x, density.k, quad);
    const PanelIntegral image = integrate_panel(pj, xm, density.k, quad);
    if (dirichlet) {
      u += c * (rdot(pj.normal, direct.grad_y - image.grad_y) - kI * density.coupling * (direct.single - image.single));
    } else {
      u += c * (direct.single + image.single);
    }
  }
  return u;
}

Complex eval_scattered(const LayerDensity& density, const PanelMesh& mesh, const Vec3& x,
                       const QuadratureOptions& quad) {
  if (density.coefficients.size() != static_cast<Eigen::Index>(mesh.size())) {
    throw std::invalid_argument("eval_scattered: density length differs from the panel count");
  }
  const double clearance = kEvalClearance * mesh.h;
  const double dist = std::min(distance_to_mesh(mesh, x), distance_to_mesh(mesh, roughscat::ground_mirror(x)));
  if (dist < clearance) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "eval_scattered: point (%g, %g, %g) is %.3g from the surface or its image, closer than 2h = %.3g",
                  x[0], x[1], x[2], dist, clearance);
    throw std::invalid_argument(buf);
  }
  return eval_scattered_unchecked(density, mesh, x, quad);
}

FarFieldPattern eval_farfield(const LayerDensity& density, const PanelMesh& mesh, const DirectionGrid& grid) {
  if (density.coefficients.size() != static_cast<Eigen::Index>(mesh.size())) {
    throw std::invalid_argument("eval_farfield: density length differs from the panel count");
  }
  const BoundaryCondition bc =
      density.formulation == Formulation::dirichlet_combined ? BoundaryCondition::dirichlet : BoundaryCondition::neumann;
  const GreenKernel kern{density.k, bc};
  FarFieldPattern ff;
  ff.grid = grid;
  ff.k = density.k;
  ff.bc = bc;
  ff.mesh_h = mesh.h;
  ff.scene_hash = hash_hex(mesh.hash);
  const auto m = static_cast<Eigen::Index>(grid.size());
  ff.values = Eigen::VectorXcd::Zero(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index d = 0; d < m; ++d) {
    const Vec3& xhat = grid.directions[static_cast<std::size_t>(d)];
    Complex acc{};
    for (std::size_t j = 0; j < mesh.panels.size(); ++j) {
      const Complex c = density.coefficients[static_cast<Eigen::Index>(j)];
      if (c == Complex{}) continue;
      const Panel& pj = mesh.panels[j];
      Complex kernel;
      if (bc == BoundaryCondition::dirichlet) {
        kernel = rdot(pj.normal, farfield_kernel_grad_y(kern, xhat, pj.centroid)) -
                 kI * density.coupling * farfield_kernel(kern, xhat, pj.centroid);
      } else {
        kernel = farfield_kernel(kern, xhat, pj.centroid);
      }
      acc += c * pj.area * kernel;
    }
    ff.values[d] = acc;
  }
  return ff;
}

void write_farfield_csv(std::ostream& out, const FarFieldPattern& ff, const std::string& extra_header) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "# k=%.17g bc=%s mesh_h=%.17g scene_hash=%s", ff.k, to_string(ff.bc).c_str(),
                ff.mesh_h, ff.scene_hash.c_str());
  out << buf;
  if (!extra_header.empty()) out << ' ' << extra_header;
  out << "\ntheta,phi,re,im\n";
  for (std::size_t i = 0; i < ff.grid.size(); ++i) {
    const Complex v = ff.values[static_cast<Eigen::Index>(i)];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", ff.grid.theta[i], ff.grid.phi[i], v.real(), v.imag());
    out << buf;
  }
}

void write_density_csv(std::ostream& out, const LayerDensity& density) {
  out << "panel_id,re,im\n";
  char buf[96];
  for (Eigen::Index i = 0; i < density.coefficients.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", static_cast<long>(i), density.coefficients[i].real(),
                  density.coefficients[i].imag());
    out << buf;
  }
}

}  // namespace roughscat
