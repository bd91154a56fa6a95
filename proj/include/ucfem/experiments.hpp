/* Copyright 2026 The ucfem Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#ifndef UCFEM_EXPERIMENTS_HPP
#define UCFEM_EXPERIMENTS_HPP

#include "ucfem/common.hpp"
#include "ucfem/condition.hpp"
#include "ucfem/fe_space.hpp"
#include "ucfem/forms.hpp"
#include "ucfem/mesh.hpp"
#include "ucfem/region.hpp"
#include "ucfem/saddle.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ucfem {

/// Analytic solution with gradient and Laplacian.
struct ExactSolution {
  ScalarField value;
  VectorField gradient;
  ScalarField laplacian;

  SmoothFunction smooth() const { return {value, gradient}; }
};

/// u(x, y) = 30 x (1 - x) y (1 - y), unit L2 norm on the unit square.
inline ExactSolution bubble_solution() {
  return {
      [](const Point& p) { return 30.0 * p.x() * (1.0 - p.x()) * p.y() * (1.0 - p.y()); },
      [](const Point& p) {
        return Point(30.0 * (1.0 - 2.0 * p.x()) * p.y() * (1.0 - p.y()),
                     30.0 * p.x() * (1.0 - p.x()) * (1.0 - 2.0 * p.y()));
      },
      [](const Point& p) { return -60.0 * (p.x() * (1.0 - p.x()) + p.y() * (1.0 - p.y())); },
  };
}

/// f = -mu Lap(u) + beta . grad(u).
inline ScalarField derive_source(const ExactSolution& u, double mu, VectorField beta) {
  return [u, mu, beta = std::move(beta)](const Point& p) {
    return -mu * u.laplacian(p) + beta(p).dot(u.gradient(p));
  };
}

inline VectorField beta_constant() {
  return [](const Point&) { return Point(1.0, 0.0); };
}

/// 100 (x + y, y - x): divergence 200, sup-norm 200 on the unit square.
inline VectorField beta_rotating() {
  return [](const Point& p) { return Point(100.0 * (p.x() + p.y()), 100.0 * (p.y() - p.x())); };
}

/// Uniform nodal perturbation with amplitude scale * h^exponent.
struct NoiseModel {
  double exponent = 1.0;
  std::uint64_t seed = 0;
  double scale = 1.0;

  double amplitude(double h) const { return scale * std::pow(h, exponent); }
};

/// Adds independent uniform samples in [-A, A], A = noise.amplitude(h), to
/// the coefficients at nodes inside omega. The stream depends only on the
/// seed and the mesh resolution.
inline FeFunction apply_noise(const FeFunction& data, const NoiseModel& noise,
                              const Region& omega, double h) {
  FeFunction out = data;
  const Mesh& mesh = data.mesh();
  std::seed_seq seq{static_cast<std::uint32_t>(noise.seed),
                    static_cast<std::uint32_t>(noise.seed >> 32),
                    static_cast<std::uint32_t>(mesh.cells_per_side())};
  std::mt19937_64 gen(seq);
  const double amp = noise.amplitude(h);
  for (Eigen::Index i = 0; i < out.coefficients().size(); ++i) {
    const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
    if (!omega.contains(mesh.node(static_cast<int>(i)))) continue;
    out.coefficients()[i] += amp * (2.0 * unit - 1.0);
  }
  return out;
}

struct CaseDefinition {
  std::string name;
  ProblemSpec spec;
  ExactSolution exact;
  std::vector<int> ladder;
  std::optional<NoiseModel> noise;
};

inline Region omega_ex1() { return Region({Box{0.2, 0.45, 0.2, 0.45}}); }
inline Region target_ex1() { return Region({Box{0.2, 0.45, 0.55, 0.8}}); }
inline Region omega_ex2() {
  return Region({Box{0.0, 0.125, 0.4, 0.6}, Box{0.875, 1.0, 0.4, 0.6}});
}
inline Region target_ex2() { return Region({Box{0.25, 0.75, 0.4, 0.6}}); }
inline Region omega_ex3() {
  return Region({Box{0.0, 1.0, 0.0, 1.0}}, {Box{0.0, 0.875, 0.125, 0.875}});
}
inline Region target_ex3() {
  return Region({Box{0.0, 1.0, 0.0, 1.0}}, {Box{0.0, 0.125, 0.125, 0.875}});
}

inline CaseDefinition make_case(const std::string& geometry, bool rotating_beta) {
  CaseDefinition c;
  c.name = geometry + (rotating_beta ? "_beta_nc" : "_beta_c");
  c.exact = bubble_solution();
  c.ladder = {8, 16, 32, 64, 128};
  auto& s = c.spec;
  s.mu = 1.0;
  s.gamma = 1e-5;
  s.gamma_star = 1.0;
  s.boundary_factor = 50.0;
  if (rotating_beta) {
    s.beta = beta_rotating();
    s.beta_sup = 200.0;
  } else {
    s.beta = beta_constant();
  }
  s.f = derive_source(c.exact, s.mu, s.beta);
  if (geometry == "ex1") {
    s.omega = omega_ex1();
    s.target = target_ex1();
  } else if (geometry == "ex2") {
    s.omega = omega_ex2();
    s.target = target_ex2();
  } else if (geometry == "ex3") {
    s.omega = omega_ex3();
    s.target = target_ex3();
  } else {
    throw ConfigError("unknown geometry '" + geometry + "' (expected ex1, ex2 or ex3)");
  }
  return c;
}

/// Six noiseless cases {ex1, ex2, ex3} x {beta_c, beta_nc}, then the two
/// noisy variants of ex1 x beta_c.
inline std::vector<CaseDefinition> builtin_cases() {
  std::vector<CaseDefinition> cases;
  for (const char* g : {"ex1", "ex2", "ex3"}) {
    cases.push_back(make_case(g, false));
    cases.push_back(make_case(g, true));
  }
  for (const auto& [suffix, exponent] : {std::pair{"_noise_sqrt_h", 0.5}, std::pair{"_noise_h", 1.0}}) {
    CaseDefinition c = make_case("ex1", false);
    c.name += suffix;
    c.noise = NoiseModel{exponent, 20190401, 1.0};
    cases.push_back(std::move(c));
  }
  return cases;
}

inline CaseDefinition find_case(const std::string& name) {
  for (auto& c : builtin_cases()) {
    if (c.name == name) return c;
  }
  std::string known;
  for (const auto& c : builtin_cases()) known += (known.empty() ? "" : ", ") + c.name;
  throw ConfigError("unknown case '" + name + "'; known cases: " + known);
}

struct RateFit {
  double slope = 0.0;
  std::vector<double> steps;
};

/// Least-squares slope of log(value) against log(h), plus per-step slopes.
inline RateFit estimate_rate(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) throw ConfigError("estimate_rate: need at least two rows");
  for (const auto& [h, v] : pairs) {
    if (!(h > 0.0) || !(v > 0.0)) throw ConfigError("estimate_rate: values must be positive");
  }
  const auto n = static_cast<double>(pairs.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [h, v] : pairs) {
    mx += std::log(h);
    my += std::log(v);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [h, v] : pairs) {
    sxy += (std::log(h) - mx) * (std::log(v) - my);
    sxx += (std::log(h) - mx) * (std::log(h) - mx);
  }
  if (!(sxx > 0.0)) throw ConfigError("estimate_rate: mesh sizes must differ");
  RateFit fit;
  fit.slope = sxy / sxx;
  for (std::size_t k = 0; k + 1 < pairs.size(); ++k) {
    fit.steps.push_back(std::log(pairs[k].second / pairs[k + 1].second) /
                        std::log(pairs[k].first / pairs[k + 1].first));
  }
  return fit;
}

enum class ProjectionKind { l2, nodal };
enum class H1Kind { full, semi };
enum class CondMode { none, exact, estimate };

struct RunOptions {
  ProjectionKind projection = ProjectionKind::l2;
  H1Kind h1 = H1Kind::full;
  CondMode cond = CondMode::none;
  ConditionOptions cond_options;
};

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double err_l2_b = std::numeric_limits<double>::quiet_NaN();
  double err_h1_b = std::numeric_limits<double>::quiet_NaN();
  double s_norm = std::numeric_limits<double>::quiet_NaN();
  double sstar_norm = std::numeric_limits<double>::quiet_NaN();
  double cond = std::numeric_limits<double>::quiet_NaN();
  bool cond_converged = true;
  double peclet = 0.0;
  double residual = 0.0;
  bool ok = false;
  std::string error;

  /// ||(e_h, z_h)||_s = (s(e_h, e_h) + s_*(z_h, z_h))^(1/2).
  double regularization_norm() const { return std::hypot(s_norm, sstar_norm); }
};

struct ConvergenceTable {
  std::string case_name;
  std::vector<ConvergenceRow> rows;

  static constexpr std::array<const char*, 5> rate_columns{"err_l2_B", "err_h1_B", "s_norm",
                                                           "sstar_norm", "cond"};

  /// Fit over successful rows with a finite positive value in the column.
  std::optional<RateFit> rate(const std::string& column) const {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) {
      if (!r.ok) continue;
      const double v = column == "err_l2_B"     ? r.err_l2_b
                       : column == "err_h1_B"   ? r.err_h1_b
                       : column == "s_norm"     ? r.s_norm
                       : column == "sstar_norm" ? r.sstar_norm
                       : column == "cond"       ? r.cond
                       : column == "reg_norm"   ? r.regularization_norm()
                                                : throw ConfigError("unknown column " + column);
      if (std::isfinite(v) && v > 0.0) pts.emplace_back(r.h, v);
    }
    if (pts.size() < 2) return std::nullopt;
    return estimate_rate(pts);
  }

  bool partial() const {
    for (const auto& r : rows) {
      if (!r.ok) return true;
    }
    return false;
  }
};

/// Everything produced by one solve of a case on one mesh.
struct MeshRun {
  std::shared_ptr<const Mesh> mesh;
  AssembledForms forms;
  FeFunction data;
  Solution solution;
  ConvergenceRow row;
};

inline MeshRun run_mesh(const CaseDefinition& c, int cells_per_side, const RunOptions& opts = {}) {
  MeshRun run;
  run.mesh = std::make_shared<const Mesh>(build_unit_square_mesh(cells_per_side));
  const Mesh& mesh = *run.mesh;
  const double h = mesh_size(mesh);
  run.row.n = cells_per_side;
  run.row.h = h;

  run.forms = assemble_forms(c.spec, mesh);
  run.row.peclet = run.forms.beta_norm * h / c.spec.mu;

  run.data = interpolate(c.exact.value, mesh);
  if (c.noise) run.data = apply_noise(run.data, *c.noise, c.spec.omega, h);

  const Loads loads{assemble_load(c.spec.f, mesh, triangle_rule(c.spec.quad_degree)),
                    run.forms.s_omega * run.data.coefficients()};
  const SaddleSystem system = build_system(run.forms, loads);
  run.solution = solve(system);
  run.row.residual = run.solution.diagnostics.residual;

  const SmoothFunction exact = c.exact.smooth();
  const Norms err = error_norms(exact, run.solution.u, c.spec.target, c.spec.quad_degree);
  const Norms ref = norms(exact, mesh, c.spec.target, c.spec.quad_degree);
  run.row.err_l2_b = err.l2 / ref.l2;
  run.row.err_h1_b = opts.h1 == H1Kind::full ? err.h1 / ref.h1 : err.h1_semi / ref.h1_semi;

  const FeFunction pu = opts.projection == ProjectionKind::l2
                            ? l2_project(c.exact.value, mesh, c.spec.quad_degree)
                            : interpolate(c.exact.value, mesh);
  const Vector e = pu.coefficients() - run.solution.u.coefficients();
  const Vector& z = run.solution.z.coefficients();
  run.row.s_norm = std::sqrt(std::max(0.0, e.dot(run.forms.s() * e)));
  run.row.sstar_norm = std::sqrt(std::max(0.0, z.dot(run.forms.s_star * z)));

  if (opts.cond != CondMode::none) {
    const auto k = condition_number(
        system, opts.cond == CondMode::exact ? ConditionMode::exact : ConditionMode::estimated,
        opts.cond_options);
    run.row.cond = k.value;
    run.row.cond_converged = k.converged;
  }
  run.row.ok = true;
  return run;
}

/// Runs the mesh ladder. Failures are recorded per row and do not stop the
/// remaining meshes.
inline ConvergenceTable run_case(const CaseDefinition& c, const RunOptions& opts = {}) {
  c.spec.validate();
  ConvergenceTable table;
  table.case_name = c.name;
  for (int n : c.ladder) {
    try {
      table.rows.push_back(run_mesh(c, n, opts).row);
    } catch (const std::exception& ex) {
      ConvergenceRow row;
      row.n = n;
      row.h = 1.0 / (n + 1.0);
      row.error = ex.what();
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace ucfem

#endif  // UCFEM_EXPERIMENTS_HPP
