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

#ifndef UCFEM_FORMS_HPP
#define UCFEM_FORMS_HPP

#include "ucfem/common.hpp"
#include "ucfem/fe_space.hpp"
#include "ucfem/mesh.hpp"
#include "ucfem/quadrature.hpp"
#include "ucfem/region.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ucfem {

/// Convection-diffusion data-assimilation problem and its stabilization
/// parameters.
struct ProblemSpec {
  double mu = 1.0;
  VectorField beta = [](const Point&) { return Point(Point::Zero()); };
  /// Sup-norm of beta. Sampled over quadrature points when unset.
  std::optional<double> beta_sup;
  ScalarField f = [](const Point&) { return 0.0; };
  Region omega = Region::whole_domain();
  Region target = Region::whole_domain();
  double gamma = 1e-5;
  double gamma_star = 1.0;
  double boundary_factor = 50.0;
  int quad_degree = 4;

  void validate() const {
    if (!(mu > 0.0)) throw ConfigError("ProblemSpec: mu must be positive");
    if (!(gamma > 0.0)) throw ConfigError("ProblemSpec: gamma must be positive");
    if (!(gamma_star > 0.0)) throw ConfigError("ProblemSpec: gamma_star must be positive");
    if (!(boundary_factor >= 1.0)) throw ConfigError("ProblemSpec: boundary_factor must be >= 1");
    if (beta_sup && !(*beta_sup >= 0.0)) throw ConfigError("ProblemSpec: beta_sup must be >= 0");
    if (quad_degree < 1) throw ConfigError("ProblemSpec: quadrature degree must be >= 1");
  }
};

/// |beta|: the override when present, else the largest Euclidean magnitude of
/// beta over all quadrature points of the mesh.
inline double beta_norm(const ProblemSpec& spec, const Mesh& mesh) {
  if (spec.beta_sup) return *spec.beta_sup;
  const auto rule = triangle_rule(spec.quad_degree);
  double sup = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto v = mesh.vertices(t);
    for (const auto& b : rule.points) sup = std::max(sup, spec.beta(map_to_physical(v, b)).norm());
    for (const auto& p : v) sup = std::max(sup, spec.beta(p).norm());
  }
  return sup;
}

inline double peclet(const ProblemSpec& spec, const Mesh& mesh, double h) {
  return beta_norm(spec, mesh) * h / spec.mu;
}

namespace detail {

inline SparseMatrix from_triplets(const Mesh& mesh, const std::vector<Triplet>& trips) {
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace detail

/// A[i][j] = a_h(phi_j, phi_i): convection, diffusion, and the boundary
/// flux term with the one-sided gradient trace.
inline SparseMatrix assemble_a(const ProblemSpec& spec, const Mesh& mesh) {
  spec.validate();
  const auto rule = triangle_rule(spec.quad_degree);
  const auto erule = edge_rule(spec.quad_degree);
  std::vector<Triplet> trips;
  trips.reserve(9 * mesh.num_triangles() + 4 * mesh.boundary_edges().size() * 3);
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto v = mesh.vertices(t);
    const auto g = p1_gradients(v);
    const double area = mesh.signed_area(t);
    Eigen::Matrix3d local;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) local(a, b) = spec.mu * area * g[b].dot(g[a]);
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& bc = rule.points[q];
      const Point beta = spec.beta(map_to_physical(v, bc));
      const double w = rule.weights[q] * area;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) local(a, b) += w * beta.dot(g[b]) * bc[a];
      }
    }
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) trips.emplace_back(tri[a], tri[b], local(a, b));
    }
  }
  for (const auto& e : mesh.boundary_edges()) {
    const auto& tri = mesh.triangle(e.tri);
    const auto g = p1_gradients(mesh.vertices(e.tri));
    // integral of the endpoint hat functions along the edge
    std::array<double, 2> hat_integral{0.0, 0.0};
    for (std::size_t q = 0; q < erule.size(); ++q) {
      hat_integral[0] += erule.weights[q] * (1.0 - erule.points[q]) * e.length;
      hat_integral[1] += erule.weights[q] * erule.points[q] * e.length;
    }
    for (int k = 0; k < 2; ++k) {
      for (int b = 0; b < 3; ++b) {
        trips.emplace_back(e.endpoints[k], tri[b], -spec.mu * g[b].dot(e.normal) * hat_integral[k]);
      }
    }
  }
  return detail::from_triplets(mesh, trips);
}

/// Weighted mass matrix ((mu + |beta| h) v, w) over the data region.
/// A zero-measure region yields a zero matrix and a warning.
inline SparseMatrix assemble_s_omega(const ProblemSpec& spec, const Mesh& mesh, double h,
                                     std::vector<std::string>* warnings = nullptr) {
  spec.validate();
  const double weight = spec.mu + beta_norm(spec, mesh) * h;
  auto [m, measured] = assemble_region_mass(mesh, spec.omega, triangle_rule(spec.quad_degree), weight);
  if (measured <= 0.0 && warnings) {
    warnings->push_back("data region has zero measure on this mesh; s_omega is zero");
  }
  return m;
}

/// Normal-gradient jump penalty sum_F weight |F| [grad v . n][grad w . n]
/// over the given faces.
inline SparseMatrix assemble_jump_form(const Mesh& mesh, std::span<const Face> faces,
                                       double weight) {
  std::vector<Triplet> trips;
  trips.reserve(16 * faces.size());
  for (const auto& f : faces) {
    std::array<int, 6> idx{};
    std::array<double, 6> coef{};
    const auto& tl = mesh.triangle(f.left_tri);
    const auto& tr = mesh.triangle(f.right_tri);
    const auto gl = p1_gradients(mesh.vertices(f.left_tri));
    const auto gr = p1_gradients(mesh.vertices(f.right_tri));
    for (int k = 0; k < 3; ++k) {
      idx[k] = tl[k];
      coef[k] = gl[k].dot(f.normal);
      idx[3 + k] = tr[k];
      coef[3 + k] = -gr[k].dot(f.normal);
    }
    const double w = weight * f.length;
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) trips.emplace_back(idx[a], idx[b], w * coef[a] * coef[b]);
    }
  }
  return detail::from_triplets(mesh, trips);
}

/// Interior-face gradient-jump stabilization
/// gamma h (mu + |beta| h) sum_F int_F [grad v . n][grad w . n].
inline SparseMatrix assemble_s_Omega(const ProblemSpec& spec, const Mesh& mesh, double h) {
  spec.validate();
  const double weight = spec.gamma * h * (spec.mu + beta_norm(spec, mesh) * h);
  return assemble_jump_form(mesh, mesh.interior_faces(), weight);
}

/// (grad v, grad w) over the whole domain.
inline SparseMatrix assemble_stiffness(const Mesh& mesh) {
  std::vector<Triplet> trips;
  trips.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto g = p1_gradients(mesh.vertices(t));
    const double area = mesh.signed_area(t);
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) trips.emplace_back(tri[a], tri[b], area * g[a].dot(g[b]));
    }
  }
  return detail::from_triplets(mesh, trips);
}

/// <v, w> on the boundary of the unit square.
inline SparseMatrix assemble_boundary_mass(const Mesh& mesh, const EdgeRule& rule) {
  std::vector<Triplet> trips;
  trips.reserve(4 * mesh.boundary_edges().size());
  for (const auto& e : mesh.boundary_edges()) {
    Eigen::Matrix2d local = Eigen::Matrix2d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d phi(1.0 - rule.points[q], rule.points[q]);
      local += rule.weights[q] * e.length * phi * phi.transpose();
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) trips.emplace_back(e.endpoints[a], e.endpoints[b], local(a, b));
    }
  }
  return detail::from_triplets(mesh, trips);
}

/// Dual stabilization
/// gamma_* ( bf <(mu/h + |beta|) v, w>_boundary + mu (grad v, grad w) + s_Omega(v, w) ),
/// where bf is the boundary factor and s_Omega carries its own gamma.
inline SparseMatrix assemble_s_star(const ProblemSpec& spec, const Mesh& mesh, double h) {
  spec.validate();
  const double bnorm = beta_norm(spec, mesh);
  const SparseMatrix boundary = assemble_boundary_mass(mesh, edge_rule(spec.quad_degree));
  const SparseMatrix stiff = assemble_stiffness(mesh);
  const SparseMatrix jump = assemble_s_Omega(spec, mesh, h);
  SparseMatrix s = spec.boundary_factor * (spec.mu / h + bnorm) * boundary + spec.mu * stiff + jump;
  s *= spec.gamma_star;
  return s;
}

struct Loads {
  Vector source;  // (f, phi_i)
  Vector data;    // s_omega(U, phi_i)
};

/// Right-hand sides of the discrete system. The data function is used
/// through its P1 representation; its values outside omega are irrelevant.
inline Loads assemble_loads(const ProblemSpec& spec, const Mesh& mesh, double h,
                            const FeFunction& data) {
  const SparseMatrix s_omega = assemble_s_omega(spec, mesh, h);
  return {assemble_load(spec.f, mesh, triangle_rule(spec.quad_degree)),
          s_omega * data.coefficients()};
}

/// Vector r with r[i] = a_h(u, phi_i) for a smooth u, by quadrature.
inline Vector apply_a(const ProblemSpec& spec, const Mesh& mesh, const SmoothFunction& u) {
  const auto rule = triangle_rule(spec.quad_degree);
  const auto erule = edge_rule(spec.quad_degree);
  Vector r = Vector::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto v = mesh.vertices(t);
    const auto g = p1_gradients(v);
    const double area = mesh.signed_area(t);
    const auto& tri = mesh.triangle(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& bc = rule.points[q];
      const Point x = map_to_physical(v, bc);
      const Point du = u.gradient(x);
      const double w = rule.weights[q] * area;
      const double conv = spec.beta(x).dot(du);
      for (int a = 0; a < 3; ++a) r[tri[a]] += w * (conv * bc[a] + spec.mu * du.dot(g[a]));
    }
  }
  for (const auto& e : mesh.boundary_edges()) {
    const Point pa = mesh.node(e.endpoints[0]);
    const Point pb = mesh.node(e.endpoints[1]);
    for (std::size_t q = 0; q < erule.size(); ++q) {
      const double s = erule.points[q];
      const Point x = (1.0 - s) * pa + s * pb;
      const double flux = spec.mu * u.gradient(x).dot(e.normal) * erule.weights[q] * e.length;
      r[e.endpoints[0]] -= flux * (1.0 - s);
      r[e.endpoints[1]] -= flux * s;
    }
  }
  return r;
}

}  // namespace ucfem

#endif  // UCFEM_FORMS_HPP
