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

#ifndef UCFEM_FE_SPACE_HPP
#define UCFEM_FE_SPACE_HPP

#include "ucfem/common.hpp"
#include "ucfem/mesh.hpp"
#include "ucfem/quadrature.hpp"
#include "ucfem/region.hpp"

#include <Eigen/SparseCholesky>

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace ucfem {

/// Gradients of the three P1 hat functions on a triangle.
inline std::array<Point, 3> p1_gradients(const std::array<Point, 3>& v) {
  const Point e1 = v[1] - v[0];
  const Point e2 = v[2] - v[0];
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  const double scale = std::max(e1.squaredNorm(), e2.squaredNorm());
  if (!(std::abs(det) > 1e-14 * scale)) {
    throw ConfigError("p1_gradients: degenerate triangle");
  }
  const Point g1(e2.y() / det, -e2.x() / det);
  const Point g2(-e1.y() / det, e1.x() / det);
  return {-(g1 + g2), g1, g2};
}

/// Member of the continuous piecewise-linear space on a mesh.
///
/// Holds a non-owning pointer to the mesh; the mesh must outlive it.
class FeFunction {
 public:
  FeFunction() = default;
  FeFunction(const Mesh& mesh, Vector coefficients)
      : mesh_(&mesh), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != static_cast<Eigen::Index>(mesh.num_nodes())) {
      throw ConfigError("FeFunction: coefficient count " +
                        std::to_string(coefficients_.size()) + " != node count " +
                        std::to_string(mesh.num_nodes()));
    }
  }
  static FeFunction zero(const Mesh& mesh) {
    return FeFunction(mesh, Vector::Zero(static_cast<Eigen::Index>(mesh.num_nodes())));
  }

  const Mesh& mesh() const { return *mesh_; }
  const Vector& coefficients() const { return coefficients_; }
  Vector& coefficients() { return coefficients_; }

  double value_in(int t, const Eigen::Vector3d& bary) const {
    const auto& tri = mesh_->triangle(t);
    return bary[0] * coefficients_[tri[0]] + bary[1] * coefficients_[tri[1]] +
           bary[2] * coefficients_[tri[2]];
  }

  Point gradient_in(int t) const {
    const auto& tri = mesh_->triangle(t);
    const auto g = p1_gradients(mesh_->vertices(t));
    return coefficients_[tri[0]] * g[0] + coefficients_[tri[1]] * g[1] +
           coefficients_[tri[2]] * g[2];
  }

  /// Point evaluation; throws outside the unit square.
  double operator()(const Point& p) const {
    const int t = locate_or_throw(p);
    return value_in(t, mesh_->barycentric(t, p));
  }

  Point gradient(const Point& p) const { return gradient_in(locate_or_throw(p)); }

  SmoothFunction as_function() const {
    return {[this](const Point& p) { return (*this)(p); },
            [this](const Point& p) { return gradient(p); }};
  }

 private:
  int locate_or_throw(const Point& p) const {
    const auto t = mesh_->locate(p);
    if (!t) throw ConfigError("FeFunction: evaluation point outside the mesh");
    return *t;
  }

  const Mesh* mesh_ = nullptr;
  Vector coefficients_;
};

/// Nodal interpolant.
inline FeFunction interpolate(const ScalarField& u, const Mesh& mesh) {
  Vector c(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = u(mesh.node(static_cast<int>(i)));
  return FeFunction(mesh, std::move(c));
}

/// Physical location of a barycentric point on triangle t.
inline Point map_to_physical(const std::array<Point, 3>& v, const Eigen::Vector3d& bary) {
  return bary[0] * v[0] + bary[1] * v[1] + bary[2] * v[2];
}

/// Mass matrix (w phi_j, phi_i) restricted to a region by quadrature-point
/// membership. Also returns the measured region area.
inline std::pair<SparseMatrix, double> assemble_region_mass(const Mesh& mesh, const Region& region,
                                                            const TriangleRule& rule,
                                                            double weight = 1.0) {
  std::vector<Triplet> trips;
  trips.reserve(9 * mesh.num_triangles());
  double area_sum = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto v = mesh.vertices(t);
    const double area = mesh.signed_area(t);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    bool touched = false;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& b = rule.points[q];
      if (!region.contains(map_to_physical(v, b))) continue;
      const double w = rule.weights[q] * area;
      local += w * b * b.transpose();
      area_sum += w;
      touched = true;
    }
    if (!touched) continue;
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 3; ++c) trips.emplace_back(tri[a], tri[c], weight * local(a, c));
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return {std::move(m), area_sum};
}

inline SparseMatrix assemble_mass(const Mesh& mesh, const TriangleRule& rule) {
  return assemble_region_mass(mesh, Region::whole_domain(), rule).first;
}

/// Load vector (u, phi_i) over the whole domain.
inline Vector assemble_load(const ScalarField& u, const Mesh& mesh, const TriangleRule& rule) {
  Vector b = Vector::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto v = mesh.vertices(t);
    const double area = mesh.signed_area(t);
    const auto& tri = mesh.triangle(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& bc = rule.points[q];
      const double fw = u(map_to_physical(v, bc)) * rule.weights[q] * area;
      for (int a = 0; a < 3; ++a) b[tri[a]] += fw * bc[a];
    }
  }
  return b;
}

/// L2 projection onto the P1 space through the consistent mass matrix.
inline FeFunction l2_project(const ScalarField& u, const Mesh& mesh, int quad_degree = 4) {
  const auto rule = triangle_rule(quad_degree);
  const SparseMatrix m = assemble_mass(mesh, rule);
  const Vector b = assemble_load(u, mesh, rule);
  Eigen::SimplicialLDLT<SparseMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("l2_project: mass matrix factorization failed");
  }
  Vector c = solver.solve(b);
  const double bnorm = b.norm();
  if (bnorm > 0.0 && (m * c - b).norm() > 1e-12 * bnorm) {
    throw NumericalError("l2_project: mass solve residual above 1e-12");
  }
  return FeFunction(mesh, std::move(c));
}

struct Norms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
};

/// Accumulates L2 and H1 norms of a field over a region. The evaluator is
/// called as eval(triangle, barycentric, physical point) and returns
/// (value, gradient).
template <class Evaluator>
Norms region_norms(const Mesh& mesh, const Region& region, const TriangleRule& rule,
                   Evaluator&& eval) {
  double l2 = 0.0;
  double semi = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto v = mesh.vertices(t);
    const double area = mesh.signed_area(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& b = rule.points[q];
      const Point x = map_to_physical(v, b);
      if (!region.contains(x)) continue;
      const auto [val, grad] = eval(t, b, x);
      const double w = rule.weights[q] * area;
      l2 += w * val * val;
      semi += w * grad.squaredNorm();
    }
  }
  return {std::sqrt(l2), std::sqrt(semi), std::sqrt(l2 + semi)};
}

inline Norms norms(const FeFunction& v, const Region& region, int quad_degree = 4) {
  const Mesh& mesh = v.mesh();
  return region_norms(mesh, region, triangle_rule(quad_degree),
                      [&](int t, const Eigen::Vector3d& b, const Point&) {
                        return std::pair{v.value_in(t, b), v.gradient_in(t)};
                      });
}

inline Norms norms(const SmoothFunction& v, const Mesh& mesh, const Region& region,
                   int quad_degree = 4) {
  return region_norms(mesh, region, triangle_rule(quad_degree),
                      [&](int, const Eigen::Vector3d&, const Point& x) {
                        return std::pair{v.value(x), v.gradient(x)};
                      });
}

/// Norms of exact - approx, with the gradient of approx taken elementwise.
inline Norms error_norms(const SmoothFunction& exact, const FeFunction& approx,
                         const Region& region, int quad_degree = 4) {
  return region_norms(approx.mesh(), region, triangle_rule(quad_degree),
                      [&](int t, const Eigen::Vector3d& b, const Point& x) {
                        return std::pair{exact.value(x) - approx.value_in(t, b),
                                         Point(exact.gradient(x) - approx.gradient_in(t))};
                      });
}

/// Quadrature-measured area of a region.
inline double region_measure(const Mesh& mesh, const Region& region, int quad_degree = 4) {
  const auto rule = triangle_rule(quad_degree);
  double area_sum = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto v = mesh.vertices(t);
    const double area = mesh.signed_area(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      if (region.contains(map_to_physical(v, rule.points[q]))) area_sum += rule.weights[q] * area;
    }
  }
  return area_sum;
}

}  // namespace ucfem

#endif  // UCFEM_FE_SPACE_HPP
