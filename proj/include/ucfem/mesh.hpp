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

#ifndef UCFEM_MESH_HPP
#define UCFEM_MESH_HPP

#include "ucfem/common.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace ucfem {

/// Interior edge shared by two triangles. The normal points from the
/// "minus" triangle (left_tri) into the "plus" triangle (right_tri).
struct Face {
  std::array<int, 2> endpoints{};
  Point normal = Point::Zero();
  double length = 0.0;
  int left_tri = -1;
  int right_tri = -1;
};

/// Edge on the boundary of the unit square, owned by exactly one triangle.
struct BoundaryEdge {
  std::array<int, 2> endpoints{};
  Point normal = Point::Zero();  // outward
  double length = 0.0;
  int tri = -1;
};

/// Structured triangulation of the unit square with alternating diagonals.
///
/// Node (i, j) sits at (i/N, j/N) with index j*(N+1)+i. Cell (i, j) is split
/// along the lower-left to upper-right diagonal when i+j is even and along
/// the other diagonal when i+j is odd. Triangles are stored counterclockwise,
/// two per cell, cell-major in the same (j, i) order as the nodes.
class Mesh {
 public:
  Mesh() = default;

  int cells_per_side() const { return n_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Face>& interior_faces() const { return faces_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

  const Point& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::array<int, 3>& triangle(int t) const {
    return triangles_[static_cast<std::size_t>(t)];
  }

  std::array<Point, 3> vertices(int t) const {
    const auto& tri = triangle(t);
    return {node(tri[0]), node(tri[1]), node(tri[2])};
  }

  double signed_area(int t) const {
    const auto v = vertices(t);
    const Point e1 = v[1] - v[0];
    const Point e2 = v[2] - v[0];
    return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
  }

  /// Index of a triangle containing p (closed), or nullopt outside [0,1]^2.
  std::optional<int> locate(const Point& p) const {
    constexpr double tol = 1e-12;
    if (p.x() < -tol || p.x() > 1.0 + tol || p.y() < -tol || p.y() > 1.0 + tol) {
      return std::nullopt;
    }
    const double n = static_cast<double>(n_);
    const int i = std::clamp(static_cast<int>(std::floor(p.x() * n)), 0, n_ - 1);
    const int j = std::clamp(static_cast<int>(std::floor(p.y() * n)), 0, n_ - 1);
    const double lx = p.x() * n - i;
    const double ly = p.y() * n - j;
    const int base = 2 * (j * n_ + i);
    if ((i + j) % 2 == 0) {
      // diagonal y = x: first triangle lies below it
      return lx >= ly ? base : base + 1;
    }
    // diagonal x + y = 1: first triangle lies below it
    return lx + ly <= 1.0 ? base : base + 1;
  }

  /// Barycentric coordinates of p with respect to triangle t.
  Eigen::Vector3d barycentric(int t, const Point& p) const {
    const auto v = vertices(t);
    const double det = 2.0 * signed_area(t);
    const double l1 = ((p - v[0]).x() * (v[2] - v[0]).y() - (p - v[0]).y() * (v[2] - v[0]).x()) / det;
    const double l2 = ((v[1] - v[0]).x() * (p - v[0]).y() - (v[1] - v[0]).y() * (p - v[0]).x()) / det;
    return {1.0 - l1 - l2, l1, l2};
  }

  friend Mesh build_unit_square_mesh(int cells_per_side);

 private:
  int n_ = 0;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Face> faces_;
  std::vector<BoundaryEdge> boundary_;
};

inline Mesh build_unit_square_mesh(int cells_per_side) {
  if (cells_per_side < 1) {
    throw ConfigError("build_unit_square_mesh: cells per side must be >= 1, got " +
                      std::to_string(cells_per_side));
  }
  const int n = cells_per_side;
  Mesh mesh;
  mesh.n_ = n;
  const auto nn = static_cast<std::size_t>(n + 1);
  mesh.nodes_.reserve(nn * nn);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.nodes_.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }

  mesh.triangles_.reserve(2 * static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v0 = j * (n + 1) + i;
      const int v1 = v0 + 1;
      const int v2 = v0 + (n + 1);
      const int v3 = v2 + 1;
      if ((i + j) % 2 == 0) {
        mesh.triangles_.push_back({v0, v1, v3});
        mesh.triangles_.push_back({v0, v3, v2});
      } else {
        mesh.triangles_.push_back({v0, v1, v2});
        mesh.triangles_.push_back({v1, v3, v2});
      }
    }
  }

  // Edge -> owning triangles. Keys are sorted node pairs.
  std::map<std::pair<int, int>, std::vector<int>> owners;
  for (int t = 0; t < static_cast<int>(mesh.triangles_.size()); ++t) {
    const auto& tri = mesh.triangles_[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[static_cast<std::size_t>(k)];
      const int b = tri[static_cast<std::size_t>((k + 1) % 3)];
      owners[{std::min(a, b), std::max(a, b)}].push_back(t);
    }
  }

  for (const auto& [edge, tris] : owners) {
    const Point pa = mesh.node(edge.first);
    const Point pb = mesh.node(edge.second);
    const Point dir = pb - pa;
    const double len = dir.norm();
    Point normal(dir.y() / len, -dir.x() / len);

    // Orient the normal away from the first owner.
    const auto& tri = mesh.triangle(tris[0]);
    Point centroid = Point::Zero();
    for (int v : tri) centroid += mesh.node(v);
    centroid /= 3.0;
    if (normal.dot(centroid - pa) > 0.0) normal = -normal;

    if (tris.size() == 2) {
      mesh.faces_.push_back(Face{{edge.first, edge.second}, normal, len, tris[0], tris[1]});
    } else {
      mesh.boundary_.push_back(BoundaryEdge{{edge.first, edge.second}, normal, len, tris[0]});
    }
  }
  return mesh;
}

/// Global mesh size: inverse square root of the node count.
inline double mesh_size(const Mesh& mesh) {
  return 1.0 / std::sqrt(static_cast<double>(mesh.num_nodes()));
}

}  // namespace ucfem

#endif  // UCFEM_MESH_HPP
