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

#include "ucfem/fe_space.hpp"
#include "ucfem/io.hpp"
#include "ucfem/mesh.hpp"
#include "ucfem/region.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

namespace {

using ucfem::Box;
using ucfem::Point;
using ucfem::Region;

TEST(Mesh, CountsForSmallMeshes) {
  const auto m1 = ucfem::build_unit_square_mesh(1);
  EXPECT_EQ(m1.num_nodes(), 4u);
  EXPECT_EQ(m1.num_triangles(), 2u);
  EXPECT_EQ(m1.interior_faces().size(), 1u);

  const auto m2 = ucfem::build_unit_square_mesh(2);
  EXPECT_EQ(m2.num_nodes(), 9u);
  EXPECT_EQ(m2.num_triangles(), 8u);
  EXPECT_EQ(m2.interior_faces().size(), 8u);

  const auto m8 = ucfem::build_unit_square_mesh(8);
  EXPECT_EQ(m8.num_nodes(), 81u);
  EXPECT_EQ(m8.num_triangles(), 128u);
}

TEST(Mesh, RejectsZeroCells) {
  EXPECT_THROW(ucfem::build_unit_square_mesh(0), ucfem::ConfigError);
  EXPECT_THROW(ucfem::build_unit_square_mesh(-3), ucfem::ConfigError);
}

TEST(Mesh, MeshSizeIsInverseSqrtOfNodeCount) {
  EXPECT_DOUBLE_EQ(ucfem::mesh_size(ucfem::build_unit_square_mesh(8)), 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(ucfem::mesh_size(ucfem::build_unit_square_mesh(1)), 0.5);
  EXPECT_DOUBLE_EQ(ucfem::mesh_size(ucfem::build_unit_square_mesh(128)), 1.0 / 129.0);
}

TEST(Mesh, InvariantsHoldAcrossResolutions) {
  for (int n = 1; n <= 128; n = n < 8 ? n + 1 : 2 * n) {
    SCOPED_TRACE(n);
    const auto mesh = ucfem::build_unit_square_mesh(n);
    const auto nn = static_cast<std::size_t>(n);
    ASSERT_EQ(mesh.num_nodes(), (nn + 1) * (nn + 1));
    ASSERT_EQ(mesh.num_triangles(), 2 * nn * nn);
    ASSERT_EQ(mesh.interior_faces().size(), 3 * nn * nn - 2 * nn);
    ASSERT_EQ(mesh.boundary_edges().size(), 4 * nn);

    double total = 0.0;
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
      const double a = mesh.signed_area(t);
      ASSERT_NEAR(a, 1.0 / (2.0 * n * n), 1e-15);
      total += a;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);

    for (const auto& f : mesh.interior_faces()) {
      EXPECT_NEAR(f.normal.norm(), 1.0, 1e-14);
      const Point dir = mesh.node(f.endpoints[1]) - mesh.node(f.endpoints[0]);
      EXPECT_LE(std::abs(f.normal.dot(dir)), 1e-14);
      EXPECT_NE(f.left_tri, f.right_tri);
    }
  }
}

TEST(Mesh, EdgeOwnership) {
  const auto mesh = ucfem::build_unit_square_mesh(5);
  std::map<std::pair<int, int>, int> count;
  for (const auto& tri : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& f : mesh.interior_faces()) {
    EXPECT_EQ((count[{f.endpoints[0], f.endpoints[1]}]), 2);
  }
  for (const auto& e : mesh.boundary_edges()) {
    EXPECT_EQ((count[{e.endpoints[0], e.endpoints[1]}]), 1);
    // outward normal points away from the unit square's centre
    const Point mid = 0.5 * (mesh.node(e.endpoints[0]) + mesh.node(e.endpoints[1]));
    EXPECT_GT(e.normal.dot(mid - Point(0.5, 0.5)), 0.0);
  }
}

TEST(Mesh, NormalPointsFromMinusToPlusTriangle) {
  const auto mesh = ucfem::build_unit_square_mesh(4);
  const auto centroid = [&](int t) {
    const auto v = mesh.vertices(t);
    return Point((v[0] + v[1] + v[2]) / 3.0);
  };
  for (const auto& f : mesh.interior_faces()) {
    EXPECT_GT(f.normal.dot(centroid(f.right_tri) - centroid(f.left_tri)), 0.0);
  }
}

TEST(Mesh, AlternatingDiagonals) {
  const auto mesh = ucfem::build_unit_square_mesh(2);
  // cell (0,0) is split along (0,0)-(1/2,1/2), cell (1,0) along (1,0)-(1/2,1/2)
  std::set<std::pair<int, int>> diagonals;
  for (const auto& f : mesh.interior_faces()) diagonals.insert({f.endpoints[0], f.endpoints[1]});
  EXPECT_TRUE(diagonals.count({0, 4}));
  EXPECT_TRUE(diagonals.count({2, 4}));
  EXPECT_TRUE(diagonals.count({4, 6}));
  EXPECT_TRUE(diagonals.count({4, 8}));
  EXPECT_FALSE(diagonals.count({1, 3}));
}

TEST(Mesh, LocateReturnsContainingTriangle) {
  const auto mesh = ucfem::build_unit_square_mesh(7);
  for (double x = 0.0; x <= 1.0; x += 0.037) {
    for (double y = 0.0; y <= 1.0; y += 0.041) {
      const auto t = mesh.locate(Point(x, y));
      ASSERT_TRUE(t.has_value());
      const auto b = mesh.barycentric(*t, Point(x, y));
      EXPECT_GE(b.minCoeff(), -1e-12);
      EXPECT_NEAR(b.sum(), 1.0, 1e-14);
    }
  }
  EXPECT_FALSE(mesh.locate(Point(1.2, 0.5)).has_value());
}

TEST(Region, Containment) {
  EXPECT_TRUE(Region::whole_domain().contains(Point(0.3, 0.7)));

  const Region omega1({Box{0.2, 0.45, 0.2, 0.45}});
  EXPECT_TRUE(omega1.contains(Point(0.3, 0.3)));
  EXPECT_FALSE(omega1.contains(Point(0.5, 0.5)));
  EXPECT_TRUE(omega1.contains(Point(0.2, 0.45)));  // closed

  const Region omega3({Box{0.0, 1.0, 0.0, 1.0}}, {Box{0.0, 0.875, 0.125, 0.875}});
  EXPECT_TRUE(omega3.contains(Point(0.95, 0.5)));
  EXPECT_FALSE(omega3.contains(Point(0.5, 0.5)));
  EXPECT_TRUE(omega3.contains(Point(0.875, 0.5)));  // boundary of the hole stays inside
  EXPECT_TRUE(omega3.contains(Point(0.5, 0.05)));
}

TEST(Region, EmptyRegionHasZeroMeasure) {
  const auto mesh = ucfem::build_unit_square_mesh(4);
  const Region none;
  EXPECT_TRUE(none.trivially_empty());
  EXPECT_DOUBLE_EQ(ucfem::region_measure(mesh, none), 0.0);
  const Region degenerate({Box{0.3, 0.3, 0.0, 1.0}});
  EXPECT_TRUE(degenerate.trivially_empty());
}

TEST(Region, MeasuredAreaConvergesWithQuadratureOrder) {
  const auto mesh = ucfem::build_unit_square_mesh(8);
  const std::vector<std::pair<Region, double>> regions{
      {Region({Box{0.2, 0.45, 0.2, 0.45}}), 0.0625},
      {Region({Box{0.0, 0.125, 0.4, 0.6}, Box{0.875, 1.0, 0.4, 0.6}}), 0.05},
      {Region({Box{0.0, 1.0, 0.0, 1.0}}, {Box{0.0, 0.875, 0.125, 0.875}}), 1.0 - 0.875 * 0.75},
  };
  for (const auto& [region, exact] : regions) {
    const double coarse = std::abs(ucfem::region_measure(mesh, region, 2) - exact);
    const double fine = std::abs(ucfem::region_measure(mesh, region, 40) - exact);
    const double finest = std::abs(ucfem::region_measure(mesh, region, 120) - exact);
    EXPECT_LE(fine, coarse + 1e-15);
    EXPECT_LE(finest, 2e-3 * exact);
  }
}

TEST(Mesh, SummaryJson) {
  const auto j = ucfem::io::mesh_summary(ucfem::build_unit_square_mesh(8));
  EXPECT_EQ(j["nodes"], 81);
  EXPECT_EQ(j["triangles"], 128);
  EXPECT_NEAR(j["h"].get<double>(), 0.1111, 1e-4);
}

}  // namespace
