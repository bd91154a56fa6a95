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

#include "ucfem/experiments.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <random>

namespace {

using ucfem::Point;

// Central differences are exact (up to roundoff) for functions that are
// quadratic in each variable separately, which the bubble is.
constexpr double kStep = 1e-2;

double fd_residual(const ucfem::ExactSolution& u, double mu, const ucfem::VectorField& beta,
                   const ucfem::ScalarField& f, const Point& p) {
  const Point dx(kStep, 0.0);
  const Point dy(0.0, kStep);
  const double c = u.value(p);
  const double lap = (u.value(p + dx) - 2.0 * c + u.value(p - dx) + u.value(p + dy) - 2.0 * c + u.value(p - dy)) /
                     (kStep * kStep);
  const Point grad((u.value(p + dx) - u.value(p - dx)) / (2.0 * kStep),
                   (u.value(p + dy) - u.value(p - dy)) / (2.0 * kStep));
  return -mu * lap + beta(p).dot(grad) - f(p);
}

TEST(DeriveSource, CentreValues) {
  const auto u = ucfem::bubble_solution();
  const Point centre(0.5, 0.5);
  EXPECT_DOUBLE_EQ(ucfem::derive_source(u, 1.0, [](const Point&) { return Point(0, 0); })(centre), 30.0);
  EXPECT_DOUBLE_EQ(ucfem::derive_source(u, 1.0, ucfem::beta_constant())(centre), 30.0);
}

TEST(DeriveSource, AffineWithoutConvectionIsSourceFree) {
  const ucfem::ExactSolution affine{[](const Point& p) { return 1.0 + 2.0 * p.x() - p.y(); },
                                    [](const Point&) { return Point(2.0, -1.0); },
                                    [](const Point&) { return 0.0; }};
  const auto f = ucfem::derive_source(affine, 3.0, [](const Point&) { return Point(0, 0); });
  EXPECT_EQ(f(Point(0.3, 0.9)), 0.0);
}

TEST(DeriveSource, AnalyticDerivativesMatchFiniteDifferences) {
  const auto u = ucfem::bubble_solution();
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Point p(unit(gen), unit(gen));
    const Point dx(kStep, 0.0);
    const Point dy(0.0, kStep);
    EXPECT_NEAR(u.gradient(p).x(), (u.value(p + dx) - u.value(p - dx)) / (2 * kStep), 1e-6);
    EXPECT_NEAR(u.gradient(p).y(), (u.value(p + dy) - u.value(p - dy)) / (2 * kStep), 1e-6);
    const double lap = (u.value(p + dx) + u.value(p - dx) + u.value(p + dy) + u.value(p - dy) - 4 * u.value(p)) /
                       (kStep * kStep);
    EXPECT_NEAR(u.laplacian(p), lap, 1e-6);
  }
}

TEST(BuiltinCases, CatalogueAndParameters) {
  const auto cases = ucfem::builtin_cases();
  ASSERT_EQ(cases.size(), 8u);
  const std::vector<std::string> names{"ex1_beta_c", "ex1_beta_nc", "ex2_beta_c", "ex2_beta_nc",
                                       "ex3_beta_c", "ex3_beta_nc", "ex1_beta_c_noise_sqrt_h",
                                       "ex1_beta_c_noise_h"};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    EXPECT_EQ(c.name, names[i]);
    EXPECT_EQ(c.spec.mu, 1.0);
    EXPECT_EQ(c.spec.gamma, 1e-5);
    EXPECT_EQ(c.spec.gamma_star, 1.0);
    EXPECT_EQ(c.spec.boundary_factor, 50.0);
    EXPECT_EQ(c.ladder, (std::vector<int>{8, 16, 32, 64, 128}));
    EXPECT_EQ(c.noise.has_value(), i >= 6);
    const bool rotating = c.name.find("_nc") != std::string::npos;
    EXPECT_EQ(c.spec.beta_sup.has_value(), rotating);
    if (rotating) EXPECT_EQ(*c.spec.beta_sup, 200.0);
  }
  EXPECT_EQ(cases[6].noise->exponent, 0.5);
  EXPECT_EQ(cases[7].noise->exponent, 1.0);
  EXPECT_THROW(ucfem::find_case("ex4_beta_c"), ucfem::ConfigError);
  EXPECT_THROW(ucfem::make_case("ex9", false), ucfem::ConfigError);
}

TEST(BuiltinCases, FirstGeometryRegions) {
  const auto c = ucfem::find_case("ex1_beta_c");
  EXPECT_TRUE(c.spec.omega.contains(Point(0.3, 0.3)));
  EXPECT_FALSE(c.spec.omega.contains(Point(0.3, 0.6)));
  EXPECT_TRUE(c.spec.target.contains(Point(0.3, 0.6)));
  EXPECT_FALSE(c.spec.target.contains(Point(0.5, 0.6)));
}

TEST(BuiltinCases, ThirdGeometryIsAFrame) {
  const auto c = ucfem::find_case("ex3_beta_c");
  EXPECT_TRUE(c.spec.omega.contains(Point(0.95, 0.5)));
  EXPECT_TRUE(c.spec.omega.contains(Point(0.5, 0.05)));
  EXPECT_FALSE(c.spec.omega.contains(Point(0.5, 0.5)));
  EXPECT_TRUE(c.spec.target.contains(Point(0.5, 0.5)));
  EXPECT_FALSE(c.spec.target.contains(Point(0.05, 0.5)));
}

TEST(BuiltinCases, BetaFieldsAndSupNorm) {
  const auto rot = ucfem::beta_rotating();
  EXPECT_EQ(rot(Point(1, 1)), Point(200.0, 0.0));
  double sup = 0.0;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) sup = std::max(sup, rot(Point(i / 20.0, j / 20.0)).norm());
  }
  EXPECT_DOUBLE_EQ(sup, 200.0);
}

TEST(BuiltinCases, ExactSolutionSatisfiesThePde) {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& c : ucfem::builtin_cases()) {
    for (int k = 0; k < 100; ++k) {
      const Point p(unit(gen), unit(gen));
      EXPECT_LE(std::abs(fd_residual(c.exact, c.spec.mu, c.spec.beta, c.spec.f, p)), 1e-8) << c.name;
    }
  }
}

TEST(Noise, LeavesNodesOutsideOmegaUntouched) {
  const auto mesh = ucfem::build_unit_square_mesh(16);
  const auto c = ucfem::find_case("ex1_beta_c_noise_h");
  const auto clean = ucfem::interpolate(c.exact.value, mesh);
  const double h = ucfem::mesh_size(mesh);
  const auto noisy = ucfem::apply_noise(clean, *c.noise, c.spec.omega, h);
  int touched = 0;
  for (int i = 0; i < static_cast<int>(mesh.num_nodes()); ++i) {
    const double delta = noisy.coefficients()[i] - clean.coefficients()[i];
    if (!c.spec.omega.contains(mesh.node(i))) {
      EXPECT_EQ(delta, 0.0);
    } else {
      EXPECT_LE(std::abs(delta), h);
      touched += delta != 0.0;
    }
  }
  EXPECT_GT(touched, 0);
}

TEST(Noise, ZeroAmplitudeIsIdentity) {
  const auto mesh = ucfem::build_unit_square_mesh(8);
  const auto clean = ucfem::interpolate(ucfem::bubble_solution().value, mesh);
  const auto noisy = ucfem::apply_noise(clean, ucfem::NoiseModel{1.0, 5, 0.0}, ucfem::Region::whole_domain(), 0.1);
  EXPECT_EQ(noisy.coefficients(), clean.coefficients());
}

TEST(Noise, UniformStatistics) {
  const ucfem::NoiseModel model{0.5, 99, 1.0};
  for (int n : {32, 64, 128}) {
    const auto mesh = ucfem::build_unit_square_mesh(n);
    const double h = ucfem::mesh_size(mesh);
    const auto delta = ucfem::apply_noise(ucfem::FeFunction::zero(mesh), model, ucfem::Region::whole_domain(), h)
                           .coefficients();
    const double amp = std::sqrt(h);
    EXPECT_LE(delta.cwiseAbs().maxCoeff(), amp);
    const double count = static_cast<double>(delta.size());
    const double sigma_mean = amp / std::sqrt(3.0) / std::sqrt(count);
    EXPECT_LE(std::abs(delta.mean()), 3.0 * sigma_mean) << n;
    const double var = delta.squaredNorm() / count;
    EXPECT_NEAR(var, amp * amp / 3.0, 0.1 * amp * amp / 3.0) << n;
  }
}

TEST(Noise, DeterministicPerSeedAndMesh) {
  const auto mesh = ucfem::build_unit_square_mesh(16);
  const auto zero = ucfem::FeFunction::zero(mesh);
  const auto omega = ucfem::Region::whole_domain();
  const auto a = ucfem::apply_noise(zero, {1.0, 7, 1.0}, omega, 0.1).coefficients();
  const auto b = ucfem::apply_noise(zero, {1.0, 7, 1.0}, omega, 0.1).coefficients();
  const auto c = ucfem::apply_noise(zero, {1.0, 8, 1.0}, omega, 0.1).coefficients();
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())), 0);
  EXPECT_NE(a, c);
}

TEST(EstimateRate, PowerLaws) {
  std::vector<std::pair<double, double>> lin, quad, flat;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    lin.emplace_back(h, 3.0 * h);
    quad.emplace_back(h, 0.5 * h * h);
    flat.emplace_back(h, 4.0);
  }
  EXPECT_NEAR(ucfem::estimate_rate(lin).slope, 1.0, 1e-12);
  EXPECT_NEAR(ucfem::estimate_rate(quad).slope, 2.0, 1e-12);
  EXPECT_NEAR(ucfem::estimate_rate(flat).slope, 0.0, 1e-12);
  const auto fit = ucfem::estimate_rate(quad);
  ASSERT_EQ(fit.steps.size(), 3u);
  for (double s : fit.steps) EXPECT_NEAR(s, 2.0, 1e-12);
}

TEST(EstimateRate, RejectsBadInput) {
  const std::vector<std::pair<double, double>> one{{0.1, 1.0}};
  const std::vector<std::pair<double, double>> negative{{0.1, 1.0}, {0.05, -1.0}};
  const std::vector<std::pair<double, double>> zero{{0.1, 0.0}, {0.05, 1.0}};
  EXPECT_THROW(ucfem::estimate_rate(one), ucfem::ConfigError);
  EXPECT_THROW(ucfem::estimate_rate(negative), ucfem::ConfigError);
  EXPECT_THROW(ucfem::estimate_rate(zero), ucfem::ConfigError);
}

TEST(RunCase, RowsAndDerivedQuantities) {
  auto c = ucfem::find_case("ex1_beta_nc");
  c.ladder = {8, 16};
  const auto table = ucfem::run_case(c);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_FALSE(table.partial());
  for (const auto& r : table.rows) {
    EXPECT_TRUE(r.ok);
    EXPECT_DOUBLE_EQ(r.h, 1.0 / (r.n + 1.0));
    EXPECT_DOUBLE_EQ(r.peclet, 200.0 * r.h);
    EXPECT_LE(r.residual, 1e-8);
    EXPECT_TRUE(std::isnan(r.cond));
    EXPECT_DOUBLE_EQ(r.regularization_norm(), std::hypot(r.s_norm, r.sstar_norm));
  }
  EXPECT_THROW(table.rate("bogus"), ucfem::ConfigError);
  EXPECT_FALSE(table.rate("cond").has_value());
}

TEST(RunCase, DeterministicTables) {
  auto c = ucfem::find_case("ex1_beta_c_noise_sqrt_h");
  c.ladder = {8, 16};
  const auto a = ucfem::run_case(c);
  const auto b = ucfem::run_case(c);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].err_l2_b, b.rows[i].err_l2_b);
    EXPECT_EQ(a.rows[i].err_h1_b, b.rows[i].err_h1_b);
    EXPECT_EQ(a.rows[i].s_norm, b.rows[i].s_norm);
    EXPECT_EQ(a.rows[i].sstar_norm, b.rows[i].sstar_norm);
  }
}

TEST(RunCase, FailingRowsAreFlagged) {
  auto c = ucfem::find_case("ex1_beta_c");
  c.ladder = {0, 8};
  const auto table = ucfem::run_case(c);
  EXPECT_TRUE(table.partial());
  EXPECT_FALSE(table.rows[0].ok);
  EXPECT_FALSE(table.rows[0].error.empty());
  EXPECT_TRUE(table.rows[1].ok);
}

TEST(RunCase, NoiselessErrorsDecrease) {
  for (const auto& base : ucfem::builtin_cases()) {
    if (base.noise) continue;
    // The ex1 errors grow between N = 8 and 32 before the asymptotic regime
    // sets in, so only the full ladder is meaningful.
    const auto& c = base;
    const auto table = ucfem::run_case(c);
    EXPECT_GT(table.rate("err_l2_B")->slope, 0.0) << c.name;
    EXPECT_GT(table.rate("err_h1_B")->slope, 0.0) << c.name;
  }
}

}  // namespace
