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

#ifndef UCFEM_QUADRATURE_HPP
#define UCFEM_QUADRATURE_HPP

#include "ucfem/common.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace ucfem {

/// Gauss-Legendre nodes and weights on [0, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one point");
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0) * z * p2 - (k - 1.0) * p3) / k;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    x[idx] = 0.5 * (z + 1.0);
    w[idx] = 1.0 / ((1.0 - z * z) * dp * dp);  // 2/((1-z^2)P'^2) scaled to [0,1]
  }
  return {x, w};
}

/// Quadrature on the reference triangle, in barycentric coordinates.
/// Weights sum to one; multiply by the element area at use.
struct TriangleRule {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Quadrature on an edge, parameterized by t in [0, 1] from the first endpoint.
/// Weights sum to one; multiply by the edge length at use.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Triangle rule exact for polynomials of the requested degree.
///
/// Degrees 1, 2, 4 and 5 use the classical symmetric rules (1, 3, 6 and 7
/// points); anything else uses a collapsed Gauss-Legendre product rule.
inline TriangleRule triangle_rule(int degree) {
  if (degree < 1) throw ConfigError("triangle_rule: degree must be >= 1");
  TriangleRule rule;
  rule.degree = degree;
  if (degree == 1) {
    rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
    rule.weights.push_back(1.0);
    return rule;
  }
  if (degree == 2) {
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d p = Eigen::Vector3d::Constant(1.0 / 6.0);
      p[k] = 2.0 / 3.0;
      rule.points.push_back(p);
      rule.weights.push_back(1.0 / 3.0);
    }
    return rule;
  }
  if (degree == 4) {
    // Dunavant, 6 points
    constexpr std::array<std::pair<double, double>, 2> orbits{{
        {0.44594849091596488632, 0.22338158967801146570},
        {0.091576213509770743460, 0.10995174365532186764},
    }};
    for (const auto& [a, w] : orbits) {
      for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d p = Eigen::Vector3d::Constant(a);
        p[k] = 1.0 - 2.0 * a;
        rule.points.push_back(p);
        rule.weights.push_back(w);
      }
    }
    return rule;
  }
  if (degree == 5) {
    // Radon, 7 points
    rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
    rule.weights.push_back(0.225);
    constexpr std::array<std::pair<double, double>, 2> orbits{{
        {0.47014206410511508977, 0.13239415278850618074},
        {0.10128650732345633880, 0.12593918054482715260},
    }};
    for (const auto& [a, w] : orbits) {
      for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d p = Eigen::Vector3d::Constant(a);
        p[k] = 1.0 - 2.0 * a;
        rule.points.push_back(p);
        rule.weights.push_back(w);
      }
    }
    return rule;
  }
  // Collapsed product: x = s (1 - t), y = t, Jacobian (1 - t).
  const int n = (degree + 3) / 2;
  const auto [gx, gw] = gauss_legendre(n);
  for (std::size_t a = 0; a < gx.size(); ++a) {
    for (std::size_t b = 0; b < gx.size(); ++b) {
      const double s = gx[a];
      const double t = gx[b];
      const double x = s * (1.0 - t);
      const double y = t;
      rule.points.emplace_back(1.0 - x - y, x, y);
      rule.weights.push_back(2.0 * gw[a] * gw[b] * (1.0 - t));
    }
  }
  return rule;
}

/// Gauss-Legendre edge rule exact for the requested degree.
inline EdgeRule edge_rule(int degree) {
  if (degree < 1) throw ConfigError("edge_rule: degree must be >= 1");
  const auto [x, w] = gauss_legendre((degree + 2) / 2);
  return EdgeRule{x, w, degree};
}

}  // namespace ucfem

#endif  // UCFEM_QUADRATURE_HPP
