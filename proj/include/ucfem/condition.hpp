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

#ifndef UCFEM_CONDITION_HPP
#define UCFEM_CONDITION_HPP

#include "ucfem/common.hpp"
#include "ucfem/saddle.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdint>
#include <string>

namespace ucfem {

enum class ConditionMode { exact, estimated };

struct ConditionOptions {
  double tolerance = 1e-3;
  int max_iterations = 20000;
  /// Largest dimension accepted by the dense SVD.
  Eigen::Index max_dense_dimension = 2000;
};

/// Euclidean condition number sigma_max / sigma_min.
///
/// For the estimate, [lower, upper] brackets the value: lower is a rigorous
/// Rayleigh-quotient bound, upper widens each extreme eigenvalue of M^T M by
/// its residual. When converged is false the iteration cap was hit and value
/// is the current best guess.
struct ConditionEstimate {
  double value = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int iterations_max = 0;
  int iterations_min = 0;
  bool converged = true;
};

namespace detail {

/// Deterministic unit start vector with components in all directions.
inline Vector start_vector(Eigen::Index n) {
  Vector x(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  for (Eigen::Index i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    x[i] = 1.0 + static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  return x.normalized();
}

struct PowerResult {
  double theta = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Power iteration for the dominant eigenvalue of a symmetric positive
/// semidefinite operator given as apply(x) -> y.
template <class Apply>
PowerResult power_iteration(Apply&& apply, Eigen::Index n, double tol, int cap) {
  PowerResult r;
  Vector x = start_vector(n);
  for (int it = 1; it <= cap; ++it) {
    const Vector y = apply(x);
    r.theta = x.dot(y);
    r.residual = (y - r.theta * x).norm();
    r.iterations = it;
    if (r.residual <= tol * r.theta) {
      r.converged = true;
      return r;
    }
    const double ny = y.norm();
    if (!(ny > 0.0)) return r;
    x = y / ny;
  }
  return r;
}

}  // namespace detail

inline ConditionEstimate condition_number_exact(const SparseMatrix& m,
                                                const ConditionOptions& opts = {}) {
  if (m.rows() > opts.max_dense_dimension) {
    throw ConfigError("exact condition number limited to dimension " +
                      std::to_string(opts.max_dense_dimension) + ", got " +
                      std::to_string(m.rows()));
  }
  const Eigen::MatrixXd dense(m);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
  const auto& s = svd.singularValues();
  ConditionEstimate c;
  c.sigma_max = s[0];
  c.sigma_min = s[s.size() - 1];
  if (!(c.sigma_min > 0.0)) throw NumericalError("exact condition number: singular matrix");
  c.value = c.sigma_max / c.sigma_min;
  c.lower = c.upper = c.value;
  return c;
}

/// Power iteration on M^T M for sigma_max and inverse iteration through a
/// sparse LU of M for sigma_min.
inline ConditionEstimate condition_number_estimated(const SparseMatrix& m,
                                                    const ConditionOptions& opts = {}) {
  const Eigen::Index n = m.rows();
  const SparseMatrix mt = m.transpose();
  const auto top = detail::power_iteration(
      [&](const Vector& x) -> Vector { return mt * (m * x); }, n, opts.tolerance,
      opts.max_iterations);

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(m);
  lu.factorize(m);
  if (lu.info() != Eigen::Success) {
    throw NumericalError("condition estimate: factorization failed: " + lu.lastErrorMessage());
  }
  const auto bottom = detail::power_iteration(
      [&](const Vector& x) -> Vector {
        const Vector y = lu.solve(x);
        return lu.transpose().solve(y);
      },
      n, opts.tolerance, opts.max_iterations);

  ConditionEstimate c;
  c.sigma_max = std::sqrt(top.theta);
  c.sigma_min = 1.0 / std::sqrt(bottom.theta);
  c.value = c.sigma_max / c.sigma_min;
  c.lower = std::sqrt(top.theta * bottom.theta);
  c.upper = std::sqrt((top.theta + top.residual) * (bottom.theta + bottom.residual));
  c.iterations_max = top.iterations;
  c.iterations_min = bottom.iterations;
  c.converged = top.converged && bottom.converged;
  return c;
}

inline ConditionEstimate condition_number(const SparseMatrix& m, ConditionMode mode,
                                          const ConditionOptions& opts = {}) {
  return mode == ConditionMode::exact ? condition_number_exact(m, opts)
                                      : condition_number_estimated(m, opts);
}

inline ConditionEstimate condition_number(const SaddleSystem& system, ConditionMode mode,
                                          const ConditionOptions& opts = {}) {
  return condition_number(system.matrix, mode, opts);
}

}  // namespace ucfem

#endif  // UCFEM_CONDITION_HPP
