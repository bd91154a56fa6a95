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

#ifndef UCFEM_SADDLE_HPP
#define UCFEM_SADDLE_HPP

#include "ucfem/common.hpp"
#include "ucfem/fe_space.hpp"
#include "ucfem/forms.hpp"
#include "ucfem/mesh.hpp"

#include <Eigen/SparseLU>

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace ucfem {

/// All operators of the discrete method on one mesh.
struct AssembledForms {
  const Mesh* mesh = nullptr;
  double h = 0.0;
  double beta_norm = 0.0;
  SparseMatrix a;        // a_h(phi_j, phi_i)
  SparseMatrix s_omega;  // data fidelity
  SparseMatrix s_jump;   // interior gradient jumps (s_Omega)
  SparseMatrix s_star;   // dual stabilization
  std::vector<std::string> warnings;

  /// s = s_Omega + s_omega.
  SparseMatrix s() const { return s_jump + s_omega; }
};

inline AssembledForms assemble_forms(const ProblemSpec& spec, const Mesh& mesh) {
  spec.validate();
  AssembledForms forms;
  forms.mesh = &mesh;
  forms.h = mesh_size(mesh);
  forms.beta_norm = beta_norm(spec, mesh);
  // Freeze the sampled |beta| so every form sees the same value.
  ProblemSpec fixed = spec;
  fixed.beta_sup = forms.beta_norm;
  forms.a = assemble_a(fixed, mesh);
  forms.s_omega = assemble_s_omega(fixed, mesh, forms.h, &forms.warnings);
  forms.s_jump = assemble_s_Omega(fixed, mesh, forms.h);
  forms.s_star = assemble_s_star(fixed, mesh, forms.h);
  return forms;
}

/// Symmetric block system [[S, A^T], [A, -S_*]] (u; z) = (b_omega; b_f).
struct SaddleSystem {
  const Mesh* mesh = nullptr;
  SparseMatrix matrix;
  Vector rhs;

  Eigen::Index unknowns_per_field() const { return matrix.rows() / 2; }
};

/// Stacks the forms into the saddle system. Unknowns are ordered
/// (u_h coefficients, z_h coefficients).
inline SaddleSystem build_system(const SparseMatrix& a, const SparseMatrix& s,
                                 const SparseMatrix& s_star, const Vector& data_load,
                                 const Vector& source_load, const Mesh* mesh = nullptr) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || s.rows() != n || s.cols() != n || s_star.rows() != n ||
      s_star.cols() != n || data_load.size() != n || source_load.size() != n) {
    throw ConfigError("build_system: block dimension mismatch");
  }
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(2 * a.nonZeros() + s.nonZeros() + s_star.nonZeros()));
  for (Eigen::Index k = 0; k < n; ++k) {
    for (SparseMatrix::InnerIterator it(s, k); it; ++it) {
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const auto r = static_cast<int>(it.row());
      const auto c = static_cast<int>(it.col());
      trips.emplace_back(static_cast<int>(n) + r, c, it.value());  // A
      trips.emplace_back(c, static_cast<int>(n) + r, it.value());  // A^T
    }
    for (SparseMatrix::InnerIterator it(s_star, k); it; ++it) {
      trips.emplace_back(static_cast<int>(n + it.row()), static_cast<int>(n + it.col()),
                         -it.value());
    }
  }
  SaddleSystem sys;
  sys.mesh = mesh;
  sys.matrix.resize(2 * n, 2 * n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.matrix.makeCompressed();
  sys.rhs.resize(2 * n);
  sys.rhs << data_load, source_load;
  return sys;
}

inline SaddleSystem build_system(const AssembledForms& forms, const Loads& loads) {
  return build_system(forms.a, forms.s(), forms.s_star, loads.data, loads.source, forms.mesh);
}

struct SolveDiagnostics {
  Eigen::Index dimension = 0;
  Eigen::Index nonzeros = 0;
  double residual = 0.0;  // relative when the rhs is nonzero, absolute otherwise
  double factor_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct Solution {
  FeFunction u;
  FeFunction z;
  Vector raw;  // stacked (u, z)
  SolveDiagnostics diagnostics;
};

using SaddleFactorization = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

/// Sparse LU of the system matrix; throws NumericalError on breakdown.
inline void factorize(const SaddleSystem& system, SaddleFactorization& lu) {
  lu.analyzePattern(system.matrix);
  lu.factorize(system.matrix);
  if (lu.info() != Eigen::Success) {
    throw NumericalError("saddle factorization failed (dimension " +
                         std::to_string(system.matrix.rows()) + ", nnz " +
                         std::to_string(system.matrix.nonZeros()) + "): " + lu.lastErrorMessage());
  }
}

inline Solution solve(const SaddleSystem& system) {
  using clock = std::chrono::steady_clock;
  if (system.mesh == nullptr) throw ConfigError("solve: system has no mesh attached");
  Solution sol;
  sol.diagnostics.dimension = system.matrix.rows();
  sol.diagnostics.nonzeros = system.matrix.nonZeros();

  const auto t0 = clock::now();
  SaddleFactorization lu;
  factorize(system, lu);
  const auto t1 = clock::now();
  sol.raw = lu.solve(system.rhs);
  const auto t2 = clock::now();
  if (lu.info() != Eigen::Success || !sol.raw.allFinite()) {
    throw NumericalError("saddle solve produced a non-finite result");
  }
  sol.diagnostics.factor_seconds = std::chrono::duration<double>(t1 - t0).count();
  sol.diagnostics.solve_seconds = std::chrono::duration<double>(t2 - t1).count();

  const double bnorm = system.rhs.norm();
  const double rnorm = (system.matrix * sol.raw - system.rhs).norm();
  sol.diagnostics.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;

  const Eigen::Index n = system.unknowns_per_field();
  sol.u = FeFunction(*system.mesh, sol.raw.head(n));
  sol.z = FeFunction(*system.mesh, sol.raw.tail(n));
  return sol;
}

}  // namespace ucfem

#endif  // UCFEM_SADDLE_HPP
