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

#ifndef UCFEM_IO_HPP
#define UCFEM_IO_HPP

#include "ucfem/condition.hpp"
#include "ucfem/experiments.hpp"
#include "ucfem/fe_space.hpp"
#include "ucfem/mesh.hpp"
#include "ucfem/saddle.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace ucfem::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form; "nan" for missing values.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json mesh_summary(const Mesh& mesh) {
  return {{"cells_per_side", mesh.cells_per_side()},
          {"nodes", mesh.num_nodes()},
          {"triangles", mesh.num_triangles()},
          {"interior_faces", mesh.interior_faces().size()},
          {"boundary_edges", mesh.boundary_edges().size()},
          {"h", mesh_size(mesh)}};
}

/// CSV with header node,x,y,value.
inline void write_fe_function_csv(std::ostream& os, const FeFunction& v) {
  os << "node,x,y,value\n";
  const Mesh& mesh = v.mesh();
  for (int i = 0; i < static_cast<int>(mesh.num_nodes()); ++i) {
    const Point& p = mesh.node(i);
    os << i << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ','
       << format_double(v.coefficients()[i]) << '\n';
  }
}

/// One "row col value" line per stored entry, zero-based, column-major order.
inline void write_coordinate_matrix(std::ostream& os, const SparseMatrix& m) {
  os << "% " << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
    }
  }
}

inline json diagnostics(const SolveDiagnostics& d) {
  return {{"dimension", d.dimension},
          {"nnz", d.nonzeros},
          {"residual", d.residual},
          {"factor_seconds", d.factor_seconds},
          {"solve_seconds", d.solve_seconds}};
}

inline json condition(const ConditionEstimate& c) {
  return {{"value", c.value},           {"sigma_max", c.sigma_max},
          {"sigma_min", c.sigma_min},   {"lower", c.lower},
          {"upper", c.upper},           {"iterations_max", c.iterations_max},
          {"iterations_min", c.iterations_min}, {"converged", c.converged}};
}

inline constexpr const char* kConvergenceHeader = "N,h,err_l2_B,err_h1_B,s_norm,sstar_norm,cond";

inline void write_convergence_csv(std::ostream& os, const ConvergenceTable& t) {
  os << kConvergenceHeader << '\n';
  for (const auto& r : t.rows) {
    os << r.n << ',' << format_double(r.h) << ',' << format_double(r.err_l2_b) << ','
       << format_double(r.err_h1_b) << ',' << format_double(r.s_norm) << ','
       << format_double(r.sstar_norm) << ',' << format_double(r.cond) << '\n';
  }
}

/// Fitted rates (null when fewer than two usable rows), per-step slopes and
/// per-row status.
inline json rates_summary(const ConvergenceTable& t) {
  json rates = json::object();
  json steps = json::object();
  for (const char* col : ConvergenceTable::rate_columns) {
    const auto fit = t.rate(col);
    rates[col] = fit ? json(fit->slope) : json(nullptr);
    steps[col] = fit ? json(fit->steps) : json::array();
  }
  const auto reg = t.rate("reg_norm");
  rates["reg_norm"] = reg ? json(reg->slope) : json(nullptr);

  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = {{"N", r.n},
                {"ok", r.ok},
                {"peclet", r.peclet},
                {"residual", r.residual},
                {"cond_converged", r.cond_converged}};
    if (!r.ok) row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  return {{"case", t.case_name},
          {"rates", rates},
          {"step_rates", steps},
          {"partial", t.partial()},
          {"rows", rows}};
}

}  // namespace ucfem::io

#endif  // UCFEM_IO_HPP
