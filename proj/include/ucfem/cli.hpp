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

#ifndef UCFEM_CLI_HPP
#define UCFEM_CLI_HPP

// Command implementations behind the ucfem executable. Each command reads a
// RunConfig, writes its artifacts under RunConfig::out_dir and returns a
// process exit code.

#include "ucfem/condition.hpp"
#include "ucfem/experiments.hpp"
#include "ucfem/io.hpp"
#include "ucfem/stability_probe.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ucfem::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  std::optional<std::string> case_name;
  json inline_spec = json::object();
  std::vector<int> ladder;
  int cells = 32;
  std::string out_dir = "out";
  std::uint64_t seed = 20190401;
  std::string noise = "none";  // none | sqrt_h | h
  std::optional<double> boundary_factor;
  std::string cond = "none";  // none | exact | estimate
  int cond_max_iter = 20000;
  std::string projection = "l2";  // l2 | nodal
  std::string h1 = "full";        // full | semi
  std::optional<int> quad_degree;
  // probe
  std::string probe = "lemma";  // lemma | kappa | harmonic | fem
  int samples = 10000;
  double r1 = 0.1;
  double r2 = 0.2;
  double r3 = 0.4;
  double c3 = 1.0;
  Point center{0.5, 0.5};
  int max_degree = 8;
  std::string ball_norm = "l2";
};

namespace detail {

template <class T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline Region region_from_json(const json& j) {
  const auto boxes = [](const json& arr) {
    std::vector<Box> out;
    for (const auto& b : arr) {
      if (!b.is_array() || b.size() != 4) throw ConfigError("box must be [x0, x1, y0, y1]");
      out.push_back(Box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()});
    }
    return out;
  };
  if (j.is_array()) return Region(boxes(j));
  return Region(boxes(j.value("include", json::array())), boxes(j.value("exclude", json::array())));
}

}  // namespace detail

/// Fills a RunConfig from a JSON object. Unknown keys are rejected.
inline void apply_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{
      "case", "spec", "ladder", "N", "out", "seed", "noise", "boundary_factor", "cond",
      "cond_max_iter", "projection", "h1", "quad_degree", "probe", "samples", "r1", "r2", "r3",
      "c3", "center", "max_degree", "ball_norm"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  try {
    // Optional settings echo as null when unset; read them back the same way.
    const auto given = [&j](const char* key) { return j.contains(key) && !j.at(key).is_null(); };
    if (j.contains("case")) {
      cfg.case_name = given("case") ? std::optional(j.at("case").get<std::string>()) : std::nullopt;
    }
    if (j.contains("spec")) cfg.inline_spec = j.at("spec");
    detail::take(j, "ladder", cfg.ladder);
    detail::take(j, "N", cfg.cells);
    detail::take(j, "out", cfg.out_dir);
    detail::take(j, "seed", cfg.seed);
    detail::take(j, "noise", cfg.noise);
    if (j.contains("boundary_factor")) {
      cfg.boundary_factor = given("boundary_factor") ? std::optional(j.at("boundary_factor").get<double>()) : std::nullopt;
    }
    detail::take(j, "cond", cfg.cond);
    detail::take(j, "cond_max_iter", cfg.cond_max_iter);
    detail::take(j, "projection", cfg.projection);
    detail::take(j, "h1", cfg.h1);
    if (j.contains("quad_degree")) {
      cfg.quad_degree = given("quad_degree") ? std::optional(j.at("quad_degree").get<int>()) : std::nullopt;
    }
    detail::take(j, "probe", cfg.probe);
    detail::take(j, "samples", cfg.samples);
    detail::take(j, "r1", cfg.r1);
    detail::take(j, "r2", cfg.r2);
    detail::take(j, "r3", cfg.r3);
    detail::take(j, "c3", cfg.c3);
    if (j.contains("center")) {
      const auto c = j.at("center").get<std::vector<double>>();
      if (c.size() != 2) throw ConfigError("center must be [x, y]");
      cfg.center = Point(c[0], c[1]);
    }
    detail::take(j, "max_degree", cfg.max_degree);
    detail::take(j, "ball_norm", cfg.ball_norm);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }
}

inline RunConfig load_config_file(const std::string& path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ConfigError("config parse error in '" + path + "': " + ex.what());
  }
  apply_json(cfg, j);
  return cfg;
}

inline json to_json(const RunConfig& cfg) {
  json j;
  j["case"] = cfg.case_name ? json(*cfg.case_name) : json(nullptr);
  j["spec"] = cfg.inline_spec;
  j["ladder"] = cfg.ladder;
  j["N"] = cfg.cells;
  j["out"] = cfg.out_dir;
  j["seed"] = cfg.seed;
  j["noise"] = cfg.noise;
  j["boundary_factor"] = cfg.boundary_factor ? json(*cfg.boundary_factor) : json(nullptr);
  j["cond"] = cfg.cond;
  j["cond_max_iter"] = cfg.cond_max_iter;
  j["projection"] = cfg.projection;
  j["h1"] = cfg.h1;
  j["quad_degree"] = cfg.quad_degree ? json(*cfg.quad_degree) : json(nullptr);
  j["probe"] = cfg.probe;
  j["samples"] = cfg.samples;
  j["r1"] = cfg.r1;
  j["r2"] = cfg.r2;
  j["r3"] = cfg.r3;
  j["c3"] = cfg.c3;
  j["center"] = {cfg.center.x(), cfg.center.y()};
  j["max_degree"] = cfg.max_degree;
  j["ball_norm"] = cfg.ball_norm;
  return j;
}

/// Resolves the case: a builtin by name, or an inline spec
/// {geometry, beta, mu, gamma, gamma_star, boundary_factor, omega, target,
///  solution, data}, followed by the flag overrides.
inline CaseDefinition build_case(const RunConfig& cfg) {
  CaseDefinition c;
  const json& s = cfg.inline_spec;
  if (!s.is_object()) throw ConfigError("spec must be a JSON object");
  try {
    if (cfg.case_name) {
      c = find_case(*cfg.case_name);
    } else {
      const std::string beta = s.value("beta", std::string("beta_c"));
      if (beta != "beta_c" && beta != "beta_nc" && beta != "zero") {
        throw ConfigError("spec.beta must be beta_c, beta_nc or zero");
      }
      c = make_case(s.value("geometry", std::string("ex1")), beta == "beta_nc");
      c.name = "inline";
      if (beta == "zero") {
        c.spec.beta = [](const Point&) { return Point(Point::Zero()); };
        c.spec.beta_sup = 0.0;
      }
    }
    detail::take(s, "mu", c.spec.mu);
    detail::take(s, "gamma", c.spec.gamma);
    detail::take(s, "gamma_star", c.spec.gamma_star);
    detail::take(s, "boundary_factor", c.spec.boundary_factor);
    if (s.contains("beta_sup")) c.spec.beta_sup = s.at("beta_sup").get<double>();
    if (s.contains("omega")) c.spec.omega = detail::region_from_json(s.at("omega"));
    if (s.contains("target")) c.spec.target = detail::region_from_json(s.at("target"));
    const std::string solution = s.value("solution", std::string("bubble"));
    if (solution == "zero") {
      c.exact = {[](const Point&) { return 0.0; }, [](const Point&) { return Point(Point::Zero()); },
                 [](const Point&) { return 0.0; }};
    } else if (solution != "bubble") {
      throw ConfigError("spec.solution must be bubble or zero");
    }
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("spec: ") + ex.what());
  }
  if (cfg.boundary_factor) c.spec.boundary_factor = *cfg.boundary_factor;
  if (cfg.quad_degree) c.spec.quad_degree = *cfg.quad_degree;
  c.spec.f = derive_source(c.exact, c.spec.mu, c.spec.beta);
  if (!cfg.ladder.empty()) c.ladder = cfg.ladder;
  for (int n : c.ladder) {
    if (n < 1) throw ConfigError("ladder entries must be >= 1");
  }
  if (cfg.noise == "sqrt_h") {
    c.noise = NoiseModel{0.5, cfg.seed, 1.0};
  } else if (cfg.noise == "h") {
    c.noise = NoiseModel{1.0, cfg.seed, 1.0};
  } else if (cfg.noise == "none") {
    if (!cfg.case_name || cfg.case_name->find("_noise_") == std::string::npos) c.noise.reset();
    else if (c.noise) c.noise->seed = cfg.seed;
  } else {
    throw ConfigError("noise must be none, sqrt_h or h");
  }
  c.spec.validate();
  return c;
}

inline RunOptions run_options(const RunConfig& cfg) {
  RunOptions o;
  if (cfg.projection == "l2") o.projection = ProjectionKind::l2;
  else if (cfg.projection == "nodal") o.projection = ProjectionKind::nodal;
  else throw ConfigError("projection must be l2 or nodal");
  if (cfg.h1 == "full") o.h1 = H1Kind::full;
  else if (cfg.h1 == "semi") o.h1 = H1Kind::semi;
  else throw ConfigError("h1 must be full or semi");
  if (cfg.cond == "none") o.cond = CondMode::none;
  else if (cfg.cond == "exact") o.cond = CondMode::exact;
  else if (cfg.cond == "estimate") o.cond = CondMode::estimate;
  else throw ConfigError("cond must be none, exact or estimate");
  if (cfg.cond_max_iter < 1) throw ConfigError("cond_max_iter must be >= 1");
  o.cond_options.max_iterations = cfg.cond_max_iter;
  return o;
}

namespace detail {

inline std::filesystem::path prepare_out(const RunConfig& cfg) {
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "config.json") << to_json(cfg).dump(2) << '\n';
  return dir;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  out << text;
}

}  // namespace detail

inline int cmd_mesh_info(const RunConfig& cfg, std::ostream& os) {
  const Mesh mesh = build_unit_square_mesh(cfg.cells);
  const json summary = io::mesh_summary(mesh);
  os << summary.dump(2) << '\n';
  if (!cfg.out_dir.empty()) {
    const auto dir = detail::prepare_out(cfg);
    detail::write_text(dir / "mesh.json", summary.dump(2) + "\n");
  }
  return kExitOk;
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& os) {
  const CaseDefinition c = build_case(cfg);
  const RunOptions opts = run_options(cfg);
  const auto dir = detail::prepare_out(cfg);
  const MeshRun run = run_mesh(c, cfg.cells, opts);
  {
    std::ofstream u(dir / "solution_u.csv");
    io::write_fe_function_csv(u, run.solution.u);
    std::ofstream z(dir / "solution_z.csv");
    io::write_fe_function_csv(z, run.solution.z);
  }
  json diag = io::diagnostics(run.solution.diagnostics);
  diag["case"] = c.name;
  diag["N"] = cfg.cells;
  diag["h"] = run.row.h;
  diag["peclet"] = run.row.peclet;
  diag["condition_number"] = io::number_or_null(run.row.cond);
  diag["err_l2_B"] = run.row.err_l2_b;
  diag["err_h1_B"] = run.row.err_h1_b;
  diag["warnings"] = run.forms.warnings;
  detail::write_text(dir / "diagnostics.json", diag.dump(2) + "\n");
  os << "solved " << c.name << " N=" << cfg.cells << " residual "
     << io::format_double(run.solution.diagnostics.residual) << '\n';
  return kExitOk;
}

inline int cmd_convergence(const RunConfig& cfg, std::ostream& os) {
  const CaseDefinition c = build_case(cfg);
  const RunOptions opts = run_options(cfg);
  const auto dir = detail::prepare_out(cfg);
  const ConvergenceTable table = run_case(c, opts);
  {
    std::ofstream csv(dir / "convergence.csv");
    io::write_convergence_csv(csv, table);
  }
  const json rates = io::rates_summary(table);
  detail::write_text(dir / "rates.json", rates.dump(2) + "\n");
  os << rates["rates"].dump() << '\n';
  for (const auto& r : table.rows) {
    if (!r.ok) os << "warning: N=" << r.n << " failed: " << r.error << '\n';
  }
  if (table.rows.size() < 2) os << "warning: fewer than two meshes, rates undefined\n";
  return table.partial() ? kExitNumerical : kExitOk;
}

inline int cmd_condnum(const RunConfig& cfg, std::ostream& os) {
  RunConfig local = cfg;
  if (local.cond == "none") local.cond = "estimate";
  const CaseDefinition c = build_case(local);
  const RunOptions opts = run_options(local);
  const auto dir = detail::prepare_out(local);

  std::ostringstream csv;
  csv << "N,h,cond,lower,upper,converged\n";
  std::vector<std::pair<double, double>> pts;
  json rows = json::array();
  bool warned = false;
  for (int n : c.ladder) {
    const Mesh mesh = build_unit_square_mesh(n);
    const AssembledForms forms = assemble_forms(c.spec, mesh);
    const FeFunction data = interpolate(c.exact.value, mesh);
    const Loads loads{assemble_load(c.spec.f, mesh, triangle_rule(c.spec.quad_degree)),
                      forms.s_omega * data.coefficients()};
    const SaddleSystem sys = build_system(forms, loads);
    const auto k = condition_number(
        sys, opts.cond == CondMode::exact ? ConditionMode::exact : ConditionMode::estimated,
        opts.cond_options);
    const double h = mesh_size(mesh);
    csv << n << ',' << io::format_double(h) << ',' << io::format_double(k.value) << ','
        << io::format_double(k.lower) << ',' << io::format_double(k.upper) << ','
        << (k.converged ? 1 : 0) << '\n';
    if (!k.converged) {
      warned = true;
      os << "warning: N=" << n << " iteration cap reached; K2 in [" << io::format_double(k.lower)
         << ", " << io::format_double(k.upper) << "]\n";
    }
    pts.emplace_back(h, k.value);
    json row = io::condition(k);
    row["N"] = n;
    row["h"] = h;
    rows.push_back(std::move(row));
  }
  detail::write_text(dir / "condnum.csv", csv.str());
  json summary = {{"case", c.name}, {"mode", local.cond}, {"rows", rows}};
  if (pts.size() >= 2) {
    const RateFit fit = estimate_rate(pts);
    summary["slope"] = fit.slope;
    summary["step_slopes"] = fit.steps;
  } else {
    summary["slope"] = nullptr;
    summary["step_slopes"] = json::array();
  }
  summary["warning"] = warned;
  detail::write_text(dir / "condnum.json", summary.dump(2) + "\n");
  os << summary["step_slopes"].dump() << '\n';
  return kExitOk;
}

inline int cmd_probe(const RunConfig& cfg, std::ostream& os) {
  const auto dir = detail::prepare_out(cfg);
  ThreeBallConfig ball;
  ball.center = cfg.center;
  ball.r1 = cfg.r1;
  ball.r2 = cfg.r2;
  ball.r3 = cfg.r3;
  if (cfg.ball_norm == "l2") ball.norm = BallNorm::l2;
  else if (cfg.ball_norm == "h1") ball.norm = BallNorm::h1;
  else throw ConfigError("ball_norm must be l2 or h1");

  json report = {{"probe", cfg.probe}, {"config", to_json(cfg)}};
  std::ostringstream csv;
  if (cfg.probe == "lemma") {
    const auto rep = audit_log_convexity(cfg.samples, cfg.seed);
    report["samples"] = rep.samples;
    report["violations"] = rep.violations;
    report["worst_ratio"] = rep.worst_ratio;
    csv << "samples,violations,worst_ratio\n"
        << rep.samples << ',' << rep.violations << ',' << io::format_double(rep.worst_ratio) << '\n';
    os << "violations " << rep.violations << " of " << rep.samples << '\n';
  } else if (cfg.probe == "kappa") {
    const double kappa = kappa_formula(cfg.r1, cfg.r2, cfg.r3, cfg.c3);
    report["kappa"] = kappa;
    csv << "r1,r2,r3,c3,kappa\n"
        << io::format_double(cfg.r1) << ',' << io::format_double(cfg.r2) << ','
        << io::format_double(cfg.r3) << ',' << io::format_double(cfg.c3) << ','
        << io::format_double(kappa) << '\n';
    os << kappa << '\n';
  } else if (cfg.probe == "harmonic") {
    ball.kappa = 0.5;
    const FamilySweep sweep = harmonic_family_sweep(cfg.max_degree, ball);
    report["calibrated_c3"] = sweep.c3;
    report["kappa"] = sweep.kappa;
    report["calibrated_constant"] = sweep.calibrated_constant;
    report["max_normalized_ratio"] = sweep.max_normalized;
    csv << "k,ratio\n";
    for (std::size_t i = 0; i < sweep.ratios.size(); ++i) {
      csv << sweep.degrees[i] << ',' << io::format_double(sweep.ratios[i]) << '\n';
    }
    os << "max ratio / calibrated constant " << sweep.max_normalized << '\n';
  } else if (cfg.probe == "fem") {
    ball.kappa = kappa_formula(cfg.r1, cfg.r2, cfg.r3, cfg.c3);
    const CaseDefinition c = build_case(cfg);
    const ProbeTrace trace = probe_fem_solution(c, ball);
    report["kappa"] = ball.kappa;
    report["exact_ratio"] = trace.exact_ratio;
    csv << "N,ratio\n";
    for (std::size_t i = 0; i < trace.ratios.size(); ++i) {
      csv << trace.cells[i] << ',' << io::format_double(trace.ratios[i]) << '\n';
    }
    os << "exact ratio " << trace.exact_ratio << '\n';
  } else {
    throw ConfigError("probe must be lemma, kappa, harmonic or fem");
  }
  detail::write_text(dir / "probe.csv", csv.str());
  detail::write_text(dir / "probe.json", report.dump(2) + "\n");
  return kExitOk;
}

/// Runs a command, mapping exceptions to exit codes. Failures are reported
/// on err as a one-line JSON object {"status": ..., "message": ...}.
template <class Command>
int run_guarded(Command&& cmd, const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto report = [&err](const char* status, const char* message) {
    err << json{{"status", status}, {"message", message}}.dump() << '\n';
  };
  try {
    return cmd(cfg, os);
  } catch (const ConfigError& ex) {
    report("config_error", ex.what());
    return kExitConfig;
  } catch (const NumericalError& ex) {
    report("numerical_failure", ex.what());
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& ex) {
    report("config_error", ex.what());
    return kExitConfig;
  }
}

}  // namespace ucfem::cli

#endif  // UCFEM_CLI_HPP
