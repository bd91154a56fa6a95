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

#include "ucfem/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

using ucfem::cli::RunConfig;

struct Flags {
  std::string config_file;
  std::string case_name;
  std::vector<int> ladder;
  std::optional<int> cells;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> noise;
  std::optional<double> boundary_factor;
  std::optional<std::string> cond;
  std::optional<int> cond_max_iter;
  std::optional<std::string> projection;
  std::optional<std::string> h1;
  std::optional<int> quad_degree;
  std::optional<std::string> probe;
  std::optional<int> samples;
  std::optional<double> r1, r2, r3, c3;
  std::optional<int> max_degree;
  std::optional<std::string> ball_norm;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_file, "JSON config file; flags override its values");
  sub->add_option("--case", f.case_name, "builtin case, e.g. ex1_beta_c");
  sub->add_option("--ladder", f.ladder, "mesh ladder (cells per side)")->delimiter(',');
  sub->add_option("--seed", f.seed, "noise / audit seed");
  sub->add_option("--noise", f.noise, "data noise")->check(CLI::IsMember({"none", "sqrt_h", "h"}));
  sub->add_option("--boundary-factor", f.boundary_factor, "factor on the boundary term of s_*");
  sub->add_option("--cond", f.cond, "condition number mode")
      ->check(CLI::IsMember({"none", "exact", "estimate"}));
  sub->add_option("--cond-max-iter", f.cond_max_iter, "iteration cap of the K2 estimate");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--projection", f.projection, "reference for e_h = P u - u_h")
      ->check(CLI::IsMember({"l2", "nodal"}));
  sub->add_option("--h1", f.h1, "H1 error norm")->check(CLI::IsMember({"full", "semi"}));
  sub->add_option("--quad-degree", f.quad_degree, "triangle quadrature degree");
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config_file.empty()) cfg = ucfem::cli::load_config_file(f.config_file, cfg);
  if (!f.case_name.empty()) cfg.case_name = f.case_name;
  if (!f.ladder.empty()) cfg.ladder = f.ladder;
  if (f.cells) cfg.cells = *f.cells;
  if (f.out) cfg.out_dir = *f.out;
  if (f.seed) cfg.seed = *f.seed;
  if (f.noise) cfg.noise = *f.noise;
  if (f.boundary_factor) cfg.boundary_factor = *f.boundary_factor;
  if (f.cond) cfg.cond = *f.cond;
  if (f.cond_max_iter) cfg.cond_max_iter = *f.cond_max_iter;
  if (f.projection) cfg.projection = *f.projection;
  if (f.h1) cfg.h1 = *f.h1;
  if (f.quad_degree) cfg.quad_degree = *f.quad_degree;
  if (f.probe) cfg.probe = *f.probe;
  if (f.samples) cfg.samples = *f.samples;
  if (f.r1) cfg.r1 = *f.r1;
  if (f.r2) cfg.r2 = *f.r2;
  if (f.r3) cfg.r3 = *f.r3;
  if (f.c3) cfg.c3 = *f.c3;
  if (f.max_degree) cfg.max_degree = *f.max_degree;
  if (f.ball_norm) cfg.ball_norm = *f.ball_norm;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized FEM for unique continuation of convection-diffusion"};
  app.require_subcommand(1);
  Flags f;

  auto* mesh_info = app.add_subcommand("mesh-info", "print mesh counts and h as JSON");
  mesh_info->add_option("--N", f.cells, "cells per side")->required();
  mesh_info->add_option("--out", f.out, "also write mesh.json here");

  auto* solve = app.add_subcommand("solve", "solve one mesh, write u_h, z_h and diagnostics");
  add_common(solve, f);
  solve->add_option("--N", f.cells, "cells per side (default 32)");

  auto* conv = app.add_subcommand("convergence", "run a mesh ladder and fit rates");
  add_common(conv, f);

  auto* cond = app.add_subcommand("condnum", "condition numbers along a mesh ladder");
  add_common(cond, f);

  auto* probe = app.add_subcommand("probe", "stability probes");
  add_common(probe, f);
  probe->add_option("--probe", f.probe, "probe kind")
      ->check(CLI::IsMember({"lemma", "kappa", "harmonic", "fem"}));
  probe->add_option("--samples", f.samples, "lemma audit sample count");
  probe->add_option("--r1", f.r1, "inner ball radius");
  probe->add_option("--r2", f.r2, "middle ball radius");
  probe->add_option("--r3", f.r3, "outer ball radius");
  probe->add_option("--c3", f.c3, "constant in the kappa formula");
  probe->add_option("--max-degree", f.max_degree, "harmonic family size");
  probe->add_option("--ball-norm", f.ball_norm)->check(CLI::IsMember({"l2", "h1"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ucfem::cli::kExitConfig;
  }

  using namespace ucfem::cli;
  RunConfig cfg;
  const int rc = run_guarded(
      [&](const RunConfig&, std::ostream&) {
        cfg = resolve(f);
        return 0;
      },
      cfg, std::cout, std::cerr);
  if (rc != 0) return rc;
  if (*mesh_info) {
    if (!f.out) cfg.out_dir.clear();
    return run_guarded(cmd_mesh_info, cfg, std::cout, std::cerr);
  }
  if (*solve) return run_guarded(cmd_solve, cfg, std::cout, std::cerr);
  if (*conv) return run_guarded(cmd_convergence, cfg, std::cout, std::cerr);
  if (*cond) return run_guarded(cmd_condnum, cfg, std::cout, std::cerr);
  return run_guarded(cmd_probe, cfg, std::cout, std::cerr);
}
