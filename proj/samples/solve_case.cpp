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

// Solves one built-in case on a single mesh and prints the errors on the
// target region. Usage: solve_case [case] [cells per side]

#include "ucfem/ucfem.hpp"

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
  const std::string name = argc > 1 ? argv[1] : "ex2_beta_nc";
  const int cells = argc > 2 ? std::stoi(argv[2]) : 32;
  try {
    const ucfem::CaseDefinition c = ucfem::find_case(name);
    const ucfem::Mesh mesh = ucfem::build_unit_square_mesh(cells);
    const ucfem::AssembledForms forms = ucfem::assemble_forms(c.spec, mesh);
    const ucfem::FeFunction data = ucfem::interpolate(c.exact.value, mesh);
    const ucfem::SaddleSystem system =
        ucfem::build_system(forms, ucfem::assemble_loads(c.spec, mesh, forms.h, data));
    const ucfem::Solution sol = ucfem::solve(system);

    const auto err = ucfem::error_norms(c.exact.smooth(), sol.u, c.spec.target);
    const auto ref = ucfem::norms(c.exact.smooth(), mesh, c.spec.target);
    std::printf("%s  N=%d  h=%.4f  Pe=%.3f\n", c.name.c_str(), cells, forms.h, forms.beta_norm * forms.h / c.spec.mu);
    std::printf("relative L2(B) error  %.4e\n", err.l2 / ref.l2);
    std::printf("relative H1(B) error  %.4e\n", err.h1 / ref.h1);
    std::printf("residual              %.2e\n", sol.diagnostics.residual);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
