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

// Three-ball ratios of harmonic polynomials Re((z - z0)^k), with the exponent
// calibrated on k = 1, in both the L2 and the H1 norm.

#include "ucfem/stability_probe.hpp"

#include <cstdio>

int main() {
  for (auto norm : {ucfem::BallNorm::l2, ucfem::BallNorm::h1}) {
    ucfem::ThreeBallConfig cfg;
    cfg.norm = norm;
    const auto sweep = ucfem::harmonic_family_sweep(8, cfg);
    std::printf("%s norm: C3 = %.4f, kappa = %.4f\n", norm == ucfem::BallNorm::l2 ? "L2" : "H1", sweep.c3,
                sweep.kappa);
    for (std::size_t i = 0; i < sweep.degrees.size(); ++i) {
      std::printf("  k = %d  ratio %.6f\n", sweep.degrees[i], sweep.ratios[i]);
    }
  }
  return 0;
}
