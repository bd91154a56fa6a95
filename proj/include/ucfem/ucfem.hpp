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

#ifndef UCFEM_UCFEM_HPP
#define UCFEM_UCFEM_HPP

// Stabilized P1 finite elements for unique continuation of the
// convection-diffusion equation from interior data.

#include "ucfem/common.hpp"
#include "ucfem/condition.hpp"
#include "ucfem/experiments.hpp"
#include "ucfem/fe_space.hpp"
#include "ucfem/forms.hpp"
#include "ucfem/mesh.hpp"
#include "ucfem/quadrature.hpp"
#include "ucfem/region.hpp"
#include "ucfem/saddle.hpp"
#include "ucfem/stability_probe.hpp"

#endif  // UCFEM_UCFEM_HPP
