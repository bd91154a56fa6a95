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

#ifndef UCFEM_REGION_HPP
#define UCFEM_REGION_HPP

#include "ucfem/common.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace ucfem {

/// Closed axis-aligned box [x0, x1] x [y0, y1].
struct Box {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  double area() const { return std::max(0.0, x1 - x0) * std::max(0.0, y1 - y0); }
};

/// Union of boxes minus a union of boxes, evaluated pointwise.
///
/// The region is treated as a closed set: points on the boundary of an
/// included box are inside, and points on the boundary of an excluded box
/// stay inside (only the interior of an excluded box is removed).
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<Box> include, std::vector<Box> exclude = {})
      : include_(std::move(include)), exclude_(std::move(exclude)) {}

  static Region whole_domain() { return Region({Box{0.0, 1.0, 0.0, 1.0}}); }

  bool contains(const Point& p) const {
    constexpr double tol = 1e-14;
    const bool in = std::any_of(include_.begin(), include_.end(), [&](const Box& b) {
      return p.x() >= b.x0 - tol && p.x() <= b.x1 + tol && p.y() >= b.y0 - tol &&
             p.y() <= b.y1 + tol;
    });
    if (!in) return false;
    return std::none_of(exclude_.begin(), exclude_.end(), [&](const Box& b) {
      return p.x() > b.x0 + tol && p.x() < b.x1 - tol && p.y() > b.y0 + tol &&
             p.y() < b.y1 - tol;
    });
  }

  bool operator()(const Point& p) const { return contains(p); }

  /// True when no included box has positive area.
  bool trivially_empty() const {
    return std::none_of(include_.begin(), include_.end(),
                        [](const Box& b) { return b.area() > 0.0; });
  }

  const std::vector<Box>& include() const { return include_; }
  const std::vector<Box>& exclude() const { return exclude_; }

 private:
  std::vector<Box> include_;
  std::vector<Box> exclude_;
};

}  // namespace ucfem

#endif  // UCFEM_REGION_HPP
