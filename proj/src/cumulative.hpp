/**
 * Copyright 2026, The diffscope Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#pragma once

#include <functional>
#include <shared_mutex>
#include <vector>

#include "coords.hpp"

namespace diffscope::detail {

// x -> integral of f from a fixed anchor to x.
//
// Knots sit on a lattice with spacing 1/16 in the coordinate t of the map and
// are filled in lazily as queries reach further out; a query adds one
// Gauss-Kronrod integral from the nearest knot. Declared singular points are
// always segment endpoints. Thread-safe.
//
// In Log mode f is a log-integrand and the result is log of the unsigned
// integral between the anchor and x, so huge or tiny masses stay finite.
class CumulativeIntegral {
 public:
  enum class Mode { Linear, Log };

  CumulativeIntegral(std::function<double(double)> f, double anchor, CoordinateMap map,
                     std::vector<double> singular_points, Mode mode = Mode::Linear);

  double operator()(double x) const;

  double anchor() const { return anchor_; }

 private:
  struct Chain {
    std::vector<double> x;  // knot positions, moving away from the anchor
    std::vector<double> v;  // integral from the anchor to each knot
    bool exhausted = false;
  };

  double segment(double a, double b) const;
  double combine(double base, double add) const;
  double knot_x(int index, int dir) const;
  void extend(Chain& chain, int dir, int target) const;

  std::function<double(double)> f_;
  double anchor_;
  double t_anchor_;
  CoordinateMap map_;
  std::vector<double> singular_;
  Mode mode_;
  mutable std::shared_mutex mutex_;
  mutable Chain up_;
  mutable Chain down_;
};

}  // namespace diffscope::detail
