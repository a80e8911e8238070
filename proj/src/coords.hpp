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

namespace diffscope::detail {

// Monotone reparametrisation of an open interval onto the real line. Uniform
// steps in t are geometric near finite endpoints and at infinity, and roughly
// uniform in the bulk; lattices and probe grids are built on it.
class CoordinateMap {
 public:
  CoordinateMap(double l, double r);

  double to_t(double x) const;
  double to_x(double t) const;

  double lower() const { return l_; }
  double upper() const { return r_; }

 private:
  enum class Kind { Bounded, LowerBounded, UpperBounded, Line };
  double l_;
  double r_;
  Kind kind_;
};

}  // namespace diffscope::detail
