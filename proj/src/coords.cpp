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

#include "coords.hpp"

#include <cmath>

namespace diffscope::detail {

CoordinateMap::CoordinateMap(double l, double r) : l_(l), r_(r) {
  const bool lf = std::isfinite(l);
  const bool rf = std::isfinite(r);
  if (lf && rf) {
    kind_ = Kind::Bounded;
  } else if (lf) {
    kind_ = Kind::LowerBounded;
  } else if (rf) {
    kind_ = Kind::UpperBounded;
  } else {
    kind_ = Kind::Line;
  }
}

double CoordinateMap::to_t(double x) const {
  switch (kind_) {
    case Kind::Bounded: return std::log(x - l_) - std::log(r_ - x);
    case Kind::LowerBounded: return std::log(x - l_);
    case Kind::UpperBounded: return -std::log(r_ - x);
    case Kind::Line: return std::asinh(x);
  }
  return 0.0;
}

double CoordinateMap::to_x(double t) const {
  switch (kind_) {
    case Kind::Bounded: {
      const double w = r_ - l_;
      if (t < 0) {
        const double e = std::exp(t);
        return l_ + w * e / (1.0 + e);
      }
      return r_ - w / (1.0 + std::exp(t));
    }
    case Kind::LowerBounded: return l_ + std::exp(t);
    case Kind::UpperBounded: return r_ - std::exp(-t);
    case Kind::Line: return std::sinh(t);
  }
  return 0.0;
}

}  // namespace diffscope::detail
