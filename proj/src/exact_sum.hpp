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

#include <cstdint>

#include <gmp.h>

namespace diffscope::detail {

// Exact sum of doubles as a fixed-point big integer scaled by 2^1200, so
// every finite double (including subnormals) is represented exactly and the
// result does not depend on summation order.
class ExactSum {
 public:
  ExactSum();
  ~ExactSum();
  ExactSum(const ExactSum& other);
  ExactSum& operator=(const ExactSum& other);

  void add(double x, std::uint64_t times = 1);
  void subtract(const ExactSum& other);
  bool is_zero() const;
  // Nearest-below double of the exact value.
  double to_double() const;

 private:
  mpz_t value_;
};

}  // namespace diffscope::detail
