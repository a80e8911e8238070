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


#include <doctest.h>

#include <cmath>

#include "exact_sum.hpp"
#include "rng.hpp"

using diffscope::detail::ExactSum;
using diffscope::detail::Philox;

TEST_CASE("Philox4x32-10 known answers") {
  const Philox::Block zero = Philox::generate({0, 0, 0, 0}, {0, 0});
  CHECK(zero == Philox::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const Philox::Block ones = Philox::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                              {0xffffffffu, 0xffffffffu});
  CHECK(ones == Philox::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
}

TEST_CASE("streams are reproducible and distinct") {
  Philox a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 64; ++i) {
    const auto x = a.next_u32();
    CHECK(x == b.next_u32());
    differs_c |= x != c.next_u32();
    differs_d |= x != d.next_u32();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("uniforms lie strictly inside (0, 1) with the right mean") {
  Philox g(1, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = g.next_open01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("exact sums are order independent") {
  const double xs[] = {1e300, 1.0, -1e300, 1e-300, 3.5, -2.25, 5e-324};
  ExactSum forward, backward;
  for (double x : xs) forward.add(x);
  for (int i = 6; i >= 0; --i) backward.add(xs[i]);
  ExactSum diff = forward;
  diff.subtract(backward);
  CHECK(diff.is_zero());
  CHECK(forward.to_double() == doctest::Approx(2.25));

  ExactSum tiny;
  tiny.add(0.1, 10);
  ExactSum ten;
  for (int i = 0; i < 10; ++i) ten.add(0.1);
  ExactSum d2 = tiny;
  d2.subtract(ten);
  CHECK(d2.is_zero());
  ExactSum one;
  one.add(1.0);
  ExactSum d3 = ten;
  d3.subtract(one);
  CHECK_FALSE(d3.is_zero());  // ten copies of the double 0.1 do not sum to exactly 1
}
