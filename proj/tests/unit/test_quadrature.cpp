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
#include <limits>

#include "diffscope/error.hpp"
#include "diffscope/quadrature.hpp"

using namespace diffscope;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("adaptive Gauss-Kronrod on smooth and endpoint-singular integrands") {
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10).value ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK_THROWS_AS(integrate_adaptive([](double) { return std::nan(""); }, 0.0, 1.0, 1e-8), Error);
}

TEST_CASE("log-space integration beyond the double range") {
  // integral of exp(x^2) on [30, 31] is about exp(961) / 62.
  const LogQuadResult r = integrate_log([](double x) { return x * x; }, 30.0, 31.0, 1e-10);
  const double expected = 961.0 - std::log(62.0) + std::log1p(-std::exp(-61.0) * 0.0);
  CHECK(r.log_value == doctest::Approx(expected).epsilon(1e-3));
  const LogQuadResult one = integrate_log([](double) { return 0.0; }, 0.0, 3.0, 1e-12);
  CHECK(std::exp(one.log_value) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("power tails at a finite boundary") {
  struct Case {
    double p;
    Outcome outcome;
  };
  for (const Case c : {Case{-1.5, Outcome::Infinite}, Case{-1.2, Outcome::Infinite},
                       Case{-0.5, Outcome::Finite}, Case{0.0, Outcome::Finite},
                       Case{1.0, Outcome::Finite}}) {
    CAPTURE(c.p);
    const IntegralVerdict v = decide_improper([p = c.p](double x) { return std::pow(x, p); }, 0.0, 1.0);
    CHECK(v.outcome == c.outcome);
    REQUIRE(v.tail_exponent.has_value());
    CHECK(std::fabs(*v.tail_exponent - c.p) <= 0.05);
    if (c.outcome == Outcome::Finite) CHECK(v.value == doctest::Approx(1.0 / (c.p + 1.0)).epsilon(1e-6));
  }
}

TEST_CASE("1/x diverges logarithmically") {
  const IntegralVerdict v = decide_improper([](double x) { return 1.0 / x; }, 0.0, 1.0);
  CHECK(v.infinite());
  CHECK(v.divergence == DivergenceKind::LogTail);
}

TEST_CASE("tails at infinity") {
  CHECK(decide_improper([](double x) { return std::pow(x, -1.5); }, kInf, 1.0).value ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK(decide_improper([](double x) { return 1.0 / x; }, kInf, 1.0).infinite());
  CHECK(decide_improper([](double x) { return std::exp(-x); }, kInf, 0.0).value ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(decide_improper_log([](double x) { return x * x; }, kInf, 0.0).infinite());
  CHECK(decide_improper_log([](double x) { return -x * x; }, -kInf, 0.0).value ==
        doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-8));
}

TEST_CASE("verdicts do not depend on the anchor") {
  for (double anchor : {0.5, 1.0, 3.0}) {
    CHECK(decide_improper([](double x) { return std::pow(x, -1.2); }, 0.0, anchor).infinite());
    CHECK(decide_improper([](double x) { return std::pow(x, -0.8); }, 0.0, anchor).finite());
  }
}

TEST_CASE("deterministic") {
  auto f = [](double x) { return std::pow(x, -0.7) * (1.0 + x); };
  const IntegralVerdict a = decide_improper(f, 0.0, 1.0);
  const IntegralVerdict b = decide_improper(f, 0.0, 1.0);
  CHECK(a.value == b.value);
  CHECK(a.levels_used == b.levels_used);
}

TEST_CASE("configuration invariants") {
  ImproperConfig cfg;
  cfg.ratio = 1.5;
  CHECK_THROWS_AS(cfg.check(), Error);
}

TEST_CASE("local square integrability finds declared singular points") {
  const Compact compact{-1.0, 1.0};
  const double singular = 0.0;
  auto bad = check_local_sq_integrability([](double x) { return 1.0 / x; }, {&compact, 1}, {&singular, 1});
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].verdict.infinite());
  auto good = check_local_sq_integrability([](double x) { return std::pow(std::fabs(x), -0.25); },
                                           {&compact, 1}, {&singular, 1});
  CHECK(good[0].verdict.finite());
}
