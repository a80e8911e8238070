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
#include "diffscope/model.hpp"

using namespace diffscope;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RealFn c(double v) {
  return [v](double) { return v; };
}

DiffusionSpec bessel3() {
  return DiffusionSpec({0.0, kInf, false, false},
                       ScaleSpec::from_ito([](double x) { return 1.0 / x; }, c(1), 1.0),
                       SpeedSpec::scale_relative(c(1), {}, kInf, 0.0), 1.0);
}

bool has_kind(const std::vector<Violation>& vs, const std::string& kind) {
  for (const Violation& v : vs) {
    if (v.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("natural scale from zero drift") {
  const DiffusionSpec bm({-kInf, kInf}, ScaleSpec::from_ito(c(0), c(1), 0.0),
                         SpeedSpec::scale_relative(c(1)), 0.0);
  for (double x : {-3.0, 0.5, 7.0}) {
    const ScaleValues v = eval_scale(bm, x);
    CHECK(v.s == doctest::Approx(x));
    CHECK(v.s_prime == doctest::Approx(1.0));
    REQUIRE(v.beta.has_value());
    CHECK(*v.beta == 0.0);
  }
  CHECK(bm.natural_scale());
}

TEST_CASE("Bessel-3 scale closed forms") {
  const DiffusionSpec spec = bessel3();
  const ScaleValues v = eval_scale(spec, 2.0);
  CHECK(v.s == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(v.s_prime == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(*v.beta == doctest::Approx(-1.0));
  for (double x : {0.01, 0.3, 5.0, 80.0}) {
    CHECK(spec.scale().s(x) == doctest::Approx(1.0 - 1.0 / x).epsilon(1e-9));
    CHECK(spec.scale().beta(x) == -2.0 / x);
  }
  CHECK_FALSE(spec.natural_scale());
}

TEST_CASE("OU scale derivative grows like exp(x^2)") {
  const DiffusionSpec ou({-kInf, kInf}, ScaleSpec::from_ito([](double x) { return -x; }, c(1), 0.0),
                         SpeedSpec::scale_relative(c(1)), 0.0);
  CHECK(ou.scale().log_s_prime(5.0) == doctest::Approx(25.0).epsilon(1e-9));
  CHECK(ou.scale().log_s_prime(-3.0) == doctest::Approx(9.0).epsilon(1e-9));
  CHECK(ou.scale().beta(1.5) == 3.0);
}

TEST_CASE("raw form without beta") {
  const DiffusionSpec raw({-1.0, 1.0},
                          ScaleSpec::from_raw([](double x) { return x * x * x + x; },
                                              [](double x) { return 3 * x * x + 1; }, std::nullopt, false),
                          SpeedSpec::lebesgue(c(1)), 0.0);
  const ScaleValues v = eval_scale(raw, 0.5);
  CHECK(v.s == doctest::Approx(0.625));
  CHECK(v.s_prime == doctest::Approx(1.75));
  CHECK_FALSE(v.beta.has_value());
}

TEST_CASE("evaluation outside the interior") {
  const DiffusionSpec spec = bessel3();
  CHECK_THROWS_AS((void)eval_scale(spec, -1.0), Error);
  try {
    (void)eval_scale(spec, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  const DiffusionSpec sing({-1.0, 1.0}, ScaleSpec::from_beta(c(0), 0.5, {0.0}), SpeedSpec::lebesgue(c(1)), 0.5);
  try {
    (void)eval_scale(sing, 0.0);
    FAIL("expected SingularPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularPoint);
  }
}

TEST_CASE("affine transforms act on s and s' only") {
  const DiffusionSpec spec = bessel3();
  const ScaleSpec t = spec.scale().affine(3.0, -1.0);
  for (double x : {0.2, 2.0, 9.0}) {
    CHECK(t.s(x) == doctest::Approx(3.0 * spec.scale().s(x) - 1.0));
    CHECK(t.s_prime(x) == doctest::Approx(3.0 * spec.scale().s_prime(x)));
    CHECK(t.beta(x) == doctest::Approx(spec.scale().beta(x)));
  }
}

TEST_CASE("anchor shift changes s' by a positive factor") {
  auto mu = [](double x) { return 1.0 / x; };
  const ScaleSpec a = ScaleSpec::from_ito(mu, c(1), 1.0).bound_to({0.0, kInf});
  const ScaleSpec b = ScaleSpec::from_ito(mu, c(1), 2.0).bound_to({0.0, kInf});
  const double ratio = a.s_prime(0.5) / b.s_prime(0.5);
  for (double x : {0.1, 1.0, 4.0}) CHECK(a.s_prime(x) / b.s_prime(x) == doctest::Approx(ratio));
}

TEST_CASE("measure masses") {
  const DiffusionSpec spec = bessel3();
  CHECK(measure_mass(spec, 1.0, 2.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-9));
  const DiffusionSpec sticky({-kInf, kInf}, ScaleSpec::from_ito(c(0), c(1), 0.0),
                             SpeedSpec::scale_relative(c(1), {{0.0, 2.0}}), 0.0);
  CHECK(measure_mass(sticky, -1.0, 1.0) == doctest::Approx(4.0));
  CHECK(measure_mass(sticky, -1.0, 0.0) + measure_mass(sticky, 0.0, 1.0) - 2.0 ==
        doctest::Approx(measure_mass(sticky, -1.0, 1.0)));
  const DiffusionSpec absorbed({0.0, kInf, true, false}, ScaleSpec::from_ito(c(0), c(1), 1.0),
                               SpeedSpec::scale_relative(c(1), {}, kInf, 0.0), 1.0);
  CHECK(measure_mass(absorbed, 0.0, 1.0) == kInf);
  CHECK(measure_mass(absorbed, 0.5, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("special points and anchors") {
  const DiffusionSpec spec({0.0, kInf}, ScaleSpec::from_ito(c(0), c(1), 1.0),
                           SpeedSpec::scale_relative(c(1), {{3.0, 1.0}}), 1.0);
  const std::vector<double> pts = spec.special_points();
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == 1.0);
  CHECK(pts[1] == 3.0);
  CHECK(spec.boundary_anchor(Side::Lower) == doctest::Approx(0.5));
  CHECK(spec.boundary_anchor(Side::Upper) > 3.0);
}

TEST_CASE("validation") {
  CHECK(validate(bessel3()).empty());

  const DiffusionSpec at_l({0.0, kInf}, ScaleSpec::from_ito(c(0), c(1), 1.0),
                           SpeedSpec::scale_relative(c(1)), 0.0);
  CHECK(has_kind(validate(at_l), "StartNotInterior"));

  const DiffusionSpec hole({-1.0, 2.0}, ScaleSpec::from_beta(c(0), 1.5),
                           SpeedSpec::lebesgue([](double x) { return x > 0.0 && x < 1.0 ? 0.0 : 1.0; }),
                           1.5);
  const auto vs = validate(hole);
  REQUIRE(has_kind(vs, "SpeedNotPositive"));
  for (const Violation& v : vs) {
    if (v.kind == "SpeedNotPositive") {
      REQUIRE(v.witness.has_value());
      CHECK(*v.witness > 0.0);
      CHECK(*v.witness < 1.0);
    }
  }

  const DiffusionSpec neg({-1.0, 1.0}, ScaleSpec::from_ito(c(0), [](double x) { return x; }, 0.5),
                          SpeedSpec::scale_relative(c(1)), 0.5);
  CHECK(has_kind(validate(neg), "NonPositiveDiffusion"));

  const DiffusionSpec bad_atom({-1.0, 1.0}, ScaleSpec::from_beta(c(0), 0.0),
                               SpeedSpec::lebesgue(c(1), {{1.0, 1.0}}), 0.0);
  CHECK(has_kind(validate(bad_atom), "AtomNotInterior"));

  const DiffusionSpec closed_inf({0.0, kInf, false, true}, ScaleSpec::from_beta(c(0), 1.0),
                                 SpeedSpec::lebesgue(c(1)), 1.0);
  CHECK(has_kind(validate(closed_inf), "InfiniteEndpointClosed"));
}
