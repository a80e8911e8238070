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

#include <algorithm>
#include <cmath>
#include <limits>

#include "catalog.hpp"
#include "config.hpp"
#include "diffscope/error.hpp"
#include "diffscope/simulator.hpp"

using namespace diffscope;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RealFn c(double v) {
  return [v](double) { return v; };
}

DiffusionSpec catalog(const char* name) { return parse_model_config(catalog_lookup(name)).spec; }

// Expected exit time of the walk from every node: solves
// E_i = hold_i + p_i E_{i+1} + (1 - p_i) E_{i-1} with E = 0 at terminal nodes.
std::vector<double> exit_times(const GridModel& g) {
  const std::size_t n = g.size();
  std::vector<double> a(n, 0.0), b(n, 1.0), cc(n, 0.0), d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.terminal(i)) continue;
    const double p = static_cast<double>(g.up_threshold[i]) / 4294967296.0;
    if (i > 0) a[i] = -(1.0 - p);
    if (i + 1 < n) cc[i] = -p;
    d[i] = g.hold_mean[i];
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * cc[i - 1];
    d[i] -= w * d[i - 1];
  }
  std::vector<double> e(n);
  e[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) e[i] = (d[i] - cc[i] * e[i + 1]) / b[i];
  return e;
}

}  // namespace

TEST_CASE("grid structure") {
  const DiffusionSpec spec = catalog("sticky_bm");
  const GridModel g = build_grid(spec, 0.05, -1.0, 1.0);
  CHECK(std::is_sorted(g.x.begin(), g.x.end()));
  CHECK(g.x.front() == -1.0);
  CHECK(g.x.back() == 1.0);
  CHECK(g.x[g.start] == 0.0);
  CHECK(g.u[g.start] == 0.0);
  CHECK(g.lower_end == EndKind::Sentinel);
  CHECK(g.upper_end == EndKind::Sentinel);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.u[i] > g.u[i - 1]);
  CHECK(g.size() == 41);
}

TEST_CASE("walk Green function reproduces exit times exactly") {
  const GridModel bm = build_grid(catalog("bm"), 0.05, -1.0, 1.0);
  CHECK(exit_times(bm)[bm.start] == doctest::Approx(1.0).epsilon(1e-9));
  const GridModel sticky = build_grid(catalog("sticky_bm"), 0.05, -1.0, 1.0);
  CHECK(exit_times(sticky)[sticky.start] == doctest::Approx(3.0).epsilon(1e-9));
  const GridModel reflecting = build_grid(catalog("reflecting_bm"), 0.05, 0.0, 2.0);
  CHECK(reflecting.lower_end == EndKind::Reflecting);
  CHECK(reflecting.up_threshold[0] == 4294967296ULL);
  CHECK(exit_times(reflecting)[reflecting.start] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("Monte Carlo exit time and absorption split") {
  const GridModel g = build_grid(catalog("bm"), 0.05, -1.0, 1.0);
  const PathStats st = simulate_paths(g, kInf, 20000, 3);
  CHECK(std::fabs(st.mean_time - 1.0) < 4 * st.se_time);
  CHECK(st.frac_alive == 0.0);
  CHECK(std::fabs(st.mean_u) < 4 * st.se_u);

  DiffusionSpec at03 = catalog("bounded_bm_01");
  at03 = DiffusionSpec(at03.interval(), at03.scale(), at03.speed(), 0.3);
  const GridModel unit = build_grid(at03, 0.02, 0.0, 1.0);
  CHECK(unit.lower_end == EndKind::Absorbing);
  const PathStats split = simulate_paths(unit, kInf, 20000, 4);
  CHECK(std::fabs(split.frac_absorbed_upper - 0.3) < 4 * split.se_absorbed_upper);
  CHECK(split.frac_sentinel == 0.0);
}

TEST_CASE("natural scale gives a constant density") {
  const GridModel g = build_grid(catalog("bm"), 0.1, -3.0, 3.0);
  const SMDStats st = estimate_smd(g, 1.0, 2000, 5);
  CHECK(st.mean_z == 1.0);
  CHECK(st.se_z == 0.0);
  CHECK(st.mean_quadratic == 0.0);
}

TEST_CASE("density estimation needs beta") {
  const DiffusionSpec raw({-1.0, 1.0, true, true},
                          ScaleSpec::from_raw([](double x) { return x; }, c(1), std::nullopt, false),
                          SpeedSpec::lebesgue(c(1), {}, kInf, kInf), 0.0);
  const GridModel g = build_grid(raw, 0.1, -1.0, 1.0);
  CHECK_THROWS_AS((void)estimate_smd(g, 1.0, 10, 1), Error);
}

TEST_CASE("OU density stays a martingale") {
  const GridModel g = build_grid(catalog("ou"), 0.1, -8.0, 8.0);
  const SMDStats st = estimate_smd(g, 1.0, 20000, 6);
  CHECK(std::fabs(st.mean_z - 1.0) < 4 * st.se_z);
  CHECK(st.frac_sentinel == 0.0);
}

TEST_CASE("truncation checks") {
  const DiffusionSpec b3 = catalog("bessel3");
  CHECK_THROWS_AS((void)build_grid(b3, 0.1, 0.0, 10.0), Error);
  CHECK_THROWS_AS((void)build_grid(b3, 0.1, 2.0, 10.0), Error);
  CHECK_THROWS_AS((void)build_grid(b3, -0.1, 0.5, 10.0), Error);
}

TEST_CASE("results do not depend on the worker count") {
  const GridModel g = build_grid(catalog("bessel3"), 0.1, 0.01, 50.0);
  WalkOptions one;
  one.threads = 1;
  one.track_density = true;
  WalkOptions many = one;
  many.threads = 4;
  const auto a = run_walks(g, 1.0, 3000, 9, one);
  const auto b = run_walks(g, 1.0, 3000, 9, many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].log_z == b[i].log_z);
    CHECK(a[i].node == b[i].node);
    CHECK(a[i].time == b[i].time);
  }
}

TEST_CASE("exponential holding keeps the exit time") {
  const GridModel g = build_grid(catalog("bm"), 0.1, -1.0, 1.0);
  WalkOptions opts;
  opts.exponential_holding = true;
  const PathStats st = simulate_paths(g, kInf, 20000, 10, opts);
  CHECK(std::fabs(st.mean_time - 1.0) < 4 * st.se_time);
}

TEST_CASE("discrete occupation identity") {
  for (const char* name : {"ou", "bessel3", "gbm", "bm"}) {
    CAPTURE(name);
    const ModelConfig cfg = parse_model_config(catalog_lookup(name));
    const GridModel g = build_grid(cfg.spec, 0.05, cfg.simulation.truncation->first,
                                   cfg.simulation.truncation->second);
    for (std::uint64_t p = 0; p < 5; ++p) {
      const PathRecord rec = record_path(g, 1.0, 11, p);
      const OccupationCheck chk = discrete_occupation_identity_check(g, rec);
      CHECK(chk.exact);
      CHECK(chk.diff == 0.0);
      if (std::string(name) == "bm") CHECK(chk.lhs == 0.0);
    }
  }
}

TEST_CASE("candidate diffusion") {
  const DiffusionSpec spec = catalog("inverse_bessel3");
  const DiffusionSpec cand = candidate_diffusion(spec);
  CHECK(cand.natural_scale());
  CHECK(cand.scale().s(3.0) == 3.0);
  CHECK(cand.x0() == spec.x0());
  // speed s' dm: s' = 1 and rho = x^-4 for this model
  CHECK(cand.speed().density(2.0) == doctest::Approx(1.0 / 16.0));

  const GapStats bm = estimate_candidate_martingale_gap(catalog("bm"), 1.0, 20000, 12, 0.1, -10.0, 10.0);
  CHECK(std::fabs(bm.gap) < 4 * bm.se);
  CHECK(bm.contamination_ok);
}
