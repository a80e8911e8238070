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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalog.hpp"
#include "config.hpp"
#include "diffscope/boundary.hpp"
#include "diffscope/classifier.hpp"
#include "diffscope/simulator.hpp"
#include "report.hpp"

using namespace diffscope;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Result {
  bool pass = false;
  std::string detail;
};

json load(const char* file) {
  std::ifstream f(std::string(DIFFSCOPE_FIXTURES) + "/" + file);
  if (!f) throw std::runtime_error(std::string("missing fixture ") + file);
  return json::parse(f);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

json verdict_values(const ArbitrageReport& r) {
  return {{"nupbr_finite", to_string(r.nupbr_finite.value)},
          {"nflvr_finite", to_string(r.nflvr_finite.value)},
          {"emm_finite", to_string(r.emm_finite.value)},
          {"nupbr_infinite", to_string(r.nupbr_infinite.value)},
          {"nflvr_infinite", to_string(r.nflvr_infinite.value)},
          {"emm_infinite", to_string(r.emm_infinite.value)}};
}

ModelConfig model(const std::string& name) { return parse_model_config(catalog_lookup(name)); }

ModelConfig model_at(const std::string& name, double x0) {
  json doc = catalog_lookup(name);
  doc["x0"] = x0;
  return parse_model_config(doc);
}

bool within(double value, double target, double se, double k = 3.0) {
  return std::fabs(value - target) <= k * se;
}

const char* const kCatalog[] = {"bm",  "absorbed_bm", "reflecting_bm", "sticky_bm",      "gbm",
                                "ou",  "bessel3",     "inverse_bessel3", "bounded_bm_01"};

Result catalog_table() {
  const json fixture = load("catalog_verdicts.json");
  int mismatches = 0, inconclusive = 0;
  std::string first;
  for (const auto& [name, row] : fixture["models"].items()) {
    const ModelConfig cfg = model(name);
    const json got = verdict_values(classify(cfg.spec, cfg.quadrature));
    for (const auto& [k, v] : got.items()) {
      if (v == "inconclusive") ++inconclusive;
    }
    if (got != row["verdicts"]) {
      ++mismatches;
      if (first.empty()) first = " first mismatch: " + name;
    }
  }
  return {mismatches == 0 && inconclusive == 0,
          fmt("%zu models, %d mismatches, %d inconclusive", fixture["models"].size(), mismatches,
              inconclusive) +
              first};
}

bool cites(const Verdict& v, const char* clause, Side side, Truth satisfied) {
  for (const TraceEntry& t : v.trace) {
    if (t.clause == clause && t.side == side && t.satisfied == satisfied) return true;
  }
  return false;
}

Result bessel_headline() {
  const ModelConfig cfg = model("bessel3");
  const ArbitrageReport r = classify(cfg.spec, cfg.quadrature);
  const bool verdicts = r.nupbr_finite.value == Truth::Holds && r.nflvr_finite.value == Truth::Fails;
  const bool inaccessible = r.lower.accessibility == Accessibility::Inaccessible &&
                            cites(r.nupbr_finite, "2.8(i.b)", Side::Lower, Truth::Holds);
  // Weighted beta integral infinite; weighted speed integral finite, so the
  // divergence required by the inaccessible-boundary clause is absent.
  const bool integrals = r.lower.weighted_beta.infinite() && r.lower.weighted_speed.finite() &&
                         cites(r.nflvr_finite, "2.8(ii.b)", Side::Lower, Truth::Fails);
  return {verdicts && inaccessible && integrals,
          fmt("NUPBR=%s NFLVR=%s access(0)=%s weighted_beta=%s weighted_speed=%s",
              to_string(r.nupbr_finite.value), to_string(r.nflvr_finite.value),
              to_string(r.lower.accessibility), to_string(r.lower.weighted_beta.outcome),
              to_string(r.lower.weighted_speed.outcome))};
}

Result quadrature_calibration() {
  bool ok = true;
  std::string detail;
  for (double p : {-1.5, -1.2, -0.5, 0.0, 1.0}) {
    const IntegralVerdict v = decide_improper([p](double x) { return std::pow(x, p); }, 0.0, 1.0);
    const bool right = (p > -1.0) ? v.finite() : v.infinite();
    const bool slope = v.tail_exponent && std::fabs(*v.tail_exponent - p) <= 0.05;
    ok = ok && right && slope;
    detail += fmt("p=%g:%s/%.3f ", p, to_string(v.outcome), v.tail_exponent.value_or(NAN));
  }
  const IntegralVerdict inv = decide_improper([](double x) { return 1.0 / x; }, 0.0, 1.0);
  ok = ok && inv.infinite();
  detail += fmt("1/x:%s", to_string(inv.outcome));
  return {ok, detail};
}

Result fuzz_audit() {
  std::mt19937_64 gen(20260419);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  std::uniform_real_distribution<double> coef(0.25, 2.0);
  std::bernoulli_distribution sign(0.5);
  int conclusive = 0, violations = 0, failures = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const double p = expo(gen), q = expo(gen);
    const double c = sign(gen) ? coef(gen) : -coef(gen);
    try {
      const DiffusionSpec spec(
          {0.0, kInf, false, false},
          ScaleSpec::from_beta([c, p](double x) { return c * std::pow(x, p); }, 1.0),
          SpeedSpec::from_log_density([q](double x) { return q * std::log(x); }, {}, kInf, 0.0),
          1.0);
      const AuditResult audit = consistency_audit(boundary_report(spec, Side::Lower));
      if (audit.skipped) continue;
      ++conclusive;
      if (!audit.inconsistencies.empty()) ++violations;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  const double frac = static_cast<double>(conclusive) / n;
  return {violations == 0 && frac >= 0.9,
          fmt("%d models, %d conclusive (%.1f%%), %d inconsistencies, %d errors", n, conclusive,
              100 * frac, violations, failures)};
}

Result invariance() {
  int changed = 0, checked = 0;
  std::string first;
  for (const char* name : kCatalog) {
    const ModelConfig cfg = model(name);
    const json base = verdict_values(classify(cfg.spec, cfg.quadrature));
    std::vector<DiffusionSpec> variants;
    for (double alpha : {0.5, 3.0}) {
      for (double shift : {-1.0, 2.0}) {
        variants.push_back(cfg.spec.with_scale(cfg.spec.scale().affine(alpha, shift)));
      }
    }
    // Atom at the midpoint of the interval, or of [x0, x0 + 2] on unbounded sides.
    const StateInterval& J = cfg.spec.interval();
    const double lo = std::isfinite(J.l) ? J.l : cfg.spec.x0() - 2.0;
    const double hi = std::isfinite(J.r) ? J.r : cfg.spec.x0() + 2.0;
    double z = 0.5 * (lo + hi);
    if (z == cfg.spec.x0()) z = 0.5 * (z + hi);
    std::vector<Atom> atoms = cfg.spec.speed().atoms();
    atoms.push_back({z, 1.0});
    variants.push_back(cfg.spec.with_speed(cfg.spec.speed().with_atoms(atoms)));
    for (const DiffusionSpec& v : variants) {
      ++checked;
      if (verdict_values(classify(v, cfg.quadrature)) != base) {
        ++changed;
        if (first.empty()) first = std::string(" first change: ") + name;
      }
    }
  }
  return {changed == 0, fmt("%d transformed models, %d verdict changes", checked, changed) + first};
}

json simulate(const ModelConfig& cfg, SimulationMode mode, double h, std::uint64_t paths,
              std::optional<std::pair<double, double>> interval = std::nullopt,
              std::optional<double> T = std::nullopt) {
  SimulationRequest req;
  req.mode = mode;
  req.h = h;
  req.n_paths = paths;
  req.seed = 1;
  req.interval = interval;
  req.T = T;
  return run_simulate(cfg, req);
}

Result simulator_calibration(const json& oracle) {
  const json bm = simulate(model("bm"), SimulationMode::Exit, 0.01, 100000, std::make_pair(-1.0, 1.0));
  const double t_bm = bm["stats"]["mean_time"];
  const double want_bm = oracle["bm_exit_time_from_0_of_m1_1"];
  const json sticky =
      simulate(model("sticky_bm(gamma=2)"), SimulationMode::Exit, 0.01, 100000, std::make_pair(-1.0, 1.0));
  const double t_sticky = sticky["stats"]["mean_time"];
  const double want_sticky = oracle["sticky_bm_exit_time_gamma2"];
  const json split = simulate(model_at("bm", 0.3), SimulationMode::Exit, 0.01, 100000, std::make_pair(0.0, 1.0));
  const double up = split["stats"]["frac_upper"], se_up = split["stats"]["std_err_upper"];
  const double want_split = oracle["bm_absorption_upper_from_0.3_on_0_1"];
  const bool ok = std::fabs(t_bm / want_bm - 1) <= 0.02 && std::fabs(t_sticky / want_sticky - 1) <= 0.02 &&
                  within(up, want_split, se_up);
  return {ok, fmt("bm exit %.4f (target %.1f), sticky exit %.4f (target %.1f), split %.4f +- %.4f "
                  "(target %.1f)",
                  t_bm, want_bm, t_sticky, want_sticky, up, se_up, want_split)};
}

Result smd_cross_validation(const json& oracle) {
  const json ou = simulate(model("ou"), SimulationMode::Smd, 0.02, 100000, std::nullopt, 1.0);
  const double z_ou = ou["stats"]["mean_Z_T"], se_ou = ou["stats"]["std_err"];
  const json b3 = simulate(model("bessel3"), SimulationMode::Smd, 0.02, 100000, std::nullopt, 1.0);
  const double z_b3 = b3["stats"]["mean_Z_T"], se_b3 = b3["stats"]["std_err"];
  const double want_b3 = oracle["bessel3_density_mean_T1"];
  const json nat = simulate(model("bm"), SimulationMode::Smd, 0.05, 10000, std::nullopt, 1.0);
  bool unit = nat["stats"]["mean_Z_T"] == 1.0 && nat["stats"]["std_err"] == 0.0;
  for (const auto& [k, v] : nat["stats"]["z_quantiles"].items()) unit = unit && v == 1.0;
  const bool clean = ou["valid_for_acceptance"] == true && b3["valid_for_acceptance"] == true;
  return {within(z_ou, 1.0, se_ou) && within(z_b3, want_b3, se_b3) && unit && clean,
          fmt("ou %.4f +- %.4f (target 1), bessel3 %.4f +- %.4f (target %.5f), natural scale Z==1: %s",
              z_ou, se_ou, z_b3, se_b3, want_b3, unit ? "yes" : "no")};
}

Result emm_gap(const json& oracle) {
  const ModelConfig ib = model("inverse_bessel3");
  const json g = simulate(ib, SimulationMode::Gap, 0.02, 100000, std::nullopt, 1.0);
  const double gap = g["stats"]["gap"], se = g["stats"]["std_err"];
  const double want = oracle["inverse_bessel3_gap_T1"];
  const ModelConfig bm = model("bm");
  const json gb = simulate(bm, SimulationMode::Gap, 0.02, 100000, std::nullopt, 1.0);
  const double gap_bm = gb["stats"]["gap"], se_bm = gb["stats"]["std_err"];
  const bool verdicts = classify(ib.spec).emm_finite.value == Truth::Fails &&
                        classify(bm.spec).emm_finite.value == Truth::Holds;
  return {within(gap, want, se) && within(gap_bm, 0.0, se_bm) && verdicts,
          fmt("inverse_bessel3 gap %.4f +- %.4f (target %.4f), bm gap %.4f +- %.4f (target 0)", gap, se,
              want, gap_bm, se_bm)};
}

Result occupation_identity() {
  int paths = 0, bad = 0, models = 0;
  for (const char* name : kCatalog) {
    const ModelConfig cfg = model(name);
    if (!cfg.spec.scale().has_beta()) continue;
    ++models;
    const auto [lo, hi] = default_truncation(cfg.spec);
    const GridModel grid = build_grid(cfg.spec, 0.05, lo, hi);
    for (std::uint64_t i = 0; i < 100; ++i) {
      const PathRecord rec = record_path(grid, 1.0, 99, i);
      const OccupationCheck c = discrete_occupation_identity_check(grid, rec);
      ++paths;
      if (!c.exact || c.diff != 0.0) ++bad;
    }
  }
  return {bad == 0 && models > 0, fmt("%d models, %d paths, %d nonzero differences", models, paths, bad)};
}

Result determinism() {
  int compared = 0, differ = 0;
  for (const char* name : kCatalog) {
    const ModelConfig cfg = model(name);
    ++compared;
    if (run_classify(cfg).report.dump() != run_classify(cfg).report.dump()) ++differ;
  }
  const ModelConfig b3 = model("bessel3");
  const ModelConfig sticky = model("sticky_bm(gamma=2)");
  std::vector<std::string> first;
  for (const char* threads : {"1", "3"}) {
    ::setenv("DIFFSCOPE_THREADS", threads, 1);
    for (int rep = 0; rep < 2; ++rep) {
      std::string run = simulate(b3, SimulationMode::Smd, 0.05, 5000).dump();
      run += simulate(b3, SimulationMode::Gap, 0.05, 5000).dump();
      run += simulate(sticky, SimulationMode::Exit, 0.05, 5000, std::make_pair(-1.0, 1.0)).dump();
      run += simulate(sticky, SimulationMode::Paths, 0.05, 5000).dump();
      first.push_back(run);
    }
  }
  ::unsetenv("DIFFSCOPE_THREADS");
  for (const std::string& run : first) {
    ++compared;
    if (run != first.front()) ++differ;
  }
  return {differ == 0, fmt("%d comparisons (classify reports; simulate at 1 and 3 threads), %d differ",
                           compared, differ)};
}

}  // namespace

int main() {
  const json oracle = load("oracles.json");
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no time limit
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "catalog verdict table", 10, catalog_table},
      {2, "Bessel-3 headline", 0, bessel_headline},
      {3, "quadrature calibration", 1, quadrature_calibration},
      {4, "boundary consistency fuzz audit", 60, fuzz_audit},
      {5, "invariance suite", 0, invariance},
      {6, "simulator calibration", 120, [&] { return simulator_calibration(oracle); }},
      {7, "density process cross-validation", 300, [&] { return smd_cross_validation(oracle); }},
      {8, "martingale gap", 0, [&] { return emm_gap(oracle); }},
      {9, "discrete occupation identity", 0, occupation_identity},
      {10, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    if (!in_time) out.detail += fmt(" [over the %.0f s budget]", c.budget_s);
    const bool pass = out.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s criterion %d (%s): %s (%.2f s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
