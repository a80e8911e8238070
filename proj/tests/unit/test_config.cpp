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

#include <json.hpp>

#include "catalog.hpp"
#include "config.hpp"
#include "report.hpp"

using namespace diffscope;
using nlohmann::json;

namespace {

json bessel_doc() { return catalog_lookup("bessel3"); }

std::vector<ConfigIssue> issues_of(const json& doc) {
  try {
    (void)parse_model_config(doc);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool has_issue(const std::vector<ConfigIssue>& issues, const std::string& pointer, ErrorCode code) {
  for (const ConfigIssue& i : issues) {
    if (i.pointer == pointer && i.code == code) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("catalog bessel3 document") {
  const json doc = bessel_doc();
  CHECK(doc["scale"]["form"] == "ito");
  CHECK(doc["scale"]["mu"] == "1/x");
  CHECK(doc["state_interval"]["r"] == "inf");
  const ModelConfig cfg = parse_model_config(doc);
  CHECK(cfg.spec.x0() == 1.0);
  CHECK(cfg.name == "bessel3");
  CHECK(cfg.spec.interval().l == 0.0);
  CHECK(std::isinf(cfg.spec.interval().r));
  CHECK(cfg.spec.speed().boundary_mass(Side::Lower) == std::numeric_limits<double>::infinity());
}

TEST_CASE("every catalog entry parses and validates") {
  for (const CatalogEntry& e : catalog_entries()) {
    CAPTURE(e.name);
    CHECK_NOTHROW((void)parse_model_config(catalog_lookup(e.name)));
  }
}

TEST_CASE("catalog parameters") {
  CHECK(catalog_lookup("sticky_bm(gamma=0.5)")["speed"]["atoms"][0]["gamma"] == 0.5);
  CHECK(catalog_lookup("gbm(mu=0.1, sigma=0.3)")["scale"]["mu"] == "0.1*x");
  CHECK(catalog_lookup("ou(kappa=2)")["scale"]["mu"] == "(-2)*x");
  CHECK_THROWS_AS((void)catalog_lookup("gbm(kappa=1)"), Error);
  CHECK_THROWS_AS((void)catalog_lookup("example_2_14(m=2,k=2)"), Error);
  const json reach = catalog_lookup("example_2_14(m=0,k=0)");
  CHECK(reach["state_interval"]["l_closed"] == true);
}

TEST_CASE("unknown models get a suggestion") {
  try {
    (void)catalog_lookup("bessel");
    FAIL("expected UnknownModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownModel);
    CHECK(std::string(e.what()).find("bessel3") != std::string::npos);
  }
  CHECK_THROWS_AS((void)catalog_lookup("unknown"), Error);
}

TEST_CASE("missing x0 is a schema error at /x0") {
  json doc = bessel_doc();
  doc.erase("x0");
  CHECK(has_issue(issues_of(doc), "/x0", ErrorCode::SchemaError));
}

TEST_CASE("expression parse errors carry the position") {
  json doc = bessel_doc();
  doc["speed"]["density_expr"] = "1/(x^4";
  const auto issues = issues_of(doc);
  REQUIRE(has_issue(issues, "/speed/density_expr", ErrorCode::ExpressionParseError));
  CHECK(issues[0].position.value() == 6);
}

TEST_CASE("schema errors are collected with pointers") {
  json doc = bessel_doc();
  doc["scale"]["form"] = "spline";
  doc["state_interval"]["l_closed"] = "yes";
  doc["simulation"]["bogus"] = 1;
  const auto issues = issues_of(doc);
  CHECK(has_issue(issues, "/scale/form", ErrorCode::SchemaError));
  CHECK(has_issue(issues, "/state_interval/l_closed", ErrorCode::SchemaError));
  CHECK(has_issue(issues, "/simulation/bogus", ErrorCode::SchemaError));
}

TEST_CASE("semantic violations are located") {
  json doc = bessel_doc();
  doc["x0"] = 0.0;
  CHECK(has_issue(issues_of(doc), "/x0", ErrorCode::ValidationError));
  json neg = catalog_lookup("bm");
  neg["scale"]["a"] = "x";
  neg["speed"]["density_expr"] = "1";
  CHECK(has_issue(issues_of(neg), "/scale/a", ErrorCode::ValidationError));
}

TEST_CASE("raw and beta forms") {
  json raw = {{"state_interval", {{"l", -1}, {"r", 1}, {"l_closed", true}, {"r_closed", true}}},
              {"scale", {{"form", "raw"}, {"s", "x + x^3/3"}}},
              {"speed", {{"density_expr", "1"}, {"boundary_mass_l", "inf"}, {"boundary_mass_r", "inf"}}},
              {"x0", 0.5}};
  const ModelConfig cfg = parse_model_config(raw);
  CHECK(cfg.spec.scale().s_prime(0.5) == doctest::Approx(1.25));
  CHECK(cfg.spec.scale().beta(0.5) == doctest::Approx(1.0 / 1.25));
  json beta = {{"state_interval", {{"l", "-inf"}, {"r", "inf"}}},
               {"scale", {{"form", "beta"}, {"beta", "2*x"}, {"anchor", 0}}},
               {"speed", {{"density_form", "log"}, {"density_expr", "-x^2"}}},
               {"x0", 0}};
  CHECK(parse_model_config(beta).spec.speed().density(1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("round trip through the document keeps the verdicts") {
  for (const char* name : {"bessel3", "gbm", "sticky_bm"}) {
    const json doc = catalog_lookup(name);
    const json again = json::parse(doc.dump());
    const ClassifyResult a = run_classify(parse_model_config(doc));
    const ClassifyResult b = run_classify(parse_model_config(again));
    CHECK(a.report["verdicts"] == b.report["verdicts"]);
  }
}

TEST_CASE("reports are byte-identical and hashed") {
  const ModelConfig cfg = parse_model_config(bessel_doc());
  const ClassifyResult a = run_classify(cfg);
  const ClassifyResult b = run_classify(cfg);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.report["config_hash"].get<std::string>().size() == 64);
  CHECK(a.report["config_hash"] == sha256_hex(canonical_json(bessel_doc())));
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(a.report["verdicts"]["nupbr_finite"]["value"] == "holds");
  CHECK(a.all_requested_conclusive);
  CHECK_FALSE(render_classify_text(a.report).empty());
}

TEST_CASE("horizon selection drives conclusiveness") {
  ModelConfig cfg = parse_model_config(catalog_lookup("bm"));
  cfg.horizon = HorizonSelection::Finite;
  const ClassifyResult r = run_classify(cfg);
  CHECK(r.report["requested"].size() == 3);
  CHECK(r.all_requested_conclusive);
}

TEST_CASE("simulation documents") {
  const ModelConfig cfg = parse_model_config(catalog_lookup("bm"));
  SimulationRequest req;
  req.mode = SimulationMode::Exit;
  req.interval = std::make_pair(-1.0, 1.0);
  req.n_paths = 2000;
  req.h = 0.1;
  const json a = run_simulate(cfg, req);
  const json b = run_simulate(cfg, req);
  CHECK(a.dump() == b.dump());
  CHECK(a["T"] == "inf");
  CHECK(std::fabs(a["stats"]["mean_time"].get<double>() - 1.0) < 0.1);
  CHECK_FALSE(render_simulate_text(a).empty());
}

TEST_CASE("validate_document never throws") {
  json broken = bessel_doc();
  broken["speed"]["density_expr"] = "1/(x^4";
  const json r = validate_document(broken);
  CHECK(r["valid"] == false);
  CHECK(r["errors"][0]["pointer"] == "/speed/density_expr");
  CHECK(validate_document(bessel_doc())["valid"] == true);
  json hole = catalog_lookup("bm");
  hole["speed"] = {{"density_form", "lebesgue"}, {"density_expr", "abs(x) - abs(x)"}};
  const json h = validate_document(hole);
  CHECK(h["valid"] == false);
  CHECK(h["violations"].size() >= 1);
}

TEST_CASE("default truncation") {
  const ModelConfig cfg = parse_model_config(bessel_doc());
  const auto [lo, hi] = default_truncation(cfg.spec);
  CHECK(lo == doctest::Approx(1e-3));
  CHECK(hi == doctest::Approx(21.0));
}
