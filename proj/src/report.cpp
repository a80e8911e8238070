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


#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "catalog.hpp"
#include "diffscope/boundary.hpp"

namespace diffscope {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json integral_json(const IntegralVerdict& v) {
  json j = {{"outcome", to_string(v.outcome)},
            {"value", encode_real(v.value)},
            {"abs_err", encode_real(v.abs_err)},
            {"levels_used", v.levels_used},
            {"reason", v.reason}};
  if (v.infinite()) j["divergence"] = to_string(v.divergence);
  j["tail_exponent"] = v.tail_exponent ? encode_real(*v.tail_exponent) : json(nullptr);
  if (v.non_finite_evaluation) j["non_finite_evaluation"] = true;
  return j;
}

json verdict_json(const Verdict& v) {
  json trace = json::array();
  for (const TraceEntry& t : v.trace) {
    trace.push_back({{"clause", t.clause},
                     {"side", t.side ? json(to_string(*t.side)) : json(nullptr)},
                     {"satisfied", to_string(t.satisfied)},
                     {"detail", t.detail}});
  }
  json j = {{"value", to_string(v.value)}, {"trace", std::move(trace)}};
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

json boundary_json(const BoundaryReport& b) {
  json j = {{"side", to_string(b.side)},
            {"b", encode_real(b.b)},
            {"anchor", encode_real(b.anchor)},
            {"scale_limit", {{"outcome", to_string(b.s_limit)}, {"value", encode_real(b.s_at_b)}}},
            {"accessibility", to_string(b.accessibility)},
            {"accessibility_reason", b.accessibility_reason},
            {"feller_integral", integral_json(b.feller)},
            {"behavior", to_string(b.behavior)}};
  if (b.b_finite) {
    j["weighted_beta_integral"] = integral_json(b.weighted_beta);
    j["weighted_speed_integral"] = integral_json(b.weighted_speed);
  } else {
    j["kotani_integral"] = integral_json(b.kotani);
  }
  return j;
}

json audit_json(const AuditResult& a) {
  json j = {{"consistent", a.consistent()},
            {"skipped", a.skipped},
            {"inconsistencies", a.inconsistencies}};
  if (a.skipped) j["skip_reason"] = a.skip_reason;
  return j;
}

std::string real_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
  return buf;
}

}  // namespace

ClassifyResult run_classify(const ModelConfig& config) {
  const ArbitrageReport r = classify(config.spec, config.quadrature);
  json verdicts = {{"nupbr_finite", verdict_json(r.nupbr_finite)},
                   {"nflvr_finite", verdict_json(r.nflvr_finite)},
                   {"emm_finite", verdict_json(r.emm_finite)},
                   {"nupbr_infinite", verdict_json(r.nupbr_infinite)},
                   {"nflvr_infinite", verdict_json(r.nflvr_infinite)},
                   {"emm_infinite", verdict_json(r.emm_infinite)}};
  std::vector<std::string> requested;
  if (config.horizon != HorizonSelection::Infinite) {
    requested.insert(requested.end(), {"nupbr_finite", "nflvr_finite", "emm_finite"});
  }
  if (config.horizon != HorizonSelection::Finite) {
    requested.insert(requested.end(), {"nupbr_infinite", "nflvr_infinite", "emm_infinite"});
  }
  bool conclusive = true;
  for (const std::string& k : requested) {
    conclusive = conclusive && verdicts[k]["value"] != "inconclusive";
  }
  json checks = json::array();
  for (const CompactCheck& c : r.local_checks) {
    json cj = {{"compact", {encode_real(c.compact.a), encode_real(c.compact.b)}},
               {"verdict", integral_json(c.verdict)}};
    if (c.witness) cj["witness"] = *c.witness;
    checks.push_back(std::move(cj));
  }
  ClassifyResult out;
  out.all_requested_conclusive = conclusive;
  out.report = {{"tool_version", DIFFSCOPE_VERSION},
                {"config_hash", config_hash(config.document)},
                {"model", config.name},
                {"horizon", to_string(config.horizon)},
                {"requested", requested},
                {"spec_echo", config.document},
                {"natural_scale", r.natural_scale},
                {"regularity", verdict_json(r.regularity)},
                {"verdicts", std::move(verdicts)},
                {"boundary_reports", {{"lower", boundary_json(r.lower)}, {"upper", boundary_json(r.upper)}}},
                {"consistency_audit", {{"lower", audit_json(r.audit_lower)}, {"upper", audit_json(r.audit_upper)}}},
                {"local_checks", std::move(checks)},
                {"warnings", r.warnings},
                {"all_requested_conclusive", conclusive}};
  return out;
}

std::string render_classify_text(const json& report) {
  std::ostringstream os;
  os << "model: " << (report["model"].get<std::string>().empty() ? "(config)" : report["model"].get<std::string>())
     << "   horizon: " << report["horizon"].get<std::string>() << "\n";
  os << "regularity condition: " << report["regularity"]["value"].get<std::string>() << "\n\n";
  const char* rows[] = {"nupbr", "nflvr", "emm"};
  char line[128];
  std::snprintf(line, sizeof line, "%-8s %-14s %-14s\n", "", "finite", "infinite");
  os << line;
  for (const char* row : rows) {
    const std::string f = report["verdicts"][std::string(row) + "_finite"]["value"];
    const std::string i = report["verdicts"][std::string(row) + "_infinite"]["value"];
    std::string name = row;
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    std::snprintf(line, sizeof line, "%-8s %-14s %-14s\n", name.c_str(), f.c_str(), i.c_str());
    os << line;
  }
  os << "\n";
  for (const char* side : {"lower", "upper"}) {
    const json& b = report["boundary_reports"][side];
    os << side << " boundary " << real_text(b["b"]) << ": " << b["accessibility"].get<std::string>()
       << ", s(b) " << b["scale_limit"]["outcome"].get<std::string>();
    if (b.contains("weighted_beta_integral")) {
      os << ", weighted beta integral " << b["weighted_beta_integral"]["outcome"].get<std::string>()
         << ", weighted speed integral " << b["weighted_speed_integral"]["outcome"].get<std::string>();
    } else {
      os << ", Kotani integral " << b["kotani_integral"]["outcome"].get<std::string>();
    }
    os << "\n";
  }
  for (const auto& [key, v] : report["verdicts"].items()) {
    if (v["value"] == "inconclusive" && v.contains("reason")) {
      os << "  " << key << ": " << v["reason"].get<std::string>() << "\n";
    }
  }
  for (const json& w : report["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
  os << "config_hash: " << report["config_hash"].get<std::string>() << "\n";
  return os.str();
}

SimulationMode parse_simulation_mode(std::string_view text) {
  if (text == "smd") return SimulationMode::Smd;
  if (text == "exit") return SimulationMode::Exit;
  if (text == "paths") return SimulationMode::Paths;
  if (text == "gap") return SimulationMode::Gap;
  throw Error(ErrorCode::InvalidArgument, "mode must be smd, exit, paths or gap");
}

const char* to_string(SimulationMode m) noexcept {
  switch (m) {
    case SimulationMode::Smd: return "smd";
    case SimulationMode::Exit: return "exit";
    case SimulationMode::Paths: return "paths";
    case SimulationMode::Gap: return "gap";
  }
  return "smd";
}

json run_simulate(const ModelConfig& config, const SimulationRequest& req) {
  const SimulationSettings& s = config.simulation;
  const double T = req.mode == SimulationMode::Exit ? kInf : req.T.value_or(s.T);
  const std::uint64_t n = req.n_paths.value_or(s.n_paths);
  const std::uint64_t seed = req.seed.value_or(s.seed);
  const double h = req.h.value_or(s.h);
  const Spacing spacing = req.spacing.value_or(s.spacing);
  const auto [lo, hi] = req.interval ? *req.interval
                                     : s.truncation ? *s.truncation : default_truncation(config.spec);
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n_paths must be at least 1");
  WalkOptions opts;
  opts.exponential_holding = req.exponential_holding.value_or(s.exponential_holding);
  opts.max_steps = s.max_steps;

  json out = {{"tool_version", DIFFSCOPE_VERSION},
              {"config_hash", config_hash(config.document)},
              {"model", config.name},
              {"mode", to_string(req.mode)},
              {"seed", seed},
              {"n_paths", n},
              {"T", encode_real(T)},
              {"holding", opts.exponential_holding ? "exponential" : "deterministic"}};

  auto grid_json = [&](const GridModel& g) {
    return json{{"h", h},
                {"interval", {lo, hi}},
                {"nodes", g.size()},
                {"spacing", to_string(g.spacing)},
                {"lower_end", to_string(g.lower_end)},
                {"upper_end", to_string(g.upper_end)},
                {"max_hold", g.max_hold()}};
  };

  bool contamination_ok = true;
  if (req.mode == SimulationMode::Gap) {
    const GapStats g = estimate_candidate_martingale_gap(config.spec, T, n, seed, h, lo, hi, spacing, opts);
    out["grid"] = {{"h", h}, {"interval", {lo, hi}}, {"nodes", g.grid_nodes}};
    out["stats"] = {{"gap", g.gap},
                    {"std_err", g.se},
                    {"mean_X_T", g.mean_x},
                    {"x0", config.spec.x0()},
                    {"frac_sentinel", g.frac_sentinel}};
    contamination_ok = g.contamination_ok;
  } else {
    const GridModel grid = build_grid(config.spec, h, lo, hi, spacing);
    out["grid"] = grid_json(grid);
    if (req.mode == SimulationMode::Smd) {
      const SMDStats st = estimate_smd(grid, T, n, seed, s.eps_floor, opts);
      out["stats"] = {{"mean_Z_T", st.mean_z},
                      {"std_err", st.se_z},
                      {"z_quantiles", {{"0.001", st.z_quantiles.at(0)}, {"0.01", st.z_quantiles.at(1)},
                                       {"0.1", st.z_quantiles.at(2)}, {"0.5", st.z_quantiles.at(3)}}},
                      {"frac_absorbed", st.frac_absorbed},
                      {"frac_sentinel", st.frac_sentinel},
                      {"eps_floor", st.eps_floor},
                      {"frac_Z_below", st.frac_z_below},
                      {"mean_quadratic", st.mean_quadratic}};
      contamination_ok = st.contamination_ok;
    } else {
      const PathStats st = simulate_paths(grid, T, n, seed, opts);
      json stats = {{"mean_time", st.mean_time},
                    {"std_err_time", st.se_time},
                    {"mean_steps", st.mean_steps},
                    {"frac_lower", st.frac_absorbed_lower},
                    {"frac_upper", st.frac_absorbed_upper},
                    {"std_err_upper", st.se_absorbed_upper},
                    {"frac_sentinel", st.frac_sentinel},
                    {"frac_alive", st.frac_alive},
                    {"frac_step_limit", st.frac_step_limit},
                    {"mean_U", st.mean_u},
                    {"std_err_U", st.se_u}};
      if (req.mode == SimulationMode::Paths) {
        stats["mean_X_T"] = st.mean_x;
        stats["std_err_X_T"] = st.se_x;
        stats["x_quantiles"] = {{"0.05", st.x_quantiles.at(0)}, {"0.25", st.x_quantiles.at(1)},
                                {"0.5", st.x_quantiles.at(2)}, {"0.75", st.x_quantiles.at(3)},
                                {"0.95", st.x_quantiles.at(4)}};
        contamination_ok = st.contamination_ok;
      }
      // In exit mode the interval ends are the exits being timed.
      out["stats"] = std::move(stats);
    }
  }
  out["contamination_ok"] = contamination_ok;
  out["valid_for_acceptance"] = contamination_ok;
  return out;
}

std::string render_simulate_text(const json& result) {
  std::ostringstream os;
  os << "mode: " << result["mode"].get<std::string>() << "   paths: " << result["n_paths"]
     << "   seed: " << result["seed"] << "   T: " << real_text(result["T"]) << "\n";
  os << "grid: " << result["grid"]["nodes"] << " nodes on [" << real_text(result["grid"]["interval"][0])
     << ", " << real_text(result["grid"]["interval"][1]) << "], h=" << real_text(result["grid"]["h"])
     << "\n";
  for (const auto& [k, v] : result["stats"].items()) {
    if (v.is_object()) {
      os << "  " << k << ":";
      for (const auto& [qk, qv] : v.items()) os << " " << qk << "=" << real_text(qv);
      os << "\n";
    } else {
      os << "  " << k << ": " << real_text(v) << "\n";
    }
  }
  if (!result["contamination_ok"].get<bool>()) {
    os << "warning: more than 0.1% of paths reached a truncation sentinel\n";
  }
  return os.str();
}

json validate_document(const json& document) {
  json errors = json::array();
  json violations = json::array();
  try {
    const ModelConfig cfg = parse_model_config(document, false);
    for (const Violation& v : validate(cfg.spec, cfg.probes)) {
      violations.push_back({{"kind", v.kind},
                            {"pointer", violation_pointer(v.kind)},
                            {"detail", v.detail},
                            {"witness", v.witness ? json(*v.witness) : json(nullptr)}});
    }
  } catch (const ConfigError& e) {
    for (const ConfigIssue& i : e.issues()) {
      json ej = {{"pointer", i.pointer}, {"code", to_string(i.code)}, {"message", i.message}};
      if (i.position) ej["position"] = *i.position;
      errors.push_back(std::move(ej));
    }
  } catch (const Error& e) {
    errors.push_back({{"pointer", ""}, {"code", to_string(e.code())}, {"message", e.what()}});
  }
  const bool valid = errors.empty() && violations.empty();
  return {{"valid", valid}, {"errors", errors}, {"violations", violations}};
}

std::string render_validate_text(const json& result) {
  std::ostringstream os;
  os << (result["valid"].get<bool>() ? "valid" : "invalid") << "\n";
  for (const json& e : result["errors"]) {
    os << "  " << e["code"].get<std::string>() << " at "
       << (e["pointer"].get<std::string>().empty() ? "/" : e["pointer"].get<std::string>()) << ": "
       << e["message"].get<std::string>() << "\n";
  }
  for (const json& v : result["violations"]) {
    os << "  " << v["kind"].get<std::string>() << " at "
       << (v["pointer"].get<std::string>().empty() ? "/" : v["pointer"].get<std::string>()) << ": "
       << v["detail"].get<std::string>();
    if (!v["witness"].is_null()) os << " (x=" << real_text(v["witness"]) << ")";
    os << "\n";
  }
  return os.str();
}

json catalog_listing() {
  json models = json::array();
  for (const CatalogEntry& e : catalog_entries()) {
    models.push_back({{"name", e.name}, {"summary", e.summary}, {"parameters", e.parameters}});
  }
  return {{"tool_version", DIFFSCOPE_VERSION}, {"models", models}};
}

std::string render_catalog_text(const json& listing) {
  std::ostringstream os;
  for (const json& m : listing["models"]) {
    char line[256];
    const std::string params = m["parameters"].get<std::string>();
    std::snprintf(line, sizeof line, "%-16s %s%s\n", m["name"].get<std::string>().c_str(),
                  m["summary"].get<std::string>().c_str(),
                  params.empty() ? "" : ("  [" + params + "]").c_str());
    os << line;
  }
  return os.str();
}

}  // namespace diffscope
