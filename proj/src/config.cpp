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


#include "config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "diffscope/expr.hpp"

namespace diffscope {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string summarize(const std::vector<ConfigIssue>& issues) {
  std::string out;
  for (const ConfigIssue& i : issues) {
    if (!out.empty()) out += "; ";
    out += std::string(to_string(i.code)) + " at " + (i.pointer.empty() ? "/" : i.pointer) + ": " +
           i.message;
  }
  return out;
}

ErrorCode dominant(const std::vector<ConfigIssue>& issues) {
  return issues.empty() ? ErrorCode::SchemaError : issues.front().code;
}

// Collects issues while walking the document.
class Reader {
 public:
  std::vector<ConfigIssue> issues;

  void fail(std::string pointer, std::string message, ErrorCode code = ErrorCode::SchemaError) {
    issues.push_back({std::move(pointer), code, std::move(message), std::nullopt});
  }

  const json* object(const json& parent, const std::string& key, const std::string& ptr,
                     bool required) {
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(ptr, "missing required field");
      return nullptr;
    }
    if (!it->is_object()) {
      fail(ptr, "expected an object");
      return nullptr;
    }
    return &*it;
  }

  void allow_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) fail(ptr + "/" + it.key(), "unknown field");
    }
  }

  std::optional<double> real(const json& v, const std::string& ptr) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s == "inf" || s == "+inf") return kInf;
      if (s == "-inf") return -kInf;
    }
    fail(ptr, "expected a number or \"inf\"/\"-inf\"");
    return std::nullopt;
  }

  std::optional<double> real(const json& parent, const std::string& key, const std::string& ptr,
                             bool required) {
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(ptr, "missing required field");
      return std::nullopt;
    }
    return real(*it, ptr);
  }

  std::optional<double> finite(const json& parent, const std::string& key, const std::string& ptr,
                               bool required) {
    auto v = real(parent, key, ptr, required);
    if (v && !std::isfinite(*v)) {
      fail(ptr, "expected a finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<bool> boolean(const json& parent, const std::string& key, const std::string& ptr) {
    auto it = parent.find(key);
    if (it == parent.end()) return std::nullopt;
    if (!it->is_boolean()) {
      fail(ptr, "expected true or false");
      return std::nullopt;
    }
    return it->get<bool>();
  }

  std::optional<std::uint64_t> count(const json& parent, const std::string& key,
                                     const std::string& ptr) {
    auto it = parent.find(key);
    if (it == parent.end()) return std::nullopt;
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
      fail(ptr, "expected a non-negative integer");
      return std::nullopt;
    }
    return it->get<std::uint64_t>();
  }

  std::optional<std::string> string(const json& parent, const std::string& key,
                                    const std::string& ptr, bool required) {
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(ptr, "missing required field");
      return std::nullopt;
    }
    if (!it->is_string()) {
      fail(ptr, "expected a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<Expression> expression(const json& parent, const std::string& key,
                                       const std::string& ptr, bool required) {
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(ptr, "missing required field");
      return std::nullopt;
    }
    if (it->is_number()) return Expression::constant(it->get<double>());
    if (!it->is_string()) {
      fail(ptr, "expected an expression string");
      return std::nullopt;
    }
    try {
      return Expression::parse(it->get<std::string>());
    } catch (const ExpressionParseError& e) {
      issues.push_back({ptr, ErrorCode::ExpressionParseError, e.what(), e.position()});
      return std::nullopt;
    }
  }

  std::vector<double> reals(const json& parent, const std::string& key, const std::string& ptr) {
    std::vector<double> out;
    auto it = parent.find(key);
    if (it == parent.end()) return out;
    if (!it->is_array()) {
      fail(ptr, "expected an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (auto v = real((*it)[i], ptr + "/" + std::to_string(i))) out.push_back(*v);
    }
    return out;
  }
};

RealFn fn(const Expression& e) {
  return [e](double x) { return e(x); };
}

}  // namespace

const char* to_string(HorizonSelection h) noexcept {
  switch (h) {
    case HorizonSelection::Finite: return "finite";
    case HorizonSelection::Infinite: return "infinite";
    case HorizonSelection::Both: return "both";
  }
  return "both";
}

HorizonSelection parse_horizon(std::string_view text) {
  if (text == "finite") return HorizonSelection::Finite;
  if (text == "infinite") return HorizonSelection::Infinite;
  if (text == "both") return HorizonSelection::Both;
  throw Error(ErrorCode::InvalidArgument,
              "horizon must be finite, infinite or both, got '" + std::string(text) + "'");
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(dominant(issues), summarize(issues)), issues_(std::move(issues)) {}

std::string violation_pointer(const std::string& kind) {
  static const std::map<std::string, std::string> table = {
      {"IntervalInvalid", "/state_interval"},
      {"InfiniteEndpointClosed", "/state_interval"},
      {"StartNotInterior", "/x0"},
      {"StartAtSingularPoint", "/x0"},
      {"SingularPointNotInterior", "/scale/singular_points"},
      {"AnchorNotInterior", "/scale/anchor"},
      {"AtomNotInterior", "/speed/atoms"},
      {"AtomWeightInvalid", "/speed/atoms"},
      {"AtomsNotDistinct", "/speed/atoms"},
      {"BoundaryMassInvalid", "/speed"},
      {"NonPositiveDiffusion", "/scale/a"},
      {"CoefficientNotFinite", "/scale"},
      {"ScaleDerivativeNotPositive", "/scale"},
      {"ScaleNotIncreasing", "/scale"},
      {"ScaleEvaluationFailed", "/scale"},
      {"SpeedDensityInvalid", "/speed/density_expr"},
      {"SpeedNotPositive", "/speed/density_expr"},
  };
  auto it = table.find(kind);
  return it == table.end() ? "" : it->second;
}

json encode_real(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

std::string canonical_json(const json& document) { return document.dump(); }

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error(ErrorCode::InvalidArgument, "SHA-256 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string config_hash(const json& document) { return sha256_hex(canonical_json(document)); }

std::pair<double, double> default_truncation(const DiffusionSpec& spec) {
  const StateInterval& J = spec.interval();
  const double x0 = spec.x0();
  const double reach = 20.0 * std::max(1.0, std::fabs(x0));
  double lo = x0 - reach;
  double hi = x0 + reach;
  if (std::isfinite(J.l)) lo = J.l_closed ? J.l : J.l + 1e-3 * (x0 - J.l);
  if (std::isfinite(J.r)) hi = J.r_closed ? J.r : J.r - 1e-3 * (J.r - x0);
  return {lo, hi};
}

ModelConfig parse_model_config(const json& doc, bool check) {
  Reader rd;
  if (!doc.is_object()) {
    throw ConfigError({{"", ErrorCode::SchemaError, "document must be a JSON object", {}}});
  }
  rd.allow_keys(doc, "", {"name", "description", "state_interval", "scale", "speed", "x0", "horizon",
                          "quadrature", "simulation", "validation", "expectations"});

  std::string name = rd.string(doc, "name", "/name", false).value_or("");

  // State interval.
  StateInterval J{};
  bool interval_ok = false;
  if (const json* si = rd.object(doc, "state_interval", "/state_interval", true)) {
    rd.allow_keys(*si, "/state_interval", {"l", "r", "l_closed", "r_closed"});
    auto l = rd.real(*si, "l", "/state_interval/l", true);
    auto r = rd.real(*si, "r", "/state_interval/r", true);
    J.l_closed = rd.boolean(*si, "l_closed", "/state_interval/l_closed").value_or(false);
    J.r_closed = rd.boolean(*si, "r_closed", "/state_interval/r_closed").value_or(false);
    if (l && r) {
      J.l = *l;
      J.r = *r;
      interval_ok = true;
      if (!(J.l < J.r)) rd.fail("/state_interval", "l must be smaller than r", ErrorCode::ValidationError);
      if ((J.l_closed && !std::isfinite(J.l)) || (J.r_closed && !std::isfinite(J.r))) {
        rd.fail("/state_interval", "an infinite endpoint cannot be closed", ErrorCode::ValidationError);
      }
    }
  }

  auto x0 = rd.finite(doc, "x0", "/x0", true);

  // Scale.
  std::optional<ScaleSpec> scale;
  std::optional<Expression> ito_a;
  std::string form;
  if (const json* sc = rd.object(doc, "scale", "/scale", true)) {
    form = rd.string(*sc, "form", "/scale/form", true).value_or("");
    const double anchor =
        rd.finite(*sc, "anchor", "/scale/anchor", false).value_or(x0.value_or(0.0));
    const std::vector<double> singular = rd.reals(*sc, "singular_points", "/scale/singular_points");
    if (form == "ito") {
      rd.allow_keys(*sc, "/scale", {"form", "mu", "a", "anchor", "singular_points"});
      auto mu = rd.expression(*sc, "mu", "/scale/mu", true);
      ito_a = rd.expression(*sc, "a", "/scale/a", true);
      if (mu && ito_a) scale = ScaleSpec::from_ito(fn(*mu), fn(*ito_a), anchor, singular);
    } else if (form == "beta") {
      rd.allow_keys(*sc, "/scale", {"form", "beta", "anchor", "singular_points"});
      auto beta = rd.expression(*sc, "beta", "/scale/beta", true);
      if (beta) scale = ScaleSpec::from_beta(fn(*beta), anchor, singular);
    } else if (form == "raw") {
      rd.allow_keys(*sc, "/scale", {"form", "s", "s_prime", "beta", "natural_scale", "anchor",
                                    "singular_points"});
      auto s = rd.expression(*sc, "s", "/scale/s", true);
      auto sp = rd.expression(*sc, "s_prime", "/scale/s_prime", false);
      auto beta = rd.expression(*sc, "beta", "/scale/beta", false);
      const bool natural = rd.boolean(*sc, "natural_scale", "/scale/natural_scale").value_or(false);
      if (s) {
        const Expression d1 = sp ? *sp : s->derivative();
        std::optional<RealFn> b;
        if (beta) {
          b = fn(*beta);
        } else if (!natural) {
          const Expression d2 = d1.derivative();
          b = [d1, d2](double x) { return d2(x) / d1(x); };
        }
        scale = ScaleSpec::from_raw(fn(*s), fn(d1), b, natural, singular);
      }
    } else if (!form.empty()) {
      rd.fail("/scale/form", "expected \"ito\", \"beta\" or \"raw\"");
    }
  }

  // Speed.
  std::optional<SpeedSpec> speed;
  {
    const json empty = json::object();
    const json* sp = rd.object(doc, "speed", "/speed", form != "ito");
    if (!sp && form == "ito") sp = &empty;
    if (sp) {
      rd.allow_keys(*sp, "/speed", {"density_form", "density_expr", "atoms", "boundary_mass_l",
                                    "boundary_mass_r"});
      const std::string dform = rd.string(*sp, "density_form", "/speed/density_form", false)
                                    .value_or(form == "ito" ? "scale_relative" : "lebesgue");
      std::optional<Expression> density;
      if (sp->contains("density_expr")) {
        density = rd.expression(*sp, "density_expr", "/speed/density_expr", true);
      } else if (form == "ito" && dform == "scale_relative") {
        if (ito_a) density = Expression::parse("1/(" + ito_a->to_string() + ")");
      } else {
        rd.fail("/speed/density_expr", "missing required field");
      }
      std::vector<Atom> atoms;
      if (auto it = sp->find("atoms"); it != sp->end()) {
        if (!it->is_array()) {
          rd.fail("/speed/atoms", "expected an array of {z, gamma}");
        } else {
          for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string ptr = "/speed/atoms/" + std::to_string(i);
            const json& a = (*it)[i];
            if (!a.is_object()) {
              rd.fail(ptr, "expected an object {z, gamma}");
              continue;
            }
            rd.allow_keys(a, ptr, {"z", "gamma"});
            auto z = rd.finite(a, "z", ptr + "/z", true);
            auto g = rd.finite(a, "gamma", ptr + "/gamma", true);
            if (z && g) atoms.push_back({*z, *g});
          }
        }
      }
      auto mass = [&](const char* key) {
        const std::string ptr = std::string("/speed/") + key;
        auto v = rd.real(*sp, key, ptr, false).value_or(0.0);
        if (!(v >= 0.0)) {
          rd.fail(ptr, "boundary mass must be non-negative or \"inf\"", ErrorCode::ValidationError);
          v = 0.0;
        }
        return v;
      };
      const double ml = mass("boundary_mass_l");
      const double mr = mass("boundary_mass_r");
      if (density) {
        if (dform == "lebesgue") {
          speed = SpeedSpec::lebesgue(fn(*density), atoms, ml, mr);
        } else if (dform == "scale_relative") {
          speed = SpeedSpec::scale_relative(fn(*density), atoms, ml, mr);
        } else if (dform == "log") {
          speed = SpeedSpec::from_log_density(fn(*density), atoms, ml, mr);
        } else {
          rd.fail("/speed/density_form", "expected \"lebesgue\", \"scale_relative\" or \"log\"");
        }
      }
    }
  }

  HorizonSelection horizon = HorizonSelection::Both;
  if (auto h = rd.string(doc, "horizon", "/horizon", false)) {
    try {
      horizon = parse_horizon(*h);
    } catch (const Error& e) {
      rd.fail("/horizon", e.what());
    }
  }

  ImproperConfig quad;
  if (const json* q = rd.object(doc, "quadrature", "/quadrature", false)) {
    rd.allow_keys(*q, "/quadrature",
                  {"ratio", "max_levels", "decision_margin", "proper_tol", "min_consistent_levels"});
    quad.ratio = rd.finite(*q, "ratio", "/quadrature/ratio", false).value_or(quad.ratio);
    quad.max_levels = static_cast<int>(
        rd.count(*q, "max_levels", "/quadrature/max_levels").value_or(quad.max_levels));
    quad.decision_margin = rd.finite(*q, "decision_margin", "/quadrature/decision_margin", false)
                               .value_or(quad.decision_margin);
    quad.proper_tol =
        rd.finite(*q, "proper_tol", "/quadrature/proper_tol", false).value_or(quad.proper_tol);
    quad.min_consistent_levels = static_cast<int>(
        rd.count(*q, "min_consistent_levels", "/quadrature/min_consistent_levels")
            .value_or(quad.min_consistent_levels));
    try {
      quad.check();
    } catch (const Error& e) {
      rd.fail("/quadrature", e.what(), ErrorCode::ValidationError);
    }
  }

  SimulationSettings sim;
  if (const json* s = rd.object(doc, "simulation", "/simulation", false)) {
    rd.allow_keys(*s, "/simulation", {"h", "truncation", "n_paths", "seed", "T", "spacing",
                                      "exponential_holding", "eps_floor", "max_steps"});
    sim.h = rd.finite(*s, "h", "/simulation/h", false).value_or(sim.h);
    if (!(sim.h > 0.0)) rd.fail("/simulation/h", "must be positive", ErrorCode::ValidationError);
    if (s->contains("truncation")) {
      const std::vector<double> t = rd.reals(*s, "truncation", "/simulation/truncation");
      if (t.size() != 2 || !std::isfinite(t[0]) || !std::isfinite(t[1]) || !(t[0] < t[1])) {
        rd.fail("/simulation/truncation", "expected [lo, hi] with finite lo < hi");
      } else {
        sim.truncation = std::make_pair(t[0], t[1]);
      }
    }
    sim.n_paths = rd.count(*s, "n_paths", "/simulation/n_paths").value_or(sim.n_paths);
    sim.seed = rd.count(*s, "seed", "/simulation/seed").value_or(sim.seed);
    sim.T = rd.real(*s, "T", "/simulation/T", false).value_or(sim.T);
    if (!(sim.T > 0.0)) rd.fail("/simulation/T", "must be positive", ErrorCode::ValidationError);
    if (auto sp = rd.string(*s, "spacing", "/simulation/spacing", false)) {
      if (*sp == "auto") sim.spacing = Spacing::Auto;
      else if (*sp == "uniform_scale") sim.spacing = Spacing::UniformScale;
      else if (*sp == "equal_time") sim.spacing = Spacing::EqualTime;
      else rd.fail("/simulation/spacing", "expected auto, uniform_scale or equal_time");
    }
    sim.exponential_holding =
        rd.boolean(*s, "exponential_holding", "/simulation/exponential_holding").value_or(false);
    sim.eps_floor = rd.finite(*s, "eps_floor", "/simulation/eps_floor", false).value_or(sim.eps_floor);
    sim.max_steps = rd.count(*s, "max_steps", "/simulation/max_steps").value_or(sim.max_steps);
  }

  int probes = 512;
  if (const json* v = rd.object(doc, "validation", "/validation", false)) {
    rd.allow_keys(*v, "/validation", {"probes"});
    probes = static_cast<int>(rd.count(*v, "probes", "/validation/probes").value_or(512));
    if (probes < 2) rd.fail("/validation/probes", "must be at least 2", ErrorCode::ValidationError);
  }

  if (!rd.issues.empty() || !interval_ok || !x0 || !scale || !speed) {
    if (rd.issues.empty()) rd.fail("", "incomplete model document");
    throw ConfigError(std::move(rd.issues));
  }

  std::optional<DiffusionSpec> spec;
  try {
    spec.emplace(J, *scale, *speed, *x0);
  } catch (const Error& e) {
    throw ConfigError({{"", ErrorCode::ValidationError, e.what(), {}}});
  }
  if (check) {
    std::vector<ConfigIssue> issues;
    for (const Violation& v : validate(*spec, probes)) {
      std::string msg = v.kind + ": " + v.detail;
      if (v.witness) {
        char buf[48];
        std::snprintf(buf, sizeof buf, " (x=%.17g)", *v.witness);
        msg += buf;
      }
      issues.push_back({violation_pointer(v.kind), ErrorCode::ValidationError, msg, {}});
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
  }

  return ModelConfig{doc, name, *spec, horizon, quad, sim, probes};
}

ModelConfig parse_model_config_text(std::string_view text, bool check) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({{"", ErrorCode::SchemaError,
                        std::string("malformed JSON: ") + e.what(),
                        static_cast<std::size_t>(e.byte)}});
  }
  return parse_model_config(doc, check);
}

}  // namespace diffscope
