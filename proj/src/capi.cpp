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


#include "diffscope/diffscope.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "catalog.hpp"
#include "config.hpp"
#include "report.hpp"

using nlohmann::json;

struct ds_model {
  diffscope::ModelConfig config;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_details = "[]";

void clear_error() {
  g_error.clear();
  g_details = "[]";
}

ds_status status_of(diffscope::ErrorCode code) {
  return static_cast<ds_status>(static_cast<int>(code) + 1);
}

ds_status record(ds_status st, const std::string& message, json details = json::array()) {
  g_error = message;
  g_details = details.dump();
  return st;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

// Runs `body`, mapping exceptions to status codes.
template <class F>
ds_status guarded(F&& body) {
  clear_error();
  try {
    body();
    return DS_OK;
  } catch (const diffscope::ConfigError& e) {
    json details = json::array();
    for (const auto& i : e.issues()) {
      json d = {{"pointer", i.pointer}, {"code", diffscope::to_string(i.code)}, {"message", i.message}};
      if (i.position) d["position"] = *i.position;
      details.push_back(std::move(d));
    }
    return record(status_of(e.code()), e.what(), std::move(details));
  } catch (const diffscope::Error& e) {
    return record(status_of(e.code()), e.what(),
                  json::array({{{"pointer", ""}, {"code", diffscope::to_string(e.code())}, {"message", e.what()}}}));
  } catch (const json::exception& e) {
    return record(DS_ERR_SCHEMA, e.what());
  } catch (const std::bad_alloc&) {
    return record(DS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(DS_ERR_INTERNAL, e.what());
  }
}

ds_status null_arg(const char* what) {
  return record(DS_ERR_NULL_ARGUMENT, std::string(what) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* ds_version(void) { return DIFFSCOPE_VERSION; }

const char* ds_status_name(ds_status status) {
  switch (status) {
    case DS_OK: return "ok";
    case DS_ERR_NULL_ARGUMENT: return "NullArgument";
    case DS_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(diffscope::ErrorCode::OverflowGuard)) {
    return diffscope::to_string(static_cast<diffscope::ErrorCode>(code));
  }
  return "Unknown";
}

const char* ds_last_error(void) { return g_error.c_str(); }
const char* ds_last_error_details(void) { return g_details.c_str(); }

void ds_string_free(char* s) { std::free(s); }

ds_status ds_model_from_json(const char* text, ds_model** out) {
  if (!text) return null_arg("json");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new ds_model{diffscope::parse_model_config_text(text)}; });
}

ds_status ds_model_from_catalog(const char* name, ds_model** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ds_model{diffscope::parse_model_config(diffscope::catalog_lookup(name))};
  });
}

void ds_model_free(ds_model* model) { delete model; }

ds_status ds_model_document(const ds_model* model, char** json_out) {
  if (!model) return null_arg("model");
  if (!json_out) return null_arg("json_out");
  return guarded([&] { *json_out = dup(pretty(model->config.document)); });
}

ds_status ds_catalog_document(const char* name, char** json_out) {
  if (!name) return null_arg("name");
  if (!json_out) return null_arg("json_out");
  return guarded([&] { *json_out = dup(pretty(diffscope::catalog_lookup(name))); });
}

ds_status ds_catalog_list(ds_format format, char** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    const json listing = diffscope::catalog_listing();
    *out = dup(format == DS_FORMAT_TEXT ? diffscope::render_catalog_text(listing) : pretty(listing));
  });
}

ds_status ds_validate_json(const char* text, ds_format format, char** out, int* valid) {
  if (!text) return null_arg("json");
  if (!out) return null_arg("out");
  return guarded([&] {
    json result;
    try {
      result = diffscope::validate_document(json::parse(text));
    } catch (const json::parse_error& e) {
      result = {{"valid", false},
                {"errors", json::array({{{"pointer", ""},
                                         {"code", "SchemaError"},
                                         {"message", std::string("malformed JSON: ") + e.what()},
                                         {"position", e.byte}}})},
                {"violations", json::array()}};
    }
    if (valid) *valid = result["valid"].get<bool>() ? 1 : 0;
    *out = dup(format == DS_FORMAT_TEXT ? diffscope::render_validate_text(result) : pretty(result));
  });
}

ds_status ds_classify(const ds_model* model, const char* horizon, ds_format format, char** out,
                      int* all_conclusive) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  return guarded([&] {
    diffscope::ModelConfig cfg = model->config;
    if (horizon) cfg.horizon = diffscope::parse_horizon(horizon);
    const diffscope::ClassifyResult r = diffscope::run_classify(cfg);
    if (all_conclusive) *all_conclusive = r.all_requested_conclusive ? 1 : 0;
    *out = dup(format == DS_FORMAT_TEXT ? diffscope::render_classify_text(r.report) : pretty(r.report));
  });
}

ds_status ds_simulate(const ds_model* model, const char* options_json, ds_format format, char** out) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  return guarded([&] {
    using diffscope::Error;
    using diffscope::ErrorCode;
    diffscope::SimulationRequest req;
    if (options_json) {
      const json o = json::parse(options_json);
      if (!o.is_object()) throw Error(ErrorCode::InvalidArgument, "options must be a JSON object");
      for (auto it = o.begin(); it != o.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "mode") req.mode = diffscope::parse_simulation_mode(v.get<std::string>());
        else if (k == "T") req.T = v.get<double>();
        else if (k == "n_paths") req.n_paths = v.get<std::uint64_t>();
        else if (k == "seed") req.seed = v.get<std::uint64_t>();
        else if (k == "h") req.h = v.get<double>();
        else if (k == "interval") req.interval = std::make_pair(v.at(0).get<double>(), v.at(1).get<double>());
        else if (k == "exponential_holding") req.exponential_holding = v.get<bool>();
        else if (k == "spacing") {
          const std::string s = v.get<std::string>();
          if (s == "auto") req.spacing = diffscope::Spacing::Auto;
          else if (s == "uniform_scale") req.spacing = diffscope::Spacing::UniformScale;
          else if (s == "equal_time") req.spacing = diffscope::Spacing::EqualTime;
          else throw Error(ErrorCode::InvalidArgument, "spacing must be auto, uniform_scale or equal_time");
        } else {
          throw Error(ErrorCode::InvalidArgument, "unknown simulation option '" + k + "'");
        }
      }
    }
    const json result = diffscope::run_simulate(model->config, req);
    *out = dup(format == DS_FORMAT_TEXT ? diffscope::render_simulate_text(result) : pretty(result));
  });
}

}  // extern "C"
