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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diffscope/error.hpp"
#include "diffscope/model.hpp"
#include "diffscope/quadrature.hpp"
#include "diffscope/simulator.hpp"

namespace diffscope {

enum class HorizonSelection { Finite, Infinite, Both };

const char* to_string(HorizonSelection h) noexcept;
HorizonSelection parse_horizon(std::string_view text);

struct SimulationSettings {
  double h = 0.02;
  std::optional<std::pair<double, double>> truncation;
  std::uint64_t n_paths = 100000;
  std::uint64_t seed = 1;
  double T = 1.0;
  Spacing spacing = Spacing::Auto;
  bool exponential_holding = false;
  double eps_floor = 1e-12;
  std::uint64_t max_steps = 2'000'000'000ULL;
};

struct ModelConfig {
  nlohmann::json document;  // as supplied, used for echo and hashing
  std::string name;
  DiffusionSpec spec;
  HorizonSelection horizon = HorizonSelection::Both;
  ImproperConfig quadrature;
  SimulationSettings simulation;
  int probes = 512;
};

// One problem in a configuration document, located by JSON pointer.
struct ConfigIssue {
  std::string pointer;
  ErrorCode code = ErrorCode::SchemaError;
  std::string message;
  std::optional<std::size_t> position;  // expression parse errors
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

// Parses and validates a model document. `check` = false skips the
// semantic validation pass (used by `validate`, which reports it itself).
ModelConfig parse_model_config(const nlohmann::json& document, bool check = true);
ModelConfig parse_model_config_text(std::string_view text, bool check = true);

// JSON document with sorted keys and no whitespace.
std::string canonical_json(const nlohmann::json& document);
std::string sha256_hex(std::string_view data);
std::string config_hash(const nlohmann::json& document);

// "inf" / "-inf" strings for infinities, plain numbers otherwise.
nlohmann::json encode_real(double v);

// Truncation used when the document gives none: closed finite ends are kept,
// open finite ends are pulled in by 1e-3 of the distance to x0 and infinite
// ends are replaced by x0 -+ 20 max(1, |x0|).
std::pair<double, double> default_truncation(const DiffusionSpec& spec);

// JSON pointer of the document field a validation violation refers to.
std::string violation_pointer(const std::string& kind);

}  // namespace diffscope
