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

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "config.hpp"
#include "diffscope/classifier.hpp"

namespace diffscope {

struct ClassifyResult {
  nlohmann::json report;
  bool all_requested_conclusive = false;
};

ClassifyResult run_classify(const ModelConfig& config);
std::string render_classify_text(const nlohmann::json& report);

enum class SimulationMode { Smd, Exit, Paths, Gap };

SimulationMode parse_simulation_mode(std::string_view text);
const char* to_string(SimulationMode m) noexcept;

// Command-line overrides for the document's simulation block.
struct SimulationRequest {
  SimulationMode mode = SimulationMode::Smd;
  std::optional<double> T;
  std::optional<std::uint64_t> n_paths;
  std::optional<std::uint64_t> seed;
  std::optional<double> h;
  std::optional<std::pair<double, double>> interval;
  std::optional<Spacing> spacing;
  std::optional<bool> exponential_holding;
};

nlohmann::json run_simulate(const ModelConfig& config, const SimulationRequest& request);
std::string render_simulate_text(const nlohmann::json& result);

// Schema and semantic check of a document; never throws for bad documents.
nlohmann::json validate_document(const nlohmann::json& document);
std::string render_validate_text(const nlohmann::json& result);

nlohmann::json catalog_listing();
std::string render_catalog_text(const nlohmann::json& listing);

}  // namespace diffscope
