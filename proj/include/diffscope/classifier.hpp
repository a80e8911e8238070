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
#include <vector>

#include "diffscope/boundary.hpp"
#include "diffscope/model.hpp"

namespace diffscope {

enum class Truth { Holds, Fails, Inconclusive };
enum class Horizon { Finite, Infinite };

const char* to_string(Truth t) noexcept;
const char* to_string(Horizon h) noexcept;

Truth truth_and(Truth a, Truth b) noexcept;
Truth truth_or(Truth a, Truth b) noexcept;
Truth truth_not(Truth a) noexcept;

struct TraceEntry {
  std::string clause;  // label of the characterising clause, e.g. "2.8(i.b)"
  std::optional<Side> side;
  Truth satisfied = Truth::Inconclusive;
  std::string detail;
};

struct Verdict {
  Truth value = Truth::Inconclusive;
  std::vector<TraceEntry> trace;
  std::string reason;
};

struct ArbitrageReport {
  Verdict regularity;
  Verdict nupbr_finite;
  Verdict nflvr_finite;
  Verdict emm_finite;
  Verdict nupbr_infinite;
  Verdict nflvr_infinite;
  Verdict emm_infinite;
  BoundaryReport lower;
  BoundaryReport upper;
  bool natural_scale = false;
  AuditResult audit_lower;
  AuditResult audit_upper;
  std::vector<CompactCheck> local_checks;
  std::vector<std::string> warnings;

  const BoundaryReport& boundary(Side side) const { return side == Side::Lower ? lower : upper; }
};

// Boundary reports and the regularity verdict, shared by the verdict functions.
struct Analysis {
  BoundaryReport lower;
  BoundaryReport upper;
  bool natural_scale = false;
  Verdict regularity;
  std::vector<CompactCheck> local_checks;

  const BoundaryReport& boundary(Side side) const { return side == Side::Lower ? lower : upper; }
};

Analysis analyze(const DiffusionSpec& spec, const ImproperConfig& cfg = {});

Verdict regularity_condition(const DiffusionSpec& spec, const ImproperConfig& cfg = {});
Verdict verdict_nupbr(const Analysis& an, Horizon horizon);
Verdict verdict_nflvr(const Analysis& an, Horizon horizon);
Verdict verdict_emm(const Analysis& an, Horizon horizon);

ArbitrageReport classify(const DiffusionSpec& spec, const ImproperConfig& cfg = {});

}  // namespace diffscope
