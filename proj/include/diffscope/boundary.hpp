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

#include <string>
#include <vector>

#include "diffscope/model.hpp"
#include "diffscope/quadrature.hpp"

namespace diffscope {

enum class Accessibility { Accessible, Inaccessible, Inconclusive };
enum class Behavior { Absorbing, Reflecting, NotApplicable };

const char* to_string(Accessibility a) noexcept;
const char* to_string(Behavior b) noexcept;

struct AccessibilityResult {
  Accessibility value = Accessibility::Inconclusive;
  IntegralVerdict scale_limit;  // integral of s' toward b
  IntegralVerdict feller;       // integral of |s(b) - s| dm (evaluated only if s(b) is finite)
  std::string reason;
};

struct BoundaryReport {
  Side side = Side::Lower;
  double b = 0.0;
  bool b_finite = true;
  double anchor = 0.0;

  // Limit of s at b: Finite, Infinite or Inconclusive, and its value.
  Outcome s_limit = Outcome::Inconclusive;
  double s_at_b = std::numeric_limits<double>::quiet_NaN();

  Accessibility accessibility = Accessibility::Inconclusive;
  std::string accessibility_reason;
  IntegralVerdict feller;
  Behavior behavior = Behavior::NotApplicable;

  IntegralVerdict weighted_beta;   // integral of |x-b| beta^2 dx (finite b)
  IntegralVerdict weighted_speed;  // integral of |x-b| s' dm (finite b)
  IntegralVerdict kotani;          // integral of |x| s' dm (infinite b)

  bool s_finite() const { return s_limit == Outcome::Finite; }
};

AccessibilityResult feller_accessibility(const DiffusionSpec& spec, Side side,
                                         const ImproperConfig& cfg = {});
Behavior boundary_behavior(const DiffusionSpec& spec, Side side, Accessibility accessibility);
IntegralVerdict weighted_beta_integral(const DiffusionSpec& spec, Side side,
                                       const ImproperConfig& cfg = {});
IntegralVerdict weighted_speed_integral(const DiffusionSpec& spec, Side side,
                                        const ImproperConfig& cfg = {});
IntegralVerdict kotani_integral(const DiffusionSpec& spec, Side side,
                                const ImproperConfig& cfg = {});
BoundaryReport boundary_report(const DiffusionSpec& spec, Side side,
                               const ImproperConfig& cfg = {});

struct AuditResult {
  bool skipped = false;
  std::string skip_reason;
  std::vector<std::string> inconsistencies;  // "ConsistencyViolation(i)" etc.

  bool consistent() const { return !skipped && inconsistencies.empty(); }
};

// Cross-checks the scale limit, accessibility and the two weighted integrals
// at a finite boundary against the implications they must satisfy.
AuditResult consistency_audit(const BoundaryReport& report);

}  // namespace diffscope
