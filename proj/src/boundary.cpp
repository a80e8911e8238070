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

#include "diffscope/boundary.hpp"

#include <cmath>
#include <functional>

#include "coords.hpp"
#include "cumulative.hpp"
#include "diffscope/error.hpp"

namespace diffscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

IntegralVerdict guarded(const std::function<IntegralVerdict()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    IntegralVerdict v = IntegralVerdict::make_inconclusive(e.what());
    v.non_finite_evaluation = e.code() == ErrorCode::NonFiniteEvaluation;
    return v;
  }
}

IntegralVerdict not_evaluated(const char* why) {
  return IntegralVerdict::make_inconclusive(why);
}

}  // namespace

const char* to_string(Accessibility a) noexcept {
  switch (a) {
    case Accessibility::Accessible: return "accessible";
    case Accessibility::Inaccessible: return "inaccessible";
    case Accessibility::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(Behavior b) noexcept {
  switch (b) {
    case Behavior::Absorbing: return "absorbing";
    case Behavior::Reflecting: return "reflecting";
    case Behavior::NotApplicable: return "not_applicable";
  }
  return "not_applicable";
}

AccessibilityResult feller_accessibility(const DiffusionSpec& spec, Side side,
                                         const ImproperConfig& cfg) {
  AccessibilityResult out;
  const double b = spec.interval().endpoint(side);
  const double c = spec.boundary_anchor(side);
  const ScaleSpec& scale = spec.scale();
  const RealFn log_sp = [&scale](double x) { return scale.log_s_prime(x); };

  out.scale_limit = guarded([&] { return decide_improper_log(log_sp, b, c, cfg); });
  if (out.scale_limit.inconclusive()) {
    out.reason = "limit of s at the boundary undecided: " + out.scale_limit.reason;
    return out;
  }
  if (out.scale_limit.infinite()) {
    out.value = Accessibility::Inaccessible;
    out.reason = "s is unbounded at the boundary";
    return out;
  }

  // Fubini form: integral over y in B of s'(y) * m((c, y]). No atom lies
  // between the anchor and the boundary, so m((c, y]) is a density integral.
  const detail::CoordinateMap map(spec.interval().l, spec.interval().r);
  const SpeedSpec& speed = spec.speed();
  const detail::CumulativeIntegral log_mass(
      [&speed](double x) { return speed.log_density(x); }, c, map, {},
      detail::CumulativeIntegral::Mode::Log);
  const RealFn integrand = [&](double y) {
    const double lm = log_mass(y);
    if (lm == -kInf) return -kInf;
    return scale.log_s_prime(y) + lm;
  };
  out.feller = guarded([&] { return decide_improper_log(integrand, b, c, cfg); });
  if (out.feller.finite()) {
    out.value = Accessibility::Accessible;
    out.reason = "s is bounded and the speed-weighted scale distance is integrable";
  } else if (out.feller.infinite()) {
    out.value = Accessibility::Inaccessible;
    out.reason = "s is bounded but the speed-weighted scale distance is not integrable";
  } else {
    out.reason = "speed-weighted scale distance undecided: " + out.feller.reason;
  }
  return out;
}

Behavior boundary_behavior(const DiffusionSpec& spec, Side side, Accessibility accessibility) {
  if (accessibility != Accessibility::Accessible) return Behavior::NotApplicable;
  return spec.speed().boundary_mass(side) == kInf ? Behavior::Absorbing : Behavior::Reflecting;
}

IntegralVerdict weighted_beta_integral(const DiffusionSpec& spec, Side side,
                                       const ImproperConfig& cfg) {
  const double b = spec.interval().endpoint(side);
  if (!std::isfinite(b)) return not_evaluated("boundary infinite");
  if (!spec.scale().has_beta()) return not_evaluated("no beta");
  const double c = spec.boundary_anchor(side);
  const ScaleSpec& scale = spec.scale();
  const RealFn integrand = [&](double x) {
    const double be = scale.beta(x);
    return std::log(std::fabs(x - b)) + 2.0 * std::log(std::fabs(be));
  };
  return guarded([&] { return decide_improper_log(integrand, b, c, cfg); });
}

IntegralVerdict weighted_speed_integral(const DiffusionSpec& spec, Side side,
                                        const ImproperConfig& cfg) {
  const double b = spec.interval().endpoint(side);
  if (!std::isfinite(b)) return not_evaluated("boundary infinite");
  const double c = spec.boundary_anchor(side);
  const ScaleSpec& scale = spec.scale();
  const RealFn log_g = [&](double x) { return std::log(std::fabs(x - b)) + scale.log_s_prime(x); };
  return guarded([&] { return decide_measure_integral_log(log_g, spec.speed(), b, c, cfg); });
}

IntegralVerdict kotani_integral(const DiffusionSpec& spec, Side side, const ImproperConfig& cfg) {
  const double b = spec.interval().endpoint(side);
  if (std::isfinite(b)) return not_evaluated("boundary finite");
  const double c = spec.boundary_anchor(side);
  const ScaleSpec& scale = spec.scale();
  const RealFn log_g = [&](double x) { return std::log(std::fabs(x)) + scale.log_s_prime(x); };
  return guarded([&] { return decide_measure_integral_log(log_g, spec.speed(), b, c, cfg); });
}

BoundaryReport boundary_report(const DiffusionSpec& spec, Side side, const ImproperConfig& cfg) {
  BoundaryReport r;
  r.side = side;
  r.b = spec.interval().endpoint(side);
  r.b_finite = std::isfinite(r.b);
  r.anchor = spec.boundary_anchor(side);

  const AccessibilityResult acc = feller_accessibility(spec, side, cfg);
  r.s_limit = acc.scale_limit.outcome;
  if (acc.scale_limit.finite()) {
    try {
      const double sc = spec.scale().s(r.anchor);
      r.s_at_b = side == Side::Lower ? sc - acc.scale_limit.value : sc + acc.scale_limit.value;
    } catch (const Error&) {
      r.s_at_b = std::numeric_limits<double>::quiet_NaN();
    }
  } else if (acc.scale_limit.infinite()) {
    r.s_at_b = side == Side::Lower ? -kInf : kInf;
  }
  r.accessibility = acc.value;
  r.accessibility_reason = acc.reason;
  r.feller = acc.feller;
  r.behavior = boundary_behavior(spec, side, acc.value);

  if (r.b_finite) {
    r.weighted_beta = weighted_beta_integral(spec, side, cfg);
    r.weighted_speed = weighted_speed_integral(spec, side, cfg);
    r.kotani = not_evaluated("boundary finite");
  } else {
    r.weighted_beta = not_evaluated("boundary infinite");
    r.weighted_speed = not_evaluated("boundary infinite");
    r.kotani = kotani_integral(spec, side, cfg);
  }
  return r;
}

AuditResult consistency_audit(const BoundaryReport& report) {
  AuditResult out;
  if (!report.b_finite) {
    out.skipped = true;
    out.skip_reason = "boundary infinite";
    return out;
  }
  if (report.s_limit == Outcome::Inconclusive ||
      report.accessibility == Accessibility::Inconclusive ||
      report.weighted_beta.inconclusive() || report.weighted_speed.inconclusive()) {
    out.skipped = true;
    out.skip_reason = "inconclusive input";
    return out;
  }
  const bool s_inf = report.s_limit == Outcome::Infinite;
  const bool acc = report.accessibility == Accessibility::Accessible;
  const bool wb_fin = report.weighted_beta.finite();
  const bool ws_inf = report.weighted_speed.infinite();
  if (s_inf && wb_fin) out.inconsistencies.push_back("ConsistencyViolation(i)");
  if (((acc && ws_inf) || (!acc && !ws_inf)) && wb_fin) {
    out.inconsistencies.push_back("ConsistencyViolation(ii)");
  }
  if (wb_fin && !((!acc && ws_inf) || (acc && !ws_inf))) {
    out.inconsistencies.push_back("ConsistencyViolation(iii)");
  }
  return out;
}

}  // namespace diffscope
