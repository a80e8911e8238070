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

#include "diffscope/classifier.hpp"

#include <cmath>
#include <cstdio>

#include "diffscope/error.hpp"

namespace diffscope {

namespace {

constexpr Side kSides[] = {Side::Lower, Side::Upper};

Side other(Side s) { return s == Side::Lower ? Side::Upper : Side::Lower; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string describe(const IntegralVerdict& v) {
  switch (v.outcome) {
    case Outcome::Finite: return "finite (" + fmt(v.value) + " +- " + fmt(v.abs_err) + ")";
    case Outcome::Infinite: return std::string("infinite (") + to_string(v.divergence) + ")";
    case Outcome::Inconclusive: return "inconclusive: " + v.reason;
  }
  return "";
}

Truth is_finite(const IntegralVerdict& v) {
  if (v.finite()) return Truth::Holds;
  if (v.infinite()) return Truth::Fails;
  return Truth::Inconclusive;
}

Truth is_infinite(const IntegralVerdict& v) { return truth_not(is_finite(v)); }

Truth inaccessible(const BoundaryReport& r) {
  switch (r.accessibility) {
    case Accessibility::Inaccessible: return Truth::Holds;
    case Accessibility::Accessible: return Truth::Fails;
    case Accessibility::Inconclusive: return Truth::Inconclusive;
  }
  return Truth::Inconclusive;
}

Truth s_unbounded(const BoundaryReport& r) {
  switch (r.s_limit) {
    case Outcome::Infinite: return Truth::Holds;
    case Outcome::Finite: return Truth::Fails;
    case Outcome::Inconclusive: return Truth::Inconclusive;
  }
  return Truth::Inconclusive;
}

// Inaccessible, or accessible and absorbing.
Truth not_reflecting(const BoundaryReport& r) {
  if (r.accessibility == Accessibility::Inaccessible) return Truth::Holds;
  if (r.accessibility == Accessibility::Inconclusive) return Truth::Inconclusive;
  return r.behavior == Behavior::Absorbing ? Truth::Holds : Truth::Fails;
}

std::string access_text(const BoundaryReport& r) {
  std::string s = std::string("boundary ") + to_string(r.accessibility);
  if (r.behavior != Behavior::NotApplicable) s += std::string(", ") + to_string(r.behavior);
  return s;
}

void finish(Verdict& v) {
  if (v.value != Truth::Inconclusive || !v.reason.empty()) return;
  for (const TraceEntry& t : v.trace) {
    if (t.satisfied == Truth::Inconclusive) {
      v.reason = t.clause + (t.side ? std::string(" at ") + to_string(*t.side) : "") + ": " +
                 t.detail;
      return;
    }
  }
  v.reason = "undecided";
}

TraceEntry regularity_entry(const Verdict& reg) {
  return {"2.3", std::nullopt, reg.value,
          reg.value == Truth::Inconclusive ? reg.reason : "regularity condition"};
}

Verdict regularity_from(const DiffusionSpec& spec, const BoundaryReport& lower,
                        const BoundaryReport& upper, const ImproperConfig& cfg,
                        std::vector<CompactCheck>* checks_out) {
  Verdict v;
  v.value = Truth::Holds;
  const ScaleSpec& scale = spec.scale();
  if (!scale.has_beta()) {
    v.trace.push_back({"2.3(beta)", std::nullopt, Truth::Inconclusive,
                       "beta existence undeclared"});
    v.value = Truth::Inconclusive;
  } else {
    v.trace.push_back({"2.3(beta)", std::nullopt, Truth::Holds, "beta available"});
    Truth sq = Truth::Holds;
    std::string detail = "beta^2 integrable on the probed compact";
    const Compact compact{lower.anchor, upper.anchor};
    try {
      const RealFn beta = [&scale](double x) { return scale.beta(x); };
      const std::vector<CompactCheck> checks = check_local_sq_integrability(
          beta, std::span<const Compact>(&compact, 1), scale.singular_points(), cfg);
      for (const CompactCheck& c : checks) {
        if (c.verdict.infinite()) {
          sq = Truth::Fails;
          detail = "beta^2 not locally integrable" +
                   (c.witness ? " at x=" + fmt(*c.witness) : std::string());
        } else if (c.verdict.inconclusive() && sq == Truth::Holds) {
          sq = Truth::Inconclusive;
          detail = "local integrability of beta^2 undecided: " + c.verdict.reason;
        }
      }
      if (checks_out) *checks_out = checks;
    } catch (const Error& e) {
      sq = Truth::Inconclusive;
      detail = std::string("local integrability of beta^2 undecided: ") + e.what();
    }
    v.trace.push_back({"2.3(sq-int)", std::nullopt, sq, detail});
    v.value = truth_and(v.value, sq);
  }
  for (const BoundaryReport* r : {&lower, &upper}) {
    if (!r->b_finite) continue;
    const Truth t = not_reflecting(*r);
    v.trace.push_back({"2.3(boundary)", r->side, t, access_text(*r)});
    v.value = truth_and(v.value, t);
  }
  if (v.value == Truth::Fails) {
    for (const TraceEntry& t : v.trace) {
      if (t.satisfied == Truth::Fails) {
        v.reason = t.detail;
        break;
      }
    }
  }
  finish(v);
  return v;
}

bool has_finite_boundary(const Analysis& an) { return an.lower.b_finite || an.upper.b_finite; }

Verdict finite_horizon(const Analysis& an, bool nflvr) {
  Verdict v;
  v.value = an.regularity.value;
  v.trace.push_back(regularity_entry(an.regularity));
  const std::string tag = nflvr ? "2.8(ii" : "2.8(i";
  for (Side side : kSides) {
    const BoundaryReport& r = an.boundary(side);
    if (!r.b_finite) continue;
    const Truth a = is_finite(r.weighted_beta);
    v.trace.push_back({tag + ".a)", side, a, "weighted beta integral " + describe(r.weighted_beta)});
    Truth b = inaccessible(r);
    std::string detail = access_text(r);
    if (nflvr) {
      b = truth_and(b, is_infinite(r.weighted_speed));
      detail += "; weighted speed integral " + describe(r.weighted_speed);
    }
    v.trace.push_back({tag + ".b)", side, b, detail});
    v.value = truth_and(v.value, truth_or(a, b));
  }
  if (!has_finite_boundary(an)) {
    v.trace.push_back({tag + ")", std::nullopt, Truth::Holds, "no finite boundary point"});
  }
  finish(v);
  return v;
}

Verdict natural_scale_infinite(const Analysis& an) {
  Verdict v;
  v.value = Truth::Holds;
  for (Side side : kSides) {
    const BoundaryReport& r = an.boundary(side);
    if (!r.b_finite) continue;
    const Truth t = not_reflecting(r);
    v.trace.push_back({"2.11", side, t, access_text(r)});
    v.value = truth_and(v.value, t);
  }
  if (!has_finite_boundary(an)) {
    v.trace.push_back({"2.11", std::nullopt, Truth::Holds, "no finite boundary point"});
  }
  v.reason = "natural scale: decided by the natural-scale characterisation, not the "
             "infinite-horizon boundary clauses";
  return v;
}

Verdict infinite_horizon(const Analysis& an, bool nflvr) {
  if (an.natural_scale) return natural_scale_infinite(an);
  Verdict v;
  v.value = an.regularity.value;
  v.trace.push_back(regularity_entry(an.regularity));
  const std::string tag = nflvr ? "2.10(ii" : "2.10(i";
  auto clause_a = [](const BoundaryReport& r) {
    return r.b_finite ? is_finite(r.weighted_beta) : Truth::Fails;
  };
  for (Side side : kSides) {
    const BoundaryReport& r = an.boundary(side);
    const BoundaryReport& o = an.boundary(other(side));
    const Truth a = clause_a(r);
    v.trace.push_back({tag + ".a)", side, a,
                       r.b_finite ? "weighted beta integral " + describe(r.weighted_beta)
                                  : std::string("boundary infinite")});
    Truth b = truth_and(s_unbounded(r), clause_a(o));
    std::string detail = std::string("s at boundary ") +
                         (r.s_limit == Outcome::Infinite  ? "unbounded"
                          : r.s_limit == Outcome::Finite ? "bounded"
                                                          : "undecided") +
                         "; other boundary " +
                         (clause_a(o) == Truth::Holds ? "satisfies" : "does not satisfy") +
                         " clause a";
    if (nflvr && r.b_finite) {
      b = Truth::Fails;
      detail = "boundary finite";
    }
    v.trace.push_back({tag + ".b)", side, b, detail});
    v.value = truth_and(v.value, truth_or(a, b));
  }
  finish(v);
  return v;
}

void enforce_implication(Verdict& stronger, Verdict& weaker, const char* what) {
  if (stronger.value == Truth::Holds && weaker.value == Truth::Fails) {
    for (Verdict* v : {&stronger, &weaker}) {
      v->value = Truth::Inconclusive;
      v->reason = std::string("internal inconsistency: ") + what;
      v->trace.push_back({"InternalInconsistency", std::nullopt, Truth::Inconclusive, what});
    }
  }
}

}  // namespace

const char* to_string(Truth t) noexcept {
  switch (t) {
    case Truth::Holds: return "holds";
    case Truth::Fails: return "fails";
    case Truth::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(Horizon h) noexcept { return h == Horizon::Finite ? "finite" : "infinite"; }

Truth truth_and(Truth a, Truth b) noexcept {
  if (a == Truth::Fails || b == Truth::Fails) return Truth::Fails;
  if (a == Truth::Holds && b == Truth::Holds) return Truth::Holds;
  return Truth::Inconclusive;
}

Truth truth_or(Truth a, Truth b) noexcept {
  if (a == Truth::Holds || b == Truth::Holds) return Truth::Holds;
  if (a == Truth::Fails && b == Truth::Fails) return Truth::Fails;
  return Truth::Inconclusive;
}

Truth truth_not(Truth a) noexcept {
  if (a == Truth::Holds) return Truth::Fails;
  if (a == Truth::Fails) return Truth::Holds;
  return Truth::Inconclusive;
}

Analysis analyze(const DiffusionSpec& spec, const ImproperConfig& cfg) {
  cfg.check();
  Analysis an;
  an.lower = boundary_report(spec, Side::Lower, cfg);
  an.upper = boundary_report(spec, Side::Upper, cfg);
  an.natural_scale = spec.natural_scale();
  an.regularity = regularity_from(spec, an.lower, an.upper, cfg, &an.local_checks);
  return an;
}

Verdict regularity_condition(const DiffusionSpec& spec, const ImproperConfig& cfg) {
  return analyze(spec, cfg).regularity;
}

Verdict verdict_nupbr(const Analysis& an, Horizon horizon) {
  return horizon == Horizon::Finite ? finite_horizon(an, false) : infinite_horizon(an, false);
}

Verdict verdict_nflvr(const Analysis& an, Horizon horizon) {
  return horizon == Horizon::Finite ? finite_horizon(an, true) : infinite_horizon(an, true);
}

Verdict verdict_emm(const Analysis& an, Horizon horizon) {
  Verdict v;
  if (horizon == Horizon::Finite) {
    const Verdict nflvr = finite_horizon(an, true);
    v.value = nflvr.value;
    v.trace.push_back({"2.8(ii)", std::nullopt, nflvr.value,
                       nflvr.value == Truth::Inconclusive ? nflvr.reason
                                                          : "no free lunch on a finite horizon"});
    for (Side side : kSides) {
      const BoundaryReport& r = an.boundary(side);
      if (r.b_finite) continue;
      const Truth k = is_infinite(r.kotani);
      v.trace.push_back({"2.12", side, k, "speed-weighted |x| s' integral " + describe(r.kotani)});
      v.value = truth_and(v.value, k);
    }
  } else {
    v.value = an.regularity.value;
    v.trace.push_back(regularity_entry(an.regularity));
    for (Side side : kSides) {
      const BoundaryReport& r = an.boundary(side);
      const Truth t = r.b_finite ? is_finite(r.weighted_beta) : Truth::Fails;
      v.trace.push_back({"2.13", side, t,
                         r.b_finite ? "weighted beta integral " + describe(r.weighted_beta)
                                    : std::string("boundary infinite")});
      v.value = truth_and(v.value, t);
    }
  }
  finish(v);
  return v;
}

ArbitrageReport classify(const DiffusionSpec& spec, const ImproperConfig& cfg) {
  const Analysis an = analyze(spec, cfg);
  ArbitrageReport rep;
  rep.lower = an.lower;
  rep.upper = an.upper;
  rep.natural_scale = an.natural_scale;
  rep.regularity = an.regularity;
  rep.local_checks = an.local_checks;
  rep.nupbr_finite = verdict_nupbr(an, Horizon::Finite);
  rep.nflvr_finite = verdict_nflvr(an, Horizon::Finite);
  rep.emm_finite = verdict_emm(an, Horizon::Finite);
  rep.nupbr_infinite = verdict_nupbr(an, Horizon::Infinite);
  rep.nflvr_infinite = verdict_nflvr(an, Horizon::Infinite);
  rep.emm_infinite = verdict_emm(an, Horizon::Infinite);
  rep.audit_lower = consistency_audit(an.lower);
  rep.audit_upper = consistency_audit(an.upper);

  Verdict* all[] = {&rep.nupbr_finite,   &rep.nflvr_finite,   &rep.emm_finite,
                    &rep.nupbr_infinite, &rep.nflvr_infinite, &rep.emm_infinite};
  const StateInterval& J = spec.interval();
  for (Side side : kSides) {
    const BoundaryReport& r = rep.boundary(side);
    const std::string where = std::string(to_string(side)) + " boundary";
    if (!r.b_finite && r.accessibility == Accessibility::Accessible) {
      rep.warnings.push_back(where + " is infinite and accessible; outside the model class");
      for (Verdict* v : all) {
        v->value = Truth::Inconclusive;
        v->reason = where + " is infinite and accessible (explosion); outside the model class";
      }
      continue;
    }
    if (!r.b_finite) continue;
    if (r.accessibility == Accessibility::Accessible && !J.closed(side)) {
      rep.warnings.push_back(where + " is accessible but declared open");
    } else if (r.accessibility == Accessibility::Inaccessible && J.closed(side)) {
      rep.warnings.push_back(where + " is inaccessible but declared closed");
    }
  }
  for (const AuditResult* a : {&rep.audit_lower, &rep.audit_upper}) {
    for (const std::string& msg : a->inconsistencies) {
      rep.warnings.push_back(std::string(a == &rep.audit_lower ? "lower" : "upper") +
                             " boundary consistency audit: " + msg);
    }
  }
  if (rep.natural_scale) {
    rep.warnings.push_back(
        "natural scale: infinite-horizon verdicts use the natural-scale characterisation");
  }

  for (int pass = 0; pass < 3; ++pass) {
    enforce_implication(rep.nflvr_finite, rep.nupbr_finite, "NFLVR holds but NUPBR fails (finite)");
    enforce_implication(rep.nflvr_infinite, rep.nupbr_infinite,
                        "NFLVR holds but NUPBR fails (infinite)");
    enforce_implication(rep.emm_finite, rep.nflvr_finite, "EMM holds but NFLVR fails (finite)");
    enforce_implication(rep.nupbr_infinite, rep.nupbr_finite,
                        "NUPBR holds on the infinite but fails on a finite horizon");
    enforce_implication(rep.nflvr_infinite, rep.nflvr_finite,
                        "NFLVR holds on the infinite but fails on a finite horizon");
    enforce_implication(rep.emm_infinite, rep.emm_finite,
                        "EMM holds on the infinite but fails on a finite horizon");
  }
  return rep;
}

}  // namespace diffscope
