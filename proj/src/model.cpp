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

#include "diffscope/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "coords.hpp"
#include "cumulative.hpp"
#include "diffscope/error.hpp"

namespace diffscope {

namespace detail {

class ScaleState {
 public:
  ScaleSpec::Form form = ScaleSpec::Form::Beta;
  RealFn mu;
  RealFn a;
  RealFn beta;  // empty when undeclared (raw form)
  RealFn s_raw;
  RealFn s_prime_raw;
  bool natural_flag = false;
  double anchor = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> singular;
  double factor = 1.0;
  double shift = 0.0;
  std::shared_ptr<CumulativeIntegral> log_s_prime;  // integral of beta from the anchor
  std::shared_ptr<CumulativeIntegral> s;            // integral of exp(log_s_prime)

  void build_caches(const CoordinateMap& map) {
    if (form == ScaleSpec::Form::Raw) return;
    log_s_prime = std::make_shared<CumulativeIntegral>(beta, anchor, map, singular);
    auto lsp = log_s_prime;
    s = std::make_shared<CumulativeIntegral>([lsp](double x) { return std::exp((*lsp)(x)); },
                                             anchor, map, singular);
  }
};

}  // namespace detail

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const detail::CoordinateMap kLineMap(-kInf, kInf);

}  // namespace

const char* to_string(Side side) noexcept { return side == Side::Lower ? "lower" : "upper"; }

ScaleSpec::ScaleSpec(std::shared_ptr<const detail::ScaleState> state) : state_(std::move(state)) {}

ScaleSpec ScaleSpec::from_ito(RealFn mu, RealFn a, double anchor,
                              std::vector<double> singular_points) {
  if (!mu || !a) throw Error(ErrorCode::InvalidArgument, "Ito form needs mu and a");
  auto st = std::make_shared<detail::ScaleState>();
  st->form = Form::Ito;
  st->mu = mu;
  st->a = a;
  st->beta = [mu, a](double x) {
    const double av = a(x);
    if (!(av > 0.0)) {
      throw Error(ErrorCode::NonPositiveDiffusion,
                  "diffusion coefficient a(" + fmt(x) + ") = " + fmt(av) + " is not positive");
    }
    return -2.0 * mu(x) / av;
  };
  st->anchor = anchor;
  st->singular = std::move(singular_points);
  st->build_caches(kLineMap);
  return ScaleSpec(st);
}

ScaleSpec scale_from_ito(RealFn mu, RealFn a, double anchor, std::vector<double> singular_points) {
  return ScaleSpec::from_ito(std::move(mu), std::move(a), anchor, std::move(singular_points));
}

ScaleSpec ScaleSpec::from_beta(RealFn beta, double anchor, std::vector<double> singular_points) {
  if (!beta) throw Error(ErrorCode::InvalidArgument, "beta form needs beta");
  auto st = std::make_shared<detail::ScaleState>();
  st->form = Form::Beta;
  st->beta = std::move(beta);
  st->anchor = anchor;
  st->singular = std::move(singular_points);
  st->build_caches(kLineMap);
  return ScaleSpec(st);
}

ScaleSpec ScaleSpec::from_raw(RealFn s, RealFn s_prime, std::optional<RealFn> beta,
                              bool natural_scale, std::vector<double> singular_points) {
  if (!s || !s_prime) throw Error(ErrorCode::InvalidArgument, "raw form needs s and s'");
  auto st = std::make_shared<detail::ScaleState>();
  st->form = Form::Raw;
  st->s_raw = std::move(s);
  st->s_prime_raw = std::move(s_prime);
  if (beta && *beta) {
    st->beta = std::move(*beta);
  } else if (natural_scale) {
    st->beta = [](double) { return 0.0; };
  }
  st->natural_flag = natural_scale;
  st->singular = std::move(singular_points);
  return ScaleSpec(st);
}

ScaleSpec ScaleSpec::affine(double factor, double shift) const {
  if (!(factor > 0.0) || !std::isfinite(factor) || !std::isfinite(shift)) {
    throw Error(ErrorCode::InvalidArgument, "affine scale map needs factor > 0 and finite shift");
  }
  auto st = std::make_shared<detail::ScaleState>(*state_);
  st->factor = state_->factor * factor;
  st->shift = state_->shift * factor + shift;
  return ScaleSpec(st);
}

ScaleSpec ScaleSpec::bound_to(const StateInterval& interval) const {
  auto st = std::make_shared<detail::ScaleState>(*state_);
  st->build_caches(detail::CoordinateMap(interval.l, interval.r));
  return ScaleSpec(st);
}

ScaleSpec::Form ScaleSpec::form() const { return state_->form; }
bool ScaleSpec::has_beta() const { return static_cast<bool>(state_->beta); }
bool ScaleSpec::declared_natural() const { return state_->natural_flag; }
double ScaleSpec::anchor() const { return state_->anchor; }
const std::vector<double>& ScaleSpec::singular_points() const { return state_->singular; }
double ScaleSpec::factor() const { return state_->factor; }
double ScaleSpec::shift() const { return state_->shift; }

double ScaleSpec::s(double x) const {
  if (state_->form == Form::Raw) return state_->factor * state_->s_raw(x) + state_->shift;
  return state_->factor * (*state_->s)(x) + state_->shift;
}

double ScaleSpec::log_s_prime(double x) const {
  if (state_->form == Form::Raw) return std::log(state_->factor * state_->s_prime_raw(x));
  return std::log(state_->factor) + (*state_->log_s_prime)(x);
}

double ScaleSpec::s_prime(double x) const { return std::exp(log_s_prime(x)); }

double ScaleSpec::beta(double x) const {
  if (!state_->beta) {
    throw Error(ErrorCode::InvalidArgument, "beta is not declared for this scale function");
  }
  return state_->beta(x);
}

double ScaleSpec::mu(double x) const {
  if (state_->form != Form::Ito) throw Error(ErrorCode::InvalidArgument, "not an Ito form");
  return state_->mu(x);
}

double ScaleSpec::a(double x) const {
  if (state_->form != Form::Ito) throw Error(ErrorCode::InvalidArgument, "not an Ito form");
  return state_->a(x);
}

SpeedSpec::SpeedSpec() : fn_([](double) { return 1.0; }), log_density_([](double) { return 0.0; }) {}

SpeedSpec SpeedSpec::lebesgue(RealFn rho, std::vector<Atom> atoms, double mass_l, double mass_r) {
  if (!rho) throw Error(ErrorCode::InvalidArgument, "speed density is empty");
  SpeedSpec sp;
  sp.form_ = DensityForm::Lebesgue;
  sp.fn_ = rho;
  sp.log_density_ = [rho](double x) {
    const double v = rho(x);
    if (v < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::log(v);
  };
  sp.atoms_ = std::move(atoms);
  sp.mass_l_ = mass_l;
  sp.mass_r_ = mass_r;
  return sp;
}

SpeedSpec SpeedSpec::scale_relative(RealFn w, std::vector<Atom> atoms, double mass_l,
                                    double mass_r) {
  if (!w) throw Error(ErrorCode::InvalidArgument, "speed weight is empty");
  SpeedSpec sp;
  sp.form_ = DensityForm::ScaleRelative;
  sp.fn_ = std::move(w);
  sp.log_density_ = nullptr;
  sp.atoms_ = std::move(atoms);
  sp.mass_l_ = mass_l;
  sp.mass_r_ = mass_r;
  return sp;
}

SpeedSpec SpeedSpec::from_log_density(RealFn log_rho, std::vector<Atom> atoms, double mass_l,
                                      double mass_r) {
  if (!log_rho) throw Error(ErrorCode::InvalidArgument, "speed log-density is empty");
  SpeedSpec sp;
  sp.form_ = DensityForm::Lebesgue;
  sp.fn_ = [log_rho](double x) { return std::exp(log_rho(x)); };
  sp.log_density_ = std::move(log_rho);
  sp.atoms_ = std::move(atoms);
  sp.mass_l_ = mass_l;
  sp.mass_r_ = mass_r;
  return sp;
}

SpeedSpec SpeedSpec::with_boundary_masses(double mass_l, double mass_r) const {
  SpeedSpec sp = *this;
  sp.mass_l_ = mass_l;
  sp.mass_r_ = mass_r;
  return sp;
}

SpeedSpec SpeedSpec::with_atoms(std::vector<Atom> atoms) const {
  SpeedSpec sp = *this;
  sp.atoms_ = std::move(atoms);
  return sp;
}

SpeedSpec SpeedSpec::bound_to(const ScaleSpec& scale) const {
  if (form_ != DensityForm::ScaleRelative) return *this;
  SpeedSpec sp = *this;
  // Relative to the normalised s' so that an affine change of s leaves m fixed.
  const RealFn w = fn_;
  sp.log_density_ = [w, scale](double x) {
    const double v = w(x);
    if (v < 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (v == 0.0) return -kInf;
    return std::log(v) - (scale.log_s_prime(x) - std::log(scale.factor()));
  };
  return sp;
}

double SpeedSpec::log_density(double x) const {
  if (!log_density_) {
    throw Error(ErrorCode::InvalidArgument,
                "scale-relative speed density used before binding to a scale function");
  }
  return log_density_(x);
}

double SpeedSpec::density(double x) const { return std::exp(log_density(x)); }

DiffusionSpec::DiffusionSpec(StateInterval interval, ScaleSpec scale, SpeedSpec speed, double x0)
    : interval_(interval),
      scale_(scale.bound_to(interval)),
      speed_(speed.bound_to(scale_)),
      x0_(x0) {}

DiffusionSpec DiffusionSpec::with_scale(ScaleSpec scale) const {
  return DiffusionSpec(interval_, std::move(scale), speed_, x0_);
}

DiffusionSpec DiffusionSpec::with_speed(SpeedSpec speed) const {
  return DiffusionSpec(interval_, scale_, std::move(speed), x0_);
}

std::vector<double> DiffusionSpec::special_points() const {
  std::set<double> pts;
  if (interval_.interior(x0_)) pts.insert(x0_);
  for (double p : scale_.singular_points()) {
    if (interval_.interior(p)) pts.insert(p);
  }
  for (const Atom& at : speed_.atoms()) {
    if (interval_.interior(at.z)) pts.insert(at.z);
  }
  return {pts.begin(), pts.end()};
}

double DiffusionSpec::boundary_anchor(Side side) const {
  const std::vector<double> pts = special_points();
  if (pts.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no interior reference point (x0 outside J)");
  }
  const double b = interval_.endpoint(side);
  const double p = side == Side::Lower ? pts.front() : pts.back();
  if (std::isfinite(b)) return 0.5 * (p + b);
  const double dir = side == Side::Lower ? -1.0 : 1.0;
  return p + dir * std::max(1.0, std::fabs(p));
}

std::vector<double> DiffusionSpec::probe_points(int n) const {
  const detail::CoordinateMap map(interval_.l, interval_.r);
  std::vector<double> pts = special_points();
  if (pts.empty()) pts.push_back(std::isfinite(interval_.l) && std::isfinite(interval_.r)
                                     ? 0.5 * (interval_.l + interval_.r)
                                     : 0.0);
  const double t_lo = map.to_t(pts.front()) - 10.0;
  const double t_hi = map.to_t(pts.back()) + 10.0;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  const auto& sing = scale_.singular_points();
  for (int i = 0; i < n; ++i) {
    const double t = t_lo + (t_hi - t_lo) * (i + 0.5) / n;
    const double x = map.to_x(t);
    if (!interval_.interior(x)) continue;
    if (std::find(sing.begin(), sing.end(), x) != sing.end()) continue;
    if (!out.empty() && x <= out.back()) continue;
    out.push_back(x);
  }
  return out;
}

bool DiffusionSpec::natural_scale() const {
  if (scale_.form() == ScaleSpec::Form::Raw) return scale_.declared_natural();
  try {
    for (double x : probe_points()) {
      if (!(std::fabs(scale_.beta(x)) <= 1e-12)) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

ScaleValues eval_scale(const DiffusionSpec& spec, double x) {
  if (!spec.interval().interior(x)) {
    throw Error(ErrorCode::OutOfDomain, "x=" + fmt(x) + " is not an interior point of J");
  }
  const auto& sing = spec.scale().singular_points();
  if (std::find(sing.begin(), sing.end(), x) != sing.end()) {
    throw Error(ErrorCode::SingularPoint, "x=" + fmt(x) + " is a declared singular point");
  }
  ScaleValues v{spec.scale().s(x), spec.scale().s_prime(x), std::nullopt};
  if (spec.scale().has_beta()) v.beta = spec.scale().beta(x);
  return v;
}

namespace {

// Integral of the speed density over (a, b), either end possibly a boundary.
double density_mass(const DiffusionSpec& spec, double a, double b, const ImproperConfig& cfg) {
  const StateInterval& J = spec.interval();
  const RealFn log_rho = [&spec](double x) { return spec.speed().log_density(x); };
  const bool a_edge = a == J.l;
  const bool b_edge = b == J.r;
  if (!a_edge && !b_edge) {
    try {
      const LogQuadResult q = integrate_log(log_rho, a, b, 1e-11);
      return std::exp(q.log_value);
    } catch (const Error& e) {
      throw Error(ErrorCode::IntegrationFailure, e.what());
    }
  }
  double mid;
  if (std::isfinite(a) && std::isfinite(b)) {
    mid = 0.5 * (a + b);
  } else if (std::isfinite(a)) {
    mid = a + std::max(1.0, std::fabs(a));
  } else if (std::isfinite(b)) {
    mid = b - std::max(1.0, std::fabs(b));
  } else {
    mid = 0.0;
  }
  double total = 0.0;
  auto part = [&](double end) {
    if (end == mid) return 0.0;
    const bool edge = (end == a && a_edge) || (end == b && b_edge);
    if (!edge) {
      try {
        return std::exp(integrate_log(log_rho, std::min(end, mid), std::max(end, mid), 1e-11)
                            .log_value);
      } catch (const Error& e) {
        throw Error(ErrorCode::IntegrationFailure, e.what());
      }
    }
    const IntegralVerdict v = decide_improper_log(log_rho, end, mid, cfg);
    if (v.infinite()) return kInf;
    if (v.inconclusive()) {
      throw Error(ErrorCode::IntegrationFailure,
                  "speed density near " + fmt(end) + " undecided: " + v.reason);
    }
    return v.value;
  };
  total += part(a);
  total += part(b);
  return total;
}

}  // namespace

double measure_mass(const DiffusionSpec& spec, double a, double b, const ImproperConfig& cfg) {
  const StateInterval& J = spec.interval();
  if (!(a <= b) || !J.in_closure(a) || !J.in_closure(b)) {
    throw Error(ErrorCode::OutOfDomain,
                "[" + fmt(a) + ", " + fmt(b) + "] is not an interval in the closure of J");
  }
  double total = 0.0;
  for (const Atom& at : spec.speed().atoms()) {
    if (at.z >= a && at.z <= b) total += at.gamma;
  }
  if (a == J.l && J.l_closed) total += spec.speed().boundary_mass(Side::Lower);
  if (b == J.r && J.r_closed) total += spec.speed().boundary_mass(Side::Upper);
  if (a < b) total += density_mass(spec, a, b, cfg);
  return total;
}

std::vector<Violation> validate(const DiffusionSpec& spec, int probes) {
  std::vector<Violation> out;
  const StateInterval& J = spec.interval();
  if (std::isnan(J.l) || std::isnan(J.r) || !(J.l < J.r)) {
    out.push_back({"IntervalInvalid", "need l < r", std::nullopt});
    return out;
  }
  if ((J.l_closed && !std::isfinite(J.l)) || (J.r_closed && !std::isfinite(J.r))) {
    out.push_back({"InfiniteEndpointClosed", "an infinite endpoint cannot belong to J",
                   std::nullopt});
  }
  const ScaleSpec& sc = spec.scale();
  const auto& sing = sc.singular_points();
  if (!J.interior(spec.x0())) {
    out.push_back({"StartNotInterior", "x0 must lie in the interior of J", spec.x0()});
  } else if (std::find(sing.begin(), sing.end(), spec.x0()) != sing.end()) {
    out.push_back({"StartAtSingularPoint", "x0 is a declared singular point", spec.x0()});
  }
  for (double p : sing) {
    if (!J.interior(p)) {
      out.push_back({"SingularPointNotInterior", "singular points must be interior", p});
    }
  }
  if (sc.form() != ScaleSpec::Form::Raw) {
    const double c = sc.anchor();
    if (!J.interior(c) || std::find(sing.begin(), sing.end(), c) != sing.end()) {
      out.push_back({"AnchorNotInterior", "scale anchor must be a regular interior point", c});
    }
  }
  std::vector<double> zs;
  for (const Atom& at : spec.speed().atoms()) {
    if (!J.interior(at.z)) out.push_back({"AtomNotInterior", "atoms must be interior", at.z});
    if (!(at.gamma >= 0.0) || !std::isfinite(at.gamma)) {
      out.push_back({"AtomWeightInvalid", "atom weight must be finite and >= 0", at.z});
    }
    if (std::find(zs.begin(), zs.end(), at.z) != zs.end()) {
      out.push_back({"AtomsNotDistinct", "atom locations must be pairwise distinct", at.z});
    }
    zs.push_back(at.z);
  }
  for (Side side : {Side::Lower, Side::Upper}) {
    const double m = spec.speed().boundary_mass(side);
    if (!(m >= 0.0)) {
      out.push_back({"BoundaryMassInvalid",
                     std::string(to_string(side)) + " boundary mass must lie in [0, inf]",
                     std::nullopt});
    }
  }
  // Probing needs a usable reference point and anchor.
  for (const Violation& v : out) {
    if (v.kind == "StartNotInterior" || v.kind == "AnchorNotInterior") return out;
  }

  std::set<std::string> seen;
  auto once = [&](const std::string& kind, const std::string& detail, double x) {
    if (seen.insert(kind).second) out.push_back({kind, detail, x});
  };
  const std::vector<double> pts = spec.probe_points(probes);
  std::vector<double> log_rho(pts.size(), 0.0);
  double prev_s = -kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i];
    try {
      if (sc.form() == ScaleSpec::Form::Ito) {
        const double av = sc.a(x);
        if (!(av > 0.0) || !std::isfinite(av)) {
          once("NonPositiveDiffusion", "a(x) = " + fmt(av), x);
          continue;
        }
        if (!std::isfinite(sc.mu(x))) once("CoefficientNotFinite", "mu is not finite", x);
      }
      if (sc.has_beta()) {
        const double be = sc.beta(x);
        if (!std::isfinite(be)) once("CoefficientNotFinite", "beta is not finite", x);
      }
      const double lsp = sc.log_s_prime(x);
      if (std::isnan(lsp) || lsp == kInf) {
        once("ScaleDerivativeNotPositive", "s'(x) is not a positive finite number", x);
      } else if (sc.form() == ScaleSpec::Form::Raw) {
        const double s = sc.s(x);
        if (!(s > prev_s)) once("ScaleNotIncreasing", "s is not strictly increasing", x);
        prev_s = s;
      }
    } catch (const Error& e) {
      once("ScaleEvaluationFailed", e.what(), x);
    }
    try {
      log_rho[i] = spec.speed().log_density(x);
      if (std::isnan(log_rho[i]) || log_rho[i] == kInf) {
        once("SpeedDensityInvalid", "speed density must be finite and >= 0", x);
        log_rho[i] = 0.0;
      }
    } catch (const Error& e) {
      once("SpeedDensityInvalid", e.what(), x);
    }
  }
  // Zero-density runs. A run reaching the end of the probe range next to a
  // density below ~1e-260 is floating-point underflow, not a null set.
  constexpr double kUnderflowLog = -600.0;
  std::size_t i = 0;
  while (i < pts.size()) {
    if (log_rho[i] != -kInf) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < pts.size() && log_rho[j + 1] == -kInf) ++j;
    const bool at_lo = i == 0;
    const bool at_hi = j + 1 == pts.size();
    bool underflow = false;
    if (at_lo && !at_hi) underflow = log_rho[j + 1] < kUnderflowLog;
    if (at_hi && !at_lo) underflow = log_rho[i - 1] < kUnderflowLog;
    if (!underflow) {
      const double from = at_lo ? J.l : pts[i - 1];
      const double to = at_hi ? J.r : pts[j + 1];
      bool has_atom = false;
      for (const Atom& at : spec.speed().atoms()) has_atom = has_atom || (at.z > from && at.z < to);
      if (!has_atom) {
        out.push_back({"SpeedNotPositive", "speed density vanishes on (" + fmt(from) + ", " +
                                               fmt(to) + ")",
                       pts[i]});
      }
    }
    i = j + 1;
  }
  return out;
}

}  // namespace diffscope
