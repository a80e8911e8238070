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

#include "diffscope/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "diffscope/error.hpp"
#include "diffscope/model.hpp"

namespace diffscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525513318, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651146};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double checked(const RealFn& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteEvaluation, "integrand is not finite at x=" + fmt_double(x));
  }
  return v;
}

struct Panel {
  double a;
  double b;
  double value;
  double err;
};

Panel gk21(const RealFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double resk = kWgk[10] * fc;
  double resg = 0.0;
  double resabs = std::fabs(resk);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(f, center - dx);
    f2[j] = checked(f, center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::fabs(fc - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));
  }
  const double h = std::fabs(half);
  resasc *= h;
  resabs *= h;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return Panel{a, b, resk * half, err};
}

struct AdaptiveOutcome {
  QuadResult result;
  bool converged;
};

AdaptiveOutcome adaptive_core(const RealFn& f, double a, double b, double rel_tol,
                              double abs_tol, int max_subdivisions) {
  auto worse = [](const Panel& x, const Panel& y) { return x.err < y.err; };
  std::vector<Panel> heap;
  heap.reserve(64);
  heap.push_back(gk21(f, a, b));
  double total = heap.front().value;
  double total_err = heap.front().err;
  int subdivisions = 0;
  bool converged = true;
  while (total_err > std::max(rel_tol * std::fabs(total), abs_tol)) {
    if (subdivisions >= max_subdivisions) {
      converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Panel worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
      // Panel cannot be bisected further in double precision.
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), worse);
      converged = false;
      break;
    }
    heap.pop_back();
    const Panel left = gk21(f, worst.a, mid);
    const Panel right = gk21(f, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    ++subdivisions;
  }
  // Re-sum in a fixed order so the reported value does not carry drift.
  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double value = 0.0;
  double err = 0.0;
  for (const Panel& p : heap) {
    value += p.value;
    err += p.err;
  }
  return {QuadResult{value, err, subdivisions}, converged};
}

double log_add(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::fabs(x - y)));
}

constexpr std::array<double, 11> kLogSamples = {1e-7, 0.1, 0.2, 0.3, 0.4, 0.5,
                                                0.6,  0.7, 0.8, 0.9, 1.0 - 1e-7};

LogQuadResult log_panel(const RealFn& log_f, double a, double b, double rel_tol, int depth) {
  const double w = b - a;
  std::array<double, kLogSamples.size()> vals{};
  double mx = -kInf;
  double mn = kInf;
  for (std::size_t i = 0; i < kLogSamples.size(); ++i) {
    const double x = a + w * kLogSamples[i];
    const double v = log_f(x);
    if (std::isnan(v) || v == kInf) {
      throw Error(ErrorCode::NonFiniteEvaluation,
                  "log-integrand is not finite at x=" + fmt_double(x));
    }
    vals[i] = v;
    mx = std::max(mx, v);
    mn = std::min(mn, v);
  }
  if (mx == -kInf) return {};

  const double mid = a + 0.5 * w;
  const bool splittable = mid > a && mid < b;
  if (mx - mn <= 40.0 || depth >= 200 || !splittable) {
    const RealFn shifted = [&](double x) {
      const double v = log_f(x);
      if (std::isnan(v) || v == kInf) {
        throw Error(ErrorCode::NonFiniteEvaluation,
                    "log-integrand is not finite at x=" + fmt_double(x));
      }
      return std::exp(v - mx);
    };
    // Rounding in log values of size |v| is amplified into relative error of
    // exp(v); asking for less than that never converges.
    const double scale = std::max(std::fabs(mx), mn == -kInf ? 0.0 : std::fabs(mn));
    const double tol = std::max(rel_tol, 64.0 * std::numeric_limits<double>::epsilon() * scale);
    const AdaptiveOutcome out = adaptive_core(shifted, a, b, tol, 0.0, 100);
    if (!(out.result.value > 0.0)) return {};
    return {mx + std::log(out.result.value), out.result.abs_err / out.result.value};
  }

  // Visit the half with the larger sampled peak first and drop the other one
  // if it cannot contribute at working precision.
  double left_peak = -kInf;
  double right_peak = -kInf;
  for (std::size_t i = 0; i < kLogSamples.size(); ++i) {
    if (kLogSamples[i] <= 0.5) left_peak = std::max(left_peak, vals[i]);
    if (kLogSamples[i] >= 0.5) right_peak = std::max(right_peak, vals[i]);
  }
  const bool left_first = left_peak >= right_peak;
  const double first_a = left_first ? a : mid;
  const double first_b = left_first ? mid : b;
  const double second_a = left_first ? mid : a;
  const double second_b = left_first ? b : mid;
  const double second_peak = left_first ? right_peak : left_peak;

  const LogQuadResult first = log_panel(log_f, first_a, first_b, rel_tol, depth + 1);
  if (first.log_value != -kInf &&
      second_peak + std::log(0.5 * w) < first.log_value - 60.0) {
    return first;
  }
  const LogQuadResult second = log_panel(log_f, second_a, second_b, rel_tol, depth + 1);
  const double total = log_add(first.log_value, second.log_value);
  if (total == -kInf) return {};
  const double e1 = first.log_value == -kInf ? 0.0 : std::exp(first.log_value - total);
  const double e2 = second.log_value == -kInf ? 0.0 : std::exp(second.log_value - total);
  return {total, e1 * first.rel_err + e2 * second.rel_err};
}

struct WindowState {
  Outcome outcome = Outcome::Inconclusive;
  DivergenceKind kind = DivergenceKind::PowerTail;
  bool zero_tail = false;
  double mean_ratio = kNaN;  // mean log-ratio over the window
  double max_ratio = kNaN;
  double slope = kNaN;
  double residual = kNaN;
};

WindowState classify_window(const std::vector<double>& lc, const ImproperConfig& cfg) {
  WindowState st;
  const int m = cfg.min_consistent_levels;
  const int n = static_cast<int>(lc.size());
  if (n < m + 1) return st;
  const int first = n - (m + 1);

  bool all_zero = true;
  bool any_zero = false;
  for (int i = first; i < n; ++i) {
    if (lc[i] == -kInf) {
      any_zero = true;
    } else {
      all_zero = false;
    }
  }
  if (all_zero) {
    st.outcome = Outcome::Finite;
    st.zero_tail = true;
    return st;
  }
  if (any_zero) return st;

  const double thr = -cfg.decision_margin * std::log(cfg.ratio);
  constexpr double kNonDecreasingSlack = 1e-7;
  double sum = 0.0;
  double lo = kInf;
  double hi = -kInf;
  for (int i = first; i + 1 < n; ++i) {
    const double q = lc[i + 1] - lc[i];
    sum += q;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  st.mean_ratio = sum / m;
  st.max_ratio = hi;

  // Next log-ratio by one-step extrapolation. A window whose ratios are about
  // to cross the decision band is pre-asymptotic; geometric decay of the
  // ratios toward a limit (rate >= 1/2) keeps the sign.
  const double q_last = lc[n - 1] - lc[n - 2];
  const double q_prev = lc[n - 2] - lc[n - 3];
  const double q_ahead = 2.0 * q_last - q_prev;

  // Least-squares slope of log cell integral against level index.
  const double k_mean = first + 0.5 * m;
  double y_mean = 0.0;
  for (int i = first; i < n; ++i) y_mean += lc[i];
  y_mean /= (m + 1);
  double sxy = 0.0;
  double sxx = 0.0;
  for (int i = first; i < n; ++i) {
    sxy += (i - k_mean) * (lc[i] - y_mean);
    sxx += (i - k_mean) * (i - k_mean);
  }
  st.slope = sxy / sxx;
  double ss = 0.0;
  for (int i = first; i < n; ++i) {
    const double r = lc[i] - (y_mean + st.slope * (i - k_mean));
    ss += r * r;
  }
  st.residual = std::sqrt(ss / (m + 1));

  if (hi <= -thr) {
    if (q_ahead < 0.0) st.outcome = Outcome::Finite;
  } else if (q_ahead < -kNonDecreasingSlack) {
    // Decelerating growth: no decision yet.
  } else if (lo >= thr) {
    st.outcome = Outcome::Infinite;
    st.kind = DivergenceKind::PowerTail;
  } else if (lo >= -kNonDecreasingSlack) {
    st.outcome = Outcome::Infinite;
    st.kind = (hi - lo <= thr) ? DivergenceKind::LogTail : DivergenceKind::NonDecayingIncrements;
  }
  return st;
}

struct TailEstimate {
  double mean;
  double bound;
};

TailEstimate geometric_tail(const std::vector<double>& lc, const WindowState& st) {
  if (st.zero_tail) return {0.0, 0.0};
  const double last = std::exp(lc.back());
  const double q = std::exp(st.mean_ratio);
  const double qmax = std::exp(st.max_ratio);
  return {last * q / (1.0 - q), last * qmax / (1.0 - qmax)};
}

double log_sum(const std::vector<double>& lc) {
  double acc = -kInf;
  for (double v : lc) acc = log_add(acc, v);
  return acc;
}

LogQuadResult log_cell(const RealFn& log_f, double lo, double hi, double rel_tol,
                       std::span<const double> breakpoints) {
  std::vector<double> cuts{lo};
  for (double p : breakpoints) {
    if (p > lo && p < hi) cuts.push_back(p);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(hi);
  LogQuadResult total;
  double weighted_err = 0.0;
  std::vector<LogQuadResult> parts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    parts.push_back(log_panel(log_f, cuts[i], cuts[i + 1], rel_tol, 0));
    total.log_value = log_add(total.log_value, parts.back().log_value);
  }
  if (total.log_value == -kInf) return total;
  for (const LogQuadResult& p : parts) {
    if (p.log_value != -kInf) weighted_err += std::exp(p.log_value - total.log_value) * p.rel_err;
  }
  total.rel_err = weighted_err;
  return total;
}

}  // namespace

QuadResult integrate_adaptive(const RealFn& f, double a, double b, double tol) {
  return integrate_adaptive(f, a, b, tol, tol);
}

QuadResult integrate_adaptive(const RealFn& f, double a, double b, double rel_tol,
                              double abs_tol, int max_subdivisions) {
  if (a == b) return {};
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidArgument, "integrate_adaptive needs a compact interval");
  }
  if (a > b) {
    QuadResult r = integrate_adaptive(f, b, a, rel_tol, abs_tol, max_subdivisions);
    r.value = -r.value;
    return r;
  }
  const AdaptiveOutcome out = adaptive_core(f, a, b, rel_tol, abs_tol, max_subdivisions);
  if (!out.converged) {
    throw Error(ErrorCode::MaxSubdivisionsExceeded,
                "adaptive quadrature on [" + fmt_double(a) + ", " + fmt_double(b) +
                    "] did not reach tolerance (estimate " + fmt_double(out.result.value) +
                    " +- " + fmt_double(out.result.abs_err) + ")");
  }
  return out.result;
}

LogQuadResult integrate_log(const RealFn& log_f, double a, double b, double rel_tol) {
  if (a == b) return {};
  if (a > b) std::swap(a, b);
  return log_panel(log_f, a, b, rel_tol, 0);
}

void ImproperConfig::check() const {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "ImproperConfig: ratio must lie in (0,1)");
  }
  if (!(decision_margin > 0.0 && decision_margin < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "ImproperConfig: decision_margin must lie in (0,0.5)");
  }
  if (min_consistent_levels < 3 || max_levels < min_consistent_levels) {
    throw Error(ErrorCode::InvalidArgument,
                "ImproperConfig: need max_levels >= min_consistent_levels >= 3");
  }
  if (!(proper_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ImproperConfig: proper_tol must be positive");
  }
}

const char* to_string(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::Finite: return "finite";
    case Outcome::Infinite: return "infinite";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(DivergenceKind kind) noexcept {
  switch (kind) {
    case DivergenceKind::PowerTail: return "power_tail";
    case DivergenceKind::LogTail: return "log_tail";
    case DivergenceKind::NonDecayingIncrements: return "non_decaying_increments";
  }
  return "power_tail";
}

IntegralVerdict IntegralVerdict::make_inconclusive(std::string why) {
  IntegralVerdict v;
  v.outcome = Outcome::Inconclusive;
  v.reason = std::move(why);
  return v;
}

IntegralVerdict decide_improper(const RealFn& f, double boundary, double anchor,
                                const ImproperConfig& cfg) {
  const RealFn log_f = [&f](double x) {
    const double v = f(x);
    if (v < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "decide_improper needs a non-negative integrand; f(" + fmt_double(x) +
                      ") = " + fmt_double(v));
    }
    return std::log(v);
  };
  return decide_improper_log(log_f, boundary, anchor, cfg);
}

IntegralVerdict decide_improper_log(const RealFn& log_f, double boundary, double anchor,
                                    const ImproperConfig& cfg,
                                    std::span<const double> breakpoints) {
  cfg.check();
  if (!std::isfinite(anchor) || std::isnan(boundary) || boundary == anchor) {
    throw Error(ErrorCode::InvalidArgument,
                "decide_improper needs a finite anchor distinct from the boundary");
  }
  const bool infinite = !std::isfinite(boundary);
  const double dir = boundary > anchor ? 1.0 : -1.0;
  const double scale = std::max(1.0, std::fabs(anchor));
  const double lr = std::log(cfg.ratio);
  auto point = [&](int k) {
    if (!infinite) return boundary + (anchor - boundary) * std::pow(cfg.ratio, k);
    return anchor + dir * scale * (std::pow(1.0 / cfg.ratio, k) - 1.0);
  };

  IntegralVerdict verdict;
  std::vector<double>& lc = verdict.log_cells;
  double abs_err_cells = 0.0;
  const int m = cfg.min_consistent_levels;
  const int min_depth = 2 * m;
  bool degenerate = false;
  const double cell_tol = std::min(1e-10, 0.1 * cfg.proper_tol);

  for (int k = 0; k < cfg.max_levels; ++k) {
    const double x0 = point(k);
    const double x1 = point(k + 1);
    if (!std::isfinite(x1) || x1 == x0 || (!infinite && x1 == boundary)) {
      degenerate = true;
      break;
    }
    LogQuadResult cell;
    try {
      cell = log_cell(log_f, std::min(x0, x1), std::max(x0, x1), cell_tol, breakpoints);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteEvaluation) throw;
      IntegralVerdict bad = IntegralVerdict::make_inconclusive(
          std::string("non-finite evaluation in level ") + std::to_string(k) + ": " + e.what());
      bad.non_finite_evaluation = true;
      bad.log_cells = lc;
      bad.levels_used = static_cast<int>(lc.size());
      return bad;
    }
    lc.push_back(cell.log_value);
    if (cell.log_value != -kInf) abs_err_cells += std::exp(cell.log_value) * cell.rel_err;

    const int n = static_cast<int>(lc.size());
    if (n < std::max(min_depth, m + 1)) continue;
    const WindowState st = classify_window(lc, cfg);
    if (st.outcome == Outcome::Infinite) break;
    if (st.outcome == Outcome::Finite) {
      const TailEstimate tail = geometric_tail(lc, st);
      const double partial = std::exp(log_sum(lc));
      // Stop once the extrapolated tail is pinned down to the tolerance.
      if (tail.bound - tail.mean <= cfg.proper_tol * (partial + tail.mean)) break;
    }
  }

  verdict.levels_used = static_cast<int>(lc.size());
  const WindowState st = classify_window(lc, cfg);
  if (std::isfinite(st.slope)) {
    const double p = infinite ? -st.slope / lr - 1.0 : st.slope / lr - 1.0;
    verdict.tail_exponent = p;
    verdict.residual = st.residual;
  }
  verdict.outcome = st.outcome;
  if (st.outcome == Outcome::Finite) {
    const TailEstimate tail = geometric_tail(lc, st);
    const double partial = std::exp(log_sum(lc));
    verdict.value = partial + tail.mean;
    verdict.abs_err = abs_err_cells + std::fabs(tail.bound - tail.mean);
    if (st.zero_tail) verdict.reason = "integrand vanishes near the boundary";
  } else if (st.outcome == Outcome::Infinite) {
    verdict.divergence = st.kind;
    verdict.value = kInf;
  } else {
    std::ostringstream why;
    if (static_cast<int>(lc.size()) < m + 1) {
      why << "only " << lc.size() << " usable levels";
    } else {
      why << "no persistent geometric trend over the last " << m << " levels (log-ratios";
      for (std::size_t i = lc.size() - m; i < lc.size(); ++i) {
        why << ' ' << fmt_double(lc[i] - lc[i - 1]);
      }
      why << ')';
    }
    if (degenerate) why << "; boundary resolution limit reached";
    verdict.reason = why.str();
  }
  return verdict;
}

IntegralVerdict decide_measure_integral(const RealFn& g, const SpeedSpec& speed,
                                        double boundary, double anchor,
                                        const ImproperConfig& cfg) {
  const RealFn log_g = [&g](double x) {
    const double v = g(x);
    if (v < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "measure integrand must be non-negative; g(" + fmt_double(x) +
                      ") = " + fmt_double(v));
    }
    return std::log(v);
  };
  return decide_measure_integral_log(log_g, speed, boundary, anchor, cfg);
}

IntegralVerdict decide_measure_integral_log(const RealFn& log_g, const SpeedSpec& speed,
                                            double boundary, double anchor,
                                            const ImproperConfig& cfg) {
  const RealFn log_integrand = [&](double x) {
    const double lg = log_g(x);
    if (lg == -kInf) return -kInf;
    return lg + speed.log_density(x);
  };
  IntegralVerdict v = decide_improper_log(log_integrand, boundary, anchor, cfg);
  if (!v.finite()) return v;
  const double lo = std::min(anchor, boundary);
  const double hi = std::max(anchor, boundary);
  double atom_part = 0.0;
  for (const Atom& atom : speed.atoms()) {
    const bool inside = (atom.z > lo && atom.z < hi) || atom.z == anchor;
    if (inside && atom.gamma > 0.0) atom_part += std::exp(log_g(atom.z)) * atom.gamma;
  }
  v.value += atom_part;
  return v;
}

std::vector<CompactCheck> check_local_sq_integrability(const RealFn& beta,
                                                       std::span<const Compact> compacts,
                                                       std::span<const double> singular_points,
                                                       const ImproperConfig& cfg) {
  const RealFn beta_sq = [&beta](double x) {
    const double v = beta(x);
    return v * v;
  };
  std::vector<CompactCheck> out;
  for (const Compact& c : compacts) {
    CompactCheck check{c, {}, std::nullopt};
    std::vector<double> pts{c.a};
    std::vector<bool> singular{false};
    for (double p : singular_points) {
      if (p >= c.a && p <= c.b) {
        if (p == c.a) {
          singular[0] = true;
          continue;
        }
        pts.push_back(p);
        singular.push_back(true);
      }
    }
    // keep (point, singular) pairs ordered
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pts[i] < pts[j]; });
    std::vector<double> sp;
    std::vector<bool> ss;
    for (std::size_t i : order) {
      sp.push_back(pts[i]);
      ss.push_back(singular[i]);
    }
    if (sp.back() == c.b) {
      // already contains b as a singular point
    } else {
      sp.push_back(c.b);
      ss.push_back(false);
    }

    double total = 0.0;
    double total_err = 0.0;
    Outcome agg = Outcome::Finite;
    std::string reason;
    for (std::size_t i = 0; i + 1 < sp.size(); ++i) {
      const double a = sp[i];
      const double b = sp[i + 1];
      const double mid = 0.5 * (a + b);
      auto account = [&](const IntegralVerdict& piece, double where) {
        if (piece.infinite()) {
          if (agg != Outcome::Infinite) check.witness = where;
          agg = Outcome::Infinite;
          reason = "beta^2 not integrable at x=" + fmt_double(where);
        } else if (piece.inconclusive()) {
          if (agg == Outcome::Finite) {
            agg = Outcome::Inconclusive;
            reason = piece.reason;
          }
        } else {
          total += piece.value;
          total_err += piece.abs_err;
        }
      };
      if (!ss[i] && !ss[i + 1]) {
        IntegralVerdict piece;
        try {
          const QuadResult q = integrate_adaptive(beta_sq, a, b, cfg.proper_tol);
          piece.outcome = Outcome::Finite;
          piece.value = q.value;
          piece.abs_err = q.abs_err;
        } catch (const Error& e) {
          piece = IntegralVerdict::make_inconclusive(e.what());
        }
        account(piece, a);
        continue;
      }
      if (ss[i]) {
        account(decide_improper(beta_sq, a, mid, cfg), a);
      } else {
        try {
          const QuadResult q = integrate_adaptive(beta_sq, a, mid, cfg.proper_tol);
          total += q.value;
          total_err += q.abs_err;
        } catch (const Error& e) {
          account(IntegralVerdict::make_inconclusive(e.what()), a);
        }
      }
      if (ss[i + 1]) {
        account(decide_improper(beta_sq, b, mid, cfg), b);
      } else {
        try {
          const QuadResult q = integrate_adaptive(beta_sq, mid, b, cfg.proper_tol);
          total += q.value;
          total_err += q.abs_err;
        } catch (const Error& e) {
          account(IntegralVerdict::make_inconclusive(e.what()), b);
        }
      }
    }
    check.verdict.outcome = agg;
    check.verdict.reason = reason;
    if (agg == Outcome::Finite) {
      check.verdict.value = total;
      check.verdict.abs_err = total_err;
    } else if (agg == Outcome::Infinite) {
      check.verdict.value = kInf;
    }
    out.push_back(std::move(check));
  }
  return out;
}

}  // namespace diffscope
