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

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace diffscope {

using RealFn = std::function<double(double)>;

class SpeedSpec;

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
  int subdivisions = 0;
};

// Globally adaptive Gauss-Kronrod 10/21 bisection. Stops once the summed
// error estimate is below max(tol*|value|, tol).
// Throws Error{NonFiniteEvaluation} or Error{MaxSubdivisionsExceeded}.
QuadResult integrate_adaptive(const RealFn& f, double a, double b, double tol);
QuadResult integrate_adaptive(const RealFn& f, double a, double b, double rel_tol,
                              double abs_tol, int max_subdivisions = 2000);

struct LogQuadResult {
  double log_value = -std::numeric_limits<double>::infinity();
  double rel_err = 0.0;
};

// log of the integral of exp(log_f) over [a, b]. Works with integrands whose
// values leave the double range; panels whose log-range is wide are split
// recursively and negligible halves are pruned.
LogQuadResult integrate_log(const RealFn& log_f, double a, double b, double rel_tol);

struct ImproperConfig {
  double ratio = 0.5;  // geometric shrink factor r
  int max_levels = 60;
  double decision_margin = 0.1;  // delta
  double proper_tol = 1e-9;  // relative accuracy of proper integrals and of the tail estimate
  int min_consistent_levels = 6;

  // Throws Error{InvalidArgument} when an invariant is violated.
  void check() const;
};

enum class Outcome { Finite, Infinite, Inconclusive };
enum class DivergenceKind { PowerTail, LogTail, NonDecayingIncrements };

const char* to_string(Outcome outcome) noexcept;
const char* to_string(DivergenceKind kind) noexcept;

struct IntegralVerdict {
  Outcome outcome = Outcome::Inconclusive;
  double value = std::numeric_limits<double>::quiet_NaN();
  double abs_err = std::numeric_limits<double>::quiet_NaN();
  DivergenceKind divergence = DivergenceKind::PowerTail;
  std::string reason;

  // Slope-based estimate of p in f ~ |x-b|^p (finite b) or |x|^p (infinite b),
  // with the RMS residual of the log-regression it came from.
  std::optional<double> tail_exponent;
  double residual = std::numeric_limits<double>::quiet_NaN();

  int levels_used = 0;
  std::vector<double> log_cells;  // log of each geometric cell integral
  bool non_finite_evaluation = false;

  bool finite() const { return outcome == Outcome::Finite; }
  bool infinite() const { return outcome == Outcome::Infinite; }
  bool inconclusive() const { return outcome == Outcome::Inconclusive; }

  static IntegralVerdict make_inconclusive(std::string why);
};

// Decides whether the integral of a non-negative f between anchor c and the
// boundary point b (finite or +-inf) converges. The half-open range is cut into
// geometric cells approaching b and the sequence of cell integrals is tested
// for a persistent geometric trend; no trend yields Inconclusive.
IntegralVerdict decide_improper(const RealFn& f, double boundary, double anchor,
                                const ImproperConfig& cfg = {});

// Same decision for an integrand supplied as log f. `breakpoints` are interior
// points where the integrand may be non-smooth; cells are split there.
IntegralVerdict decide_improper_log(const RealFn& log_f, double boundary, double anchor,
                                    const ImproperConfig& cfg = {},
                                    std::span<const double> breakpoints = {});

// Integral of g against the speed measure between anchor and boundary: the
// density part is decided improperly, atoms strictly between contribute
// g(z)*gamma exactly and never change a Finite outcome into Infinite.
IntegralVerdict decide_measure_integral(const RealFn& g, const SpeedSpec& speed,
                                        double boundary, double anchor,
                                        const ImproperConfig& cfg = {});
IntegralVerdict decide_measure_integral_log(const RealFn& log_g, const SpeedSpec& speed,
                                            double boundary, double anchor,
                                            const ImproperConfig& cfg = {});

struct Compact {
  double a;
  double b;
};

struct CompactCheck {
  Compact compact;
  IntegralVerdict verdict;
  std::optional<double> witness;  // singular point where divergence was found
};

// beta^2 integrability over each compact; declared singular points inside a
// compact are approached from both sides with decide_improper.
std::vector<CompactCheck> check_local_sq_integrability(const RealFn& beta,
                                                       std::span<const Compact> compacts,
                                                       std::span<const double> singular_points,
                                                       const ImproperConfig& cfg = {});

}  // namespace diffscope
