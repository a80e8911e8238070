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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diffscope/quadrature.hpp"

namespace diffscope {

enum class Side { Lower, Upper };

const char* to_string(Side side) noexcept;

struct StateInterval {
  double l = -std::numeric_limits<double>::infinity();
  double r = std::numeric_limits<double>::infinity();
  bool l_closed = false;
  bool r_closed = false;

  double endpoint(Side side) const { return side == Side::Lower ? l : r; }
  bool closed(Side side) const { return side == Side::Lower ? l_closed : r_closed; }
  bool interior(double x) const { return x > l && x < r; }
  bool in_closure(double x) const { return x >= l && x <= r; }
};

namespace detail {
class ScaleState;
}

// Scale function recipe. The three forms match the ways a model can be
// supplied: Ito coefficients (beta = -2 mu / a), beta directly, or s itself.
// Itô and beta forms are normalised to s(anchor) = 0, s'(anchor) = 1 before
// any affine map is applied.
class ScaleSpec {
 public:
  enum class Form { Ito, Beta, Raw };

  static ScaleSpec from_ito(RealFn mu, RealFn a, double anchor,
                            std::vector<double> singular_points = {});
  static ScaleSpec from_beta(RealFn beta, double anchor, std::vector<double> singular_points = {});
  // `beta` empty means existence of beta is not declared.
  static ScaleSpec from_raw(RealFn s, RealFn s_prime, std::optional<RealFn> beta,
                            bool natural_scale, std::vector<double> singular_points = {});

  // factor * s + shift, factor > 0.
  ScaleSpec affine(double factor, double shift) const;

  // Rebuilds the lazily filled integral caches with a lattice adapted to J.
  ScaleSpec bound_to(const StateInterval& interval) const;

  Form form() const;
  bool has_beta() const;
  bool declared_natural() const;
  double anchor() const;
  const std::vector<double>& singular_points() const;
  double factor() const;
  double shift() const;

  double s(double x) const;
  double s_prime(double x) const;
  double log_s_prime(double x) const;
  // Throws when beta is not available.
  double beta(double x) const;
  // Ito form only.
  double mu(double x) const;
  double a(double x) const;

 private:
  explicit ScaleSpec(std::shared_ptr<const detail::ScaleState> state);
  std::shared_ptr<const detail::ScaleState> state_;
};

ScaleSpec scale_from_ito(RealFn mu, RealFn a, double anchor,
                         std::vector<double> singular_points = {});

struct Atom {
  double z;
  double gamma;
};

// Speed measure: density part, finitely many interior atoms, boundary masses.
// A boundary mass of +inf encodes absorption.
class SpeedSpec {
 public:
  enum class DensityForm {
    Lebesgue,       // rho given directly
    ScaleRelative,  // rho = w / s', w given (w = 1/a for an Ito model)
  };

  SpeedSpec();
  static SpeedSpec lebesgue(RealFn rho, std::vector<Atom> atoms = {}, double mass_l = 0.0,
                            double mass_r = 0.0);
  static SpeedSpec scale_relative(RealFn w, std::vector<Atom> atoms = {}, double mass_l = 0.0,
                                  double mass_r = 0.0);

  // Lebesgue density given through its logarithm (for densities outside the
  // double range).
  static SpeedSpec from_log_density(RealFn log_rho, std::vector<Atom> atoms = {},
                                    double mass_l = 0.0, double mass_r = 0.0);

  SpeedSpec with_atoms(std::vector<Atom> atoms) const;
  SpeedSpec with_boundary_masses(double mass_l, double mass_r) const;
  SpeedSpec bound_to(const ScaleSpec& scale) const;

  DensityForm form() const { return form_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double boundary_mass(Side side) const { return side == Side::Lower ? mass_l_ : mass_r_; }
  // The user-supplied rho (Lebesgue) or w (scale-relative).
  const RealFn& supplied() const { return fn_; }

  double density(double x) const;
  double log_density(double x) const;

 private:
  DensityForm form_ = DensityForm::Lebesgue;
  RealFn fn_;
  RealFn log_density_;
  std::vector<Atom> atoms_;
  double mass_l_ = 0.0;
  double mass_r_ = 0.0;
};

struct ScaleValues {
  double s;
  double s_prime;
  std::optional<double> beta;  // empty: not declared
};

// (J, s, m, x0). Construction binds the scale and speed evaluators to J.
class DiffusionSpec {
 public:
  DiffusionSpec(StateInterval interval, ScaleSpec scale, SpeedSpec speed, double x0);

  const StateInterval& interval() const { return interval_; }
  const ScaleSpec& scale() const { return scale_; }
  const SpeedSpec& speed() const { return speed_; }
  double x0() const { return x0_; }

  DiffusionSpec with_scale(ScaleSpec scale) const;
  DiffusionSpec with_speed(SpeedSpec speed) const;

  // Interior points: x0, singular points, atoms (sorted, deduplicated).
  std::vector<double> special_points() const;
  // Anchor used for improper integrals toward `side`; no special point lies
  // strictly between it and the boundary.
  double boundary_anchor(Side side) const;
  // n quasi-uniform interior probe points (uniform in the lattice coordinate),
  // declared singular points removed.
  std::vector<double> probe_points(int n = 512) const;

  // beta == 0 within 1e-12 at every probe point, or the raw-form flag.
  bool natural_scale() const;

 private:
  StateInterval interval_;
  ScaleSpec scale_;
  SpeedSpec speed_;
  double x0_;
};

ScaleValues eval_scale(const DiffusionSpec& spec, double x);

// m([a, b]) for a <= b in the closure of J, including atoms in [a, b] and the
// masses of included closed endpoints.
double measure_mass(const DiffusionSpec& spec, double a, double b,
                    const ImproperConfig& cfg = {});

struct Violation {
  std::string kind;
  std::string detail;
  std::optional<double> witness;
};

std::vector<Violation> validate(const DiffusionSpec& spec, int probes = 512);

}  // namespace diffscope
