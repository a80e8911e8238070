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
#include <limits>
#include <string>
#include <vector>

#include "diffscope/model.hpp"

namespace diffscope {

// Node placement. UniformScale: equal steps in s. EqualTime: equal steps in
// a coordinate whose derivative is max(sqrt(rho s'), |beta|/2), so each cell
// takes about h^2 time units and |theta * dU| <= h. Auto picks EqualTime.
enum class Spacing { Auto, UniformScale, EqualTime };

enum class EndKind { Absorbing, Reflecting, Sentinel };

const char* to_string(Spacing s) noexcept;
const char* to_string(EndKind e) noexcept;

// Speed-measure random walk on the image of a grid under s.
struct GridModel {
  std::vector<double> x;
  std::vector<double> u;  // s(x) - s(x0)
  std::vector<double> up_prob;
  std::vector<std::uint64_t> up_threshold;  // jump up iff a uniform uint32 is below this
  std::vector<double> hold_mean;
  std::vector<double> theta;  // beta / (2 s') at the node, 0 when undefined
  std::vector<double> log_z_up;
  std::vector<double> log_z_down;
  std::vector<double> quad_up;  // theta^2 (dU)^2 for an up jump
  std::vector<double> quad_down;

  EndKind lower_end = EndKind::Sentinel;
  EndKind upper_end = EndKind::Sentinel;
  std::size_t start = 0;
  double h = 0.0;
  Spacing spacing = Spacing::EqualTime;
  bool has_theta = false;

  std::size_t size() const { return x.size(); }
  bool terminal(std::size_t i) const {
    if (i == 0) return lower_end != EndKind::Reflecting;
    if (i + 1 == x.size()) return upper_end != EndKind::Reflecting;
    return false;
  }
  double max_hold() const;
};

GridModel build_grid(const DiffusionSpec& spec, double h, double lo, double hi,
                     Spacing spacing = Spacing::Auto);

enum class PathStatus : std::uint8_t {
  Alive,          // reached the horizon
  AbsorbedLower,  // at an absorbing boundary of J
  AbsorbedUpper,
  SentinelLower,  // at a truncation end
  SentinelUpper,
  StepLimit,
};

struct WalkOptions {
  bool exponential_holding = false;
  bool track_density = false;
  std::uint64_t max_steps = 2'000'000'000ULL;
  int threads = 0;  // 0: DIFFSCOPE_THREADS or hardware concurrency
};

struct PathOutcome {
  double time = 0.0;
  double log_z = 0.0;
  double quad = 0.0;
  std::uint64_t steps = 0;
  std::uint32_t node = 0;
  PathStatus status = PathStatus::Alive;
};

// One outcome per path, in path order.
std::vector<PathOutcome> run_walks(const GridModel& grid, double T, std::uint64_t n_paths,
                                   std::uint64_t seed, const WalkOptions& opts = {});

struct PathStats {
  std::uint64_t n_paths = 0;
  double mean_time = 0.0;  // time at absorption, or T
  double se_time = 0.0;
  double frac_absorbed_lower = 0.0;
  double frac_absorbed_upper = 0.0;
  double se_absorbed_upper = 0.0;
  double frac_sentinel = 0.0;
  double frac_alive = 0.0;
  double frac_step_limit = 0.0;
  double mean_x = 0.0;  // E[X_T] over paths that never reached a sentinel
  double se_x = 0.0;
  double mean_u = 0.0;  // E[U_T]
  double se_u = 0.0;
  double mean_steps = 0.0;
  std::vector<double> x_quantiles;  // at 0.05, 0.25, 0.5, 0.75, 0.95 over all paths
  bool contamination_ok = true;     // frac_sentinel <= 0.1%
};

PathStats summarize_paths(const GridModel& grid, const std::vector<PathOutcome>& paths);

PathStats simulate_paths(const GridModel& grid, double T, std::uint64_t n_paths,
                         std::uint64_t seed, const WalkOptions& opts = {});

struct SMDStats {
  std::uint64_t n_paths = 0;
  double mean_z = 0.0;  // over paths that never reached a sentinel
  double se_z = 0.0;
  std::vector<double> z_quantiles;  // at 0.001, 0.01, 0.1, 0.5
  double frac_absorbed = 0.0;
  double frac_sentinel = 0.0;
  double eps_floor = 0.0;
  double frac_z_below = 0.0;
  double mean_quadratic = 0.0;
  bool contamination_ok = true;
};

SMDStats estimate_smd(const GridModel& grid, double T, std::uint64_t n_paths, std::uint64_t seed,
                      double eps_floor = 1e-12, WalkOptions opts = {});

// Same interval and start; identity scale; speed s' dm; accessible ends absorbing.
DiffusionSpec candidate_diffusion(const DiffusionSpec& spec, const ImproperConfig& cfg = {});

struct GapStats {
  double gap = 0.0;
  double se = 0.0;
  double mean_x = 0.0;
  double frac_sentinel = 0.0;
  bool contamination_ok = true;
  std::uint64_t n_paths = 0;
  std::size_t grid_nodes = 0;
};

GapStats estimate_candidate_martingale_gap(const DiffusionSpec& spec, double T,
                                           std::uint64_t n_paths, std::uint64_t seed, double h,
                                           double lo, double hi,
                                           Spacing spacing = Spacing::Auto,
                                           const WalkOptions& opts = {});

struct PathRecord {
  std::vector<std::uint32_t> nodes;  // visited nodes, start first
  PathOutcome outcome;
};

PathRecord record_path(const GridModel& grid, double T, std::uint64_t seed,
                       std::uint64_t path_index, std::uint64_t max_steps = 10'000'000ULL);

struct OccupationCheck {
  double lhs = 0.0;  // sum over jumps of theta^2 (dU)^2
  double rhs = 0.0;  // sum over nodes of departures times theta^2 step^2
  double diff = 0.0;
  bool exact = false;
};

OccupationCheck discrete_occupation_identity_check(const GridModel& grid, const PathRecord& path);

}  // namespace diffscope
