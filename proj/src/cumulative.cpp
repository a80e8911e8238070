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

#include "cumulative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "diffscope/error.hpp"
#include "diffscope/quadrature.hpp"

namespace diffscope::detail {

namespace {

constexpr double kStep = 1.0 / 16.0;
constexpr double kRelTol = 1e-12;
constexpr int kMaxChain = 1 << 16;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double anchor,
                                       CoordinateMap map, std::vector<double> singular_points,
                                       Mode mode)
    : f_(std::move(f)),
      anchor_(anchor),
      t_anchor_(map.to_t(anchor)),
      map_(map),
      singular_(std::move(singular_points)),
      mode_(mode) {
  std::sort(singular_.begin(), singular_.end());
}

double CumulativeIntegral::combine(double base, double add) const {
  if (mode_ == Mode::Linear) return base + add;
  if (base == kNegInf) return add;
  if (add == kNegInf) return base;
  const double m = std::max(base, add);
  return m + std::log1p(std::exp(-std::fabs(base - add)));
}

double CumulativeIntegral::segment(double a, double b) const {
  if (a == b) return mode_ == Mode::Linear ? 0.0 : kNegInf;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  std::vector<double> cuts{lo};
  for (double p : singular_) {
    if (p > lo && p < hi) cuts.push_back(p);
  }
  cuts.push_back(hi);
  if (mode_ == Mode::Log) {
    double total = kNegInf;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      total = combine(total, integrate_log(f_, cuts[i], cuts[i + 1], kRelTol).log_value);
    }
    return total;
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    try {
      const double abs_tol = 1e-14 * (cuts[i + 1] - cuts[i]);
      total += integrate_adaptive(f_, cuts[i], cuts[i + 1], kRelTol, abs_tol).value;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MaxSubdivisionsExceeded) {
        throw Error(ErrorCode::IntegrationFailure, e.what());
      }
      throw;
    }
  }
  return a < b ? total : -total;
}

double CumulativeIntegral::knot_x(int index, int dir) const {
  return map_.to_x(t_anchor_ + dir * index * kStep);
}

void CumulativeIntegral::extend(Chain& chain, int dir, int target) const {
  while (static_cast<int>(chain.x.size()) < target && !chain.exhausted) {
    const int k = static_cast<int>(chain.x.size()) + 1;
    const double prev_x = chain.x.empty() ? anchor_ : chain.x.back();
    const double prev_v = chain.v.empty() ? segment(anchor_, anchor_) : chain.v.back();
    const double x = knot_x(k, dir);
    const bool moved = dir > 0 ? x > prev_x : x < prev_x;
    const bool inside = x > map_.lower() && x < map_.upper() && std::isfinite(x);
    if (!moved || !inside || k >= kMaxChain) {
      chain.exhausted = true;
      break;
    }
    const double v = combine(prev_v, segment(prev_x, x));
    chain.x.push_back(x);
    chain.v.push_back(v);
  }
}

double CumulativeIntegral::operator()(double x) const {
  if (x == anchor_) return segment(x, x);
  const int dir = x > anchor_ ? 1 : -1;
  const double steps = std::floor(std::fabs(map_.to_t(x) - t_anchor_) / kStep);
  const int want = static_cast<int>(std::min<double>(steps, kMaxChain));
  Chain& chain = dir > 0 ? up_ : down_;

  double base_x = anchor_;
  double base_v = segment(anchor_, anchor_);
  auto lookup = [&]() {
    const int have = std::min<int>(want, static_cast<int>(chain.x.size()));
    if (have > 0) {
      base_x = chain.x[have - 1];
      base_v = chain.v[have - 1];
    }
    return have >= want || chain.exhausted;
  };
  bool ready;
  {
    std::shared_lock lock(mutex_);
    ready = lookup();
  }
  if (!ready) {
    std::unique_lock lock(mutex_);
    extend(chain, dir, want);
    lookup();
  }
  return combine(base_v, segment(base_x, x));
}

}  // namespace diffscope::detail
