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

#include "diffscope/simulator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "diffscope/boundary.hpp"
#include "diffscope/error.hpp"
#include "diffscope/quadrature.hpp"
#include "exact_sum.hpp"
#include "rng.hpp"

namespace diffscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwo32 = 4294967296.0;

// 6-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 6> kGlX = {-0.932469514203152, -0.661209386466265, -0.238619186083197,
                                        0.238619186083197,  0.661209386466265,  0.932469514203152};
constexpr std::array<double, 6> kGlW = {0.171324492379170, 0.360761573048139, 0.467913934572691,
                                        0.467913934572691, 0.360761573048139, 0.171324492379170};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <class F>
double gauss6(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < kGlX.size(); ++k) s += kGlW[k] * f(c + r * kGlX[k]);
  return s * r;
}

class GridBuilder {
 public:
  GridBuilder(const DiffusionSpec& spec, double h, Spacing spacing)
      : spec_(spec), h_(h), spacing_(spacing) {}

  double phi_prime(double x) const {
    const double lsp = spec_.scale().log_s_prime(x);
    if (spacing_ == Spacing::UniformScale) return checked(std::exp(lsp), x);
    double v = 0.5 * (lsp + spec_.speed().log_density(x));
    if (spec_.scale().has_beta()) {
      const double b = 0.5 * std::fabs(spec_.scale().beta(x));
      if (b > 0.0) v = std::max(v, std::log(b));
    }
    return checked(std::exp(v), x);
  }

  // Appends the interior nodes of [p, q] (q itself included) to `out`.
  void place(double p, double q, std::vector<double>& out) {
    cells_x_.assign(1, p);
    cells_phi_.assign(1, 0.0);
    constexpr int kInitial = 32;
    double prev = p;
    for (int i = 1; i <= kInitial; ++i) {
      const double next = i == kInitial ? q : p + (q - p) * i / kInitial;
      if (next > prev) {
        refine(prev, next, gauss6([this](double x) { return phi_prime(x); }, prev, next), 0);
        prev = next;
      }
    }
    const double total = cells_phi_.back();
    if (!std::isfinite(total)) {
      throw Error(ErrorCode::NonFiniteEvaluation,
                  "grid coordinate is not finite on [" + fmt(p) + ", " + fmt(q) + "]");
    }
    const double cells = std::max(1.0, std::ceil(total / h_ - 1e-9));
    if (cells > 5e7) throw Error(ErrorCode::DegenerateTruncation, "grid would exceed 5e7 nodes");
    const auto n = static_cast<std::size_t>(cells);
    const double step = total / static_cast<double>(n);
    std::size_t j = 1;
    for (std::size_t k = 1; k < n; ++k) {
      const double target = step * static_cast<double>(k);
      while (j + 1 < cells_phi_.size() && cells_phi_[j] < target) ++j;
      const double f0 = cells_phi_[j - 1];
      const double f1 = cells_phi_[j];
      const double w = f1 > f0 ? (target - f0) / (f1 - f0) : 0.5;
      const double x = cells_x_[j - 1] + std::clamp(w, 0.0, 1.0) * (cells_x_[j] - cells_x_[j - 1]);
      if (x > out.back() && x < q) out.push_back(x);
    }
    out.push_back(q);
  }

 private:
  static double checked(double v, double x) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteEvaluation, "grid density not finite at x=" + fmt(x));
    }
    return v;
  }

  void refine(double a, double b, double whole, int depth) {
    const double m = 0.5 * (a + b);
    auto f = [this](double x) { return phi_prime(x); };
    const double left = gauss6(f, a, m);
    const double right = gauss6(f, m, b);
    const double sum = left + right;
    const bool small = sum <= 0.25 * h_;
    const bool accurate = std::fabs(sum - whole) <= 0.01 * sum + 1e-6 * h_;
    if ((small && accurate) || depth >= 60 || !(m > a && m < b)) {
      cells_x_.push_back(b);
      cells_phi_.push_back(cells_phi_.back() + sum);
      return;
    }
    refine(a, m, left, depth + 1);
    refine(m, b, right, depth + 1);
  }

  const DiffusionSpec& spec_;
  double h_;
  Spacing spacing_;
  std::vector<double> cells_x_;
  std::vector<double> cells_phi_;
};

int thread_count(const WalkOptions& opts, std::uint64_t n_paths) {
  int n = opts.threads;
  if (n <= 0) {
    if (const char* env = std::getenv("DIFFSCOPE_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(n),
                                                  std::max<std::uint64_t>(1, n_paths / 64)));
}

template <bool Track, bool Exponential>
PathOutcome walk(const GridModel& g, double T, std::uint64_t seed, std::uint64_t path,
                 std::uint64_t max_steps, std::vector<std::uint32_t>* record) {
  detail::Philox rng(seed, path);
  PathOutcome out;
  std::size_t i = g.start;
  const std::size_t last = g.size() - 1;
  double t = 0.0;
  double log_z = 0.0;
  double log_z_comp = 0.0;  // Kahan compensation
  double quad = 0.0;
  std::uint64_t steps = 0;
  if (record) record->push_back(static_cast<std::uint32_t>(i));
  for (;;) {
    if (i == 0 && g.lower_end != EndKind::Reflecting) {
      out.status = g.lower_end == EndKind::Absorbing ? PathStatus::AbsorbedLower
                                                     : PathStatus::SentinelLower;
      break;
    }
    if (i == last && g.upper_end != EndKind::Reflecting) {
      out.status = g.upper_end == EndKind::Absorbing ? PathStatus::AbsorbedUpper
                                                     : PathStatus::SentinelUpper;
      break;
    }
    double hold = g.hold_mean[i];
    if constexpr (Exponential) hold *= -std::log(rng.next_open01());
    if (t + hold >= T) {
      t = T;
      out.status = PathStatus::Alive;
      break;
    }
    if (steps >= max_steps) {
      out.status = PathStatus::StepLimit;
      break;
    }
    t += hold;
    const bool up = rng.next_u32() < g.up_threshold[i];
    if constexpr (Track) {
      const double y = (up ? g.log_z_up[i] : g.log_z_down[i]) - log_z_comp;
      const double sum = log_z + y;
      log_z_comp = (sum - log_z) - y;
      log_z = sum;
      quad += up ? g.quad_up[i] : g.quad_down[i];
    }
    i = up ? i + 1 : i - 1;
    ++steps;
    if (record) record->push_back(static_cast<std::uint32_t>(i));
  }
  out.time = t;
  out.log_z = log_z;
  out.quad = quad;
  out.steps = steps;
  out.node = static_cast<std::uint32_t>(i);
  return out;
}

PathOutcome walk_dispatch(const GridModel& g, double T, std::uint64_t seed, std::uint64_t path,
                          const WalkOptions& opts, std::vector<std::uint32_t>* record) {
  if (opts.track_density) {
    return opts.exponential_holding ? walk<true, true>(g, T, seed, path, opts.max_steps, record)
                                    : walk<true, false>(g, T, seed, path, opts.max_steps, record);
  }
  return opts.exponential_holding ? walk<false, true>(g, T, seed, path, opts.max_steps, record)
                                  : walk<false, false>(g, T, seed, path, opts.max_steps, record);
}

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return m;
}

std::vector<double> quantiles(std::vector<double> v, std::initializer_list<double> probs) {
  std::vector<double> out;
  if (v.empty()) return out;
  std::sort(v.begin(), v.end());
  for (double p : probs) {
    const auto idx = static_cast<std::size_t>(std::floor(p * static_cast<double>(v.size() - 1)));
    out.push_back(v[idx]);
  }
  return out;
}

bool is_sentinel(PathStatus s) {
  return s == PathStatus::SentinelLower || s == PathStatus::SentinelUpper;
}

}  // namespace

const char* to_string(Spacing s) noexcept {
  switch (s) {
    case Spacing::Auto: return "auto";
    case Spacing::UniformScale: return "uniform_scale";
    case Spacing::EqualTime: return "equal_time";
  }
  return "auto";
}

const char* to_string(EndKind e) noexcept {
  switch (e) {
    case EndKind::Absorbing: return "absorbing";
    case EndKind::Reflecting: return "reflecting";
    case EndKind::Sentinel: return "sentinel";
  }
  return "sentinel";
}

double GridModel::max_hold() const {
  double m = 0.0;
  for (double v : hold_mean) m = std::max(m, v);
  return m;
}

GridModel build_grid(const DiffusionSpec& spec, double h, double lo, double hi, Spacing spacing) {
  const StateInterval& J = spec.interval();
  const double x0 = spec.x0();
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "grid step h must be positive");
  if (!(lo < x0 && x0 < hi) || !std::isfinite(lo) || !std::isfinite(hi) || !J.in_closure(lo) ||
      !J.in_closure(hi)) {
    throw Error(ErrorCode::DegenerateTruncation,
                "truncation [" + fmt(lo) + ", " + fmt(hi) + "] must be finite, inside J and contain x0");
  }
  if ((lo == J.l && !J.l_closed) || (hi == J.r && !J.r_closed)) {
    throw Error(ErrorCode::DegenerateTruncation,
                "truncation end lies on a boundary point that is not part of J");
  }
  if (spacing == Spacing::Auto) spacing = Spacing::EqualTime;

  GridModel g;
  g.h = h;
  g.spacing = spacing;
  g.lower_end = lo == J.l ? (spec.speed().boundary_mass(Side::Lower) == kInf ? EndKind::Absorbing
                                                                             : EndKind::Reflecting)
                          : EndKind::Sentinel;
  g.upper_end = hi == J.r ? (spec.speed().boundary_mass(Side::Upper) == kInf ? EndKind::Absorbing
                                                                             : EndKind::Reflecting)
                          : EndKind::Sentinel;

  std::vector<double> breaks{lo, x0, hi};
  for (const Atom& a : spec.speed().atoms()) {
    if (a.z > lo && a.z < hi) breaks.push_back(a.z);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  GridBuilder builder(spec, h, spacing);
  std::vector<double>& x = g.x;
  x.push_back(lo);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) builder.place(breaks[k], breaks[k + 1], x);
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::DegenerateTruncation, "grid has fewer than three nodes");
  g.start = static_cast<std::size_t>(std::find(x.begin(), x.end(), x0) - x.begin());

  const ScaleSpec& scale = spec.scale();
  const SpeedSpec& speed = spec.speed();
  const RealFn log_sp = [&scale](double y) { return scale.log_s_prime(y); };

  // Cell quantities: du = int s', A = int (s(y) - s(a)) dm, B = int (s(b) - s(y)) dm.
  std::vector<double> du(n - 1), A(n - 1), B(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = x[i];
    const double b = x[i + 1];
    const LogQuadResult q = integrate_log(log_sp, a, b, 1e-12);
    du[i] = std::exp(q.log_value);
    const double mid = 0.5 * (a + b);
    const double ref_s = scale.log_s_prime(mid);
    const double ref_r = speed.log_density(mid);
    const bool empty = ref_r == -kInf;
    const double ref = empty ? 0.0 : ref_r;
    auto sp = [&](double z) { return std::exp(scale.log_s_prime(z) - ref_s); };
    auto rho = [&](double y) { return std::exp(speed.log_density(y) - ref); };
    const double a_part = gauss6([&](double y) { return rho(y) * gauss6(sp, a, y); }, a, b);
    const double b_part = gauss6([&](double y) { return rho(y) * gauss6(sp, y, b); }, a, b);
    const double scale_back = std::exp(ref_s + ref);
    A[i] = a_part * scale_back;
    B[i] = b_part * scale_back;
    if (!std::isfinite(du[i]) || !(du[i] > 0.0) || !std::isfinite(A[i]) || !std::isfinite(B[i])) {
      throw Error(ErrorCode::NonFiniteEvaluation,
                  "grid cell [" + fmt(a) + ", " + fmt(b) + "] has non-finite scale or speed mass");
    }
  }

  g.u.assign(n, 0.0);
  for (std::size_t i = g.start + 1; i < n; ++i) g.u[i] = g.u[i - 1] + du[i - 1];
  for (std::size_t i = g.start; i-- > 0;) g.u[i] = g.u[i + 1] - du[i];

  g.up_prob.assign(n, 0.0);
  g.up_threshold.assign(n, 0);
  g.hold_mean.assign(n, 0.0);
  g.theta.assign(n, 0.0);
  g.log_z_up.assign(n, 0.0);
  g.log_z_down.assign(n, 0.0);
  g.quad_up.assign(n, 0.0);
  g.quad_down.assign(n, 0.0);
  g.has_theta = scale.has_beta();

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dm = du[i - 1];
    const double dp = du[i];
    const double p = dm / (dm + dp);
    g.up_prob[i] = p;
    g.up_threshold[i] = static_cast<std::uint64_t>(
        std::clamp(std::llround(p * kTwo32), 1LL, static_cast<long long>(kTwo32) - 1));
    double hold = 2.0 * (dp * A[i - 1] + dm * B[i]) / (dm + dp);
    for (const Atom& at : speed.atoms()) {
      if (at.z == x[i]) hold += at.gamma * 2.0 * dm * dp / (dm + dp);
    }
    g.hold_mean[i] = hold;
  }
  if (g.lower_end == EndKind::Reflecting) {
    g.up_prob[0] = 1.0;
    g.up_threshold[0] = static_cast<std::uint64_t>(kTwo32);
    g.hold_mean[0] = 2.0 * B[0] + 2.0 * du[0] * speed.boundary_mass(Side::Lower);
  }
  if (g.upper_end == EndKind::Reflecting) {
    g.up_prob[n - 1] = 0.0;
    g.up_threshold[n - 1] = 0;
    g.hold_mean[n - 1] = 2.0 * A[n - 2] + 2.0 * du[n - 2] * speed.boundary_mass(Side::Upper);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (g.terminal(i)) continue;
    if (!(g.hold_mean[i] > 0.0) || !std::isfinite(g.hold_mean[i])) {
      throw Error(ErrorCode::NonFiniteEvaluation,
                  "holding time at x=" + fmt(x[i]) + " is not a positive finite number");
    }
  }

  if (g.has_theta) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!J.interior(x[i]) || g.terminal(i)) continue;
      const double th = scale.beta(x[i]) / (2.0 * std::exp(scale.log_s_prime(x[i])));
      if (!std::isfinite(th)) continue;
      g.theta[i] = th;
      if (i + 1 < n) {
        const double d = th * du[i];
        g.log_z_up[i] = d - 0.5 * d * d;
        g.quad_up[i] = d * d;
      }
      if (i > 0) {
        const double d = th * du[i - 1];
        g.log_z_down[i] = -d - 0.5 * d * d;
        g.quad_down[i] = d * d;
      }
    }
  }
  return g;
}

std::vector<PathOutcome> run_walks(const GridModel& grid, double T, std::uint64_t n_paths,
                                   std::uint64_t seed, const WalkOptions& opts) {
  if (grid.size() < 3) throw Error(ErrorCode::InvalidArgument, "grid is empty");
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  std::vector<PathOutcome> out(n_paths);
  const int threads = thread_count(opts, n_paths);
  constexpr std::uint64_t kChunk = 64;
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= n_paths) break;
      const std::uint64_t end = std::min(n_paths, begin + kChunk);
      for (std::uint64_t p = begin; p < end; ++p) {
        out[p] = walk_dispatch(grid, T, seed, p, opts, nullptr);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return out;
}

PathStats summarize_paths(const GridModel& grid, const std::vector<PathOutcome>& paths) {
  PathStats st;
  st.n_paths = paths.size();
  if (paths.empty()) return st;
  const double n = static_cast<double>(paths.size());
  std::vector<double> times, xs, us, upper, x_all;
  times.reserve(paths.size());
  xs.reserve(paths.size());
  us.reserve(paths.size());
  upper.reserve(paths.size());
  double steps = 0.0;
  std::uint64_t lower_n = 0, upper_n = 0, sentinel_n = 0, alive_n = 0, limit_n = 0;
  for (const PathOutcome& p : paths) {
    times.push_back(p.time);
    const double x = grid.x[p.node];
    x_all.push_back(x);
    if (!is_sentinel(p.status)) xs.push_back(x);
    us.push_back(grid.u[p.node]);
    const bool up = p.status == PathStatus::AbsorbedUpper || p.status == PathStatus::SentinelUpper;
    const bool low = p.status == PathStatus::AbsorbedLower || p.status == PathStatus::SentinelLower;
    upper.push_back(up ? 1.0 : 0.0);
    upper_n += up;
    lower_n += low;
    sentinel_n += is_sentinel(p.status);
    alive_n += p.status == PathStatus::Alive;
    limit_n += p.status == PathStatus::StepLimit;
    steps += static_cast<double>(p.steps);
  }
  const Moments mt = moments(times);
  const Moments mx = moments(xs);
  const Moments mu = moments(us);
  const Moments mup = moments(upper);
  st.mean_time = mt.mean;
  st.se_time = mt.se;
  st.mean_x = mx.mean;
  st.se_x = mx.se;
  st.mean_u = mu.mean;
  st.se_u = mu.se;
  st.frac_absorbed_upper = mup.mean;
  st.se_absorbed_upper = mup.se;
  st.frac_absorbed_lower = static_cast<double>(lower_n) / n;
  st.frac_sentinel = static_cast<double>(sentinel_n) / n;
  st.frac_alive = static_cast<double>(alive_n) / n;
  st.frac_step_limit = static_cast<double>(limit_n) / n;
  st.mean_steps = steps / n;
  st.x_quantiles = quantiles(std::move(x_all), {0.05, 0.25, 0.5, 0.75, 0.95});
  st.contamination_ok = st.frac_sentinel <= 1e-3;
  return st;
}

PathStats simulate_paths(const GridModel& grid, double T, std::uint64_t n_paths,
                         std::uint64_t seed, const WalkOptions& opts) {
  return summarize_paths(grid, run_walks(grid, T, n_paths, seed, opts));
}

SMDStats estimate_smd(const GridModel& grid, double T, std::uint64_t n_paths, std::uint64_t seed,
                      double eps_floor, WalkOptions opts) {
  if (!grid.has_theta) {
    throw Error(ErrorCode::InvalidArgument, "density estimation needs beta");
  }
  opts.track_density = true;
  const std::vector<PathOutcome> paths = run_walks(grid, T, n_paths, seed, opts);
  SMDStats st;
  st.n_paths = n_paths;
  st.eps_floor = eps_floor;
  std::vector<double> z_kept;
  z_kept.reserve(paths.size());
  double quad = 0.0;
  std::uint64_t absorbed = 0, sentinel = 0, below = 0;
  for (const PathOutcome& p : paths) {
    if (p.log_z > 700.0 || std::isnan(p.log_z)) {
      throw Error(ErrorCode::OverflowGuard, "density process left the double range");
    }
    if (is_sentinel(p.status)) {
      ++sentinel;
      continue;
    }
    absorbed += p.status == PathStatus::AbsorbedLower || p.status == PathStatus::AbsorbedUpper;
    const double z = std::exp(p.log_z);
    z_kept.push_back(z);
    below += z < eps_floor;
    quad += p.quad;
  }
  const Moments m = moments(z_kept);
  st.mean_z = m.mean;
  st.se_z = m.se;
  const double n = static_cast<double>(paths.size());
  st.frac_absorbed = static_cast<double>(absorbed) / n;
  st.frac_sentinel = static_cast<double>(sentinel) / n;
  const double kept = static_cast<double>(z_kept.size());
  st.frac_z_below = kept > 0 ? static_cast<double>(below) / kept : 0.0;
  st.mean_quadratic = kept > 0 ? quad / kept : 0.0;
  st.z_quantiles = quantiles(std::move(z_kept), {0.001, 0.01, 0.1, 0.5});
  st.contamination_ok = st.frac_sentinel <= 1e-3;
  return st;
}

DiffusionSpec candidate_diffusion(const DiffusionSpec& spec, const ImproperConfig& cfg) {
  const StateInterval& J = spec.interval();
  double mass[2] = {spec.speed().boundary_mass(Side::Lower), spec.speed().boundary_mass(Side::Upper)};
  for (Side side : {Side::Lower, Side::Upper}) {
    if (!std::isfinite(J.endpoint(side))) continue;
    if (feller_accessibility(spec, side, cfg).value == Accessibility::Accessible) {
      mass[side == Side::Lower ? 0 : 1] = kInf;
    }
  }
  std::vector<Atom> atoms;
  for (const Atom& a : spec.speed().atoms()) {
    atoms.push_back({a.z, a.gamma * spec.scale().s_prime(a.z)});
  }
  const DiffusionSpec original = spec;
  const SpeedSpec speed = SpeedSpec::from_log_density(
      [original](double x) {
        return original.scale().log_s_prime(x) + original.speed().log_density(x);
      },
      std::move(atoms), mass[0], mass[1]);
  const ScaleSpec identity = ScaleSpec::from_raw([](double x) { return x; },
                                                 [](double) { return 1.0; }, std::nullopt, true);
  return DiffusionSpec(J, identity, speed, spec.x0());
}

GapStats estimate_candidate_martingale_gap(const DiffusionSpec& spec, double T,
                                           std::uint64_t n_paths, std::uint64_t seed, double h,
                                           double lo, double hi, Spacing spacing,
                                           const WalkOptions& opts) {
  const DiffusionSpec cand = candidate_diffusion(spec);
  const GridModel grid = build_grid(cand, h, lo, hi, spacing);
  WalkOptions o = opts;
  o.track_density = false;
  const PathStats st = simulate_paths(grid, T, n_paths, seed, o);
  GapStats g;
  g.mean_x = st.mean_x;
  g.gap = st.mean_x - spec.x0();
  g.se = st.se_x;
  g.frac_sentinel = st.frac_sentinel;
  g.contamination_ok = st.contamination_ok;
  g.n_paths = n_paths;
  g.grid_nodes = grid.size();
  return g;
}

PathRecord record_path(const GridModel& grid, double T, std::uint64_t seed,
                       std::uint64_t path_index, std::uint64_t max_steps) {
  PathRecord rec;
  WalkOptions opts;
  opts.track_density = grid.has_theta;
  opts.max_steps = max_steps;
  rec.outcome = walk_dispatch(grid, T, seed, path_index, opts, &rec.nodes);
  return rec;
}

OccupationCheck discrete_occupation_identity_check(const GridModel& grid, const PathRecord& path) {
  detail::ExactSum lhs;
  std::vector<std::uint64_t> ups(grid.size(), 0), downs(grid.size(), 0);
  for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) {
    const std::uint32_t from = path.nodes[k];
    if (path.nodes[k + 1] > from) {
      lhs.add(grid.quad_up[from]);
      ++ups[from];
    } else {
      lhs.add(grid.quad_down[from]);
      ++downs[from];
    }
  }
  detail::ExactSum rhs;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rhs.add(grid.quad_up[i], ups[i]);
    rhs.add(grid.quad_down[i], downs[i]);
  }
  OccupationCheck out;
  out.lhs = lhs.to_double();
  out.rhs = rhs.to_double();
  detail::ExactSum d = lhs;
  d.subtract(rhs);
  out.diff = d.to_double();
  out.exact = d.is_zero();
  return out;
}

}  // namespace diffscope
