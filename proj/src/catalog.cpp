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


#include "catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include "diffscope/error.hpp"

namespace diffscope {

using nlohmann::json;

namespace {

using Params = std::map<std::string, double>;

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  return v < 0 ? "(" + s + ")" : s;
}

json interval(json l, json r, bool lc, bool rc) {
  return {{"l", l}, {"r", r}, {"l_closed", lc}, {"r_closed", rc}};
}

json ito(const std::string& mu, const std::string& a, double anchor) {
  return {{"form", "ito"}, {"mu", mu}, {"a", a}, {"anchor", anchor}};
}

json speed(const std::string& w, json mass_l = 0, json mass_r = 0, json atoms = json::array()) {
  return {{"density_form", "scale_relative"},
          {"density_expr", w},
          {"atoms", std::move(atoms)},
          {"boundary_mass_l", std::move(mass_l)},
          {"boundary_mass_r", std::move(mass_r)}};
}

json simulation(double lo, double hi, double h = 0.02) {
  return {{"h", h}, {"truncation", {lo, hi}}, {"T", 1.0}, {"n_paths", 100000}, {"seed", 1}};
}

json base(const std::string& name, const std::string& description, json J, json scale, json sp,
          double x0, json sim) {
  return {{"name", name},       {"description", description},
          {"state_interval", std::move(J)}, {"scale", std::move(scale)},
          {"speed", std::move(sp)}, {"x0", x0},
          {"horizon", "both"},  {"simulation", std::move(sim)}};
}

json bm(const Params&) {
  json d = base("bm", "Brownian motion on the real line", interval("-inf", "inf", false, false),
                ito("0", "1", 0.0), speed("1"), 0.0, simulation(-10, 10));
  d["expectations"] = {{"exit_time_from_0_of_(-1,1)", 1.0}, {"candidate_gap", 0.0}};
  return d;
}

json absorbed_bm(const Params&) {
  json d = base("absorbed_bm", "Brownian motion absorbed at 0", interval(0, "inf", true, false),
                ito("0", "1", 1.0), speed("1", "inf", 0), 1.0, simulation(0, 20));
  d["expectations"] = {{"absorption_probability_at_1_from_0.3_on_[0,1]", 0.3}};
  return d;
}

json reflecting_bm(const Params&) {
  return base("reflecting_bm", "Brownian motion instantaneously reflected at 0",
              interval(0, "inf", true, false), ito("0", "1", 1.0), speed("1", 0, 0), 1.0,
              simulation(0, 20));
}

json sticky_bm(const Params& p) {
  const double gamma = p.at("gamma");
  json d = base("sticky_bm", "Brownian motion with a sticky point at 0",
                interval("-inf", "inf", false, false), ito("0", "1", 0.0),
                speed("1", 0, 0, json::array({{{"z", 0.0}, {"gamma", gamma}}})), 0.0,
                simulation(-10, 10));
  d["expectations"] = {{"exit_time_from_0_of_(-1,1)", 1.0 + gamma}};
  return d;
}

json gbm(const Params& p) {
  const double mu = p.at("mu");
  const double s2 = p.at("sigma") * p.at("sigma");
  return base("gbm", "geometric Brownian motion", interval(0, "inf", false, false),
              ito(num(mu) + "*x", num(s2) + "*x^2", 1.0),
              speed("1/(" + num(s2) + "*x^2)", "inf", 0), 1.0, simulation(0.01, 100));
}

json ou(const Params& p) {
  const double kappa = p.at("kappa");
  json d = base("ou", "Ornstein-Uhlenbeck process with mean level 0",
                interval("-inf", "inf", false, false), ito(num(-kappa) + "*x", "1", 0.0),
                speed("1"), 0.0, simulation(-8, 8, 0.05));
  d["expectations"] = {{"density_mean_at_T1", 1.0}};
  return d;
}

json bessel3(const Params&) {
  json d = base("bessel3", "three-dimensional Bessel process", interval(0, "inf", false, false),
                ito("1/x", "1", 1.0), speed("1", "inf", 0), 1.0, simulation(0.001, 100));
  d["expectations"] = {{"density_mean_at_T1", 0.6826894921370859}};
  return d;
}

json inverse_bessel3(const Params&) {
  json d = base("inverse_bessel3", "reciprocal of a three-dimensional Bessel process",
                interval(0, "inf", false, false), ito("0", "x^4", 1.0),
                speed("1/x^4", "inf", 0), 1.0, simulation(0.01, 1e4));
  d["expectations"] = {{"candidate_gap_at_T1", 0.6826894921370859 - 1.0}};
  return d;
}

json bounded_bm_01(const Params&) {
  return base("bounded_bm_01", "Brownian motion absorbed at 0 and 1", interval(0, 1, true, true),
              ito("0", "1", 0.5), speed("1", "inf", "inf"), 0.5, simulation(0, 1, 0.01));
}

// mu = m x^k, a = sigma^2 x^(k+1) on (0, inf), absorbing at 0 when 0 is
// reachable, one optional sticky point.
json power_family(const Params& p) {
  const double m = p.at("m");
  const double sigma = p.at("sigma");
  const double k = p.at("k");
  const double gamma = p.at("gamma");
  const double z = p.at("z");
  const double x0 = p.at("x0");
  if (!(sigma > 0.0) || !(x0 > 0.0) || !(z > 0.0) || !(gamma >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "example_2_14 needs sigma > 0, x0 > 0, z > 0 and gamma >= 0");
  }
  const double theta = 2.0 * m / (sigma * sigma);
  if (theta > 1.0 && k > 1.0) {
    throw Error(ErrorCode::InvalidArgument,
                "example_2_14 parameters make +inf accessible (2m/sigma^2 > 1 and k > 1)");
  }
  const bool zero_reachable = theta < 1.0 && k < 1.0;
  const double s2 = sigma * sigma;
  const std::string a = num(s2) + "*x^" + num(k + 1.0);
  json atoms = json::array();
  if (gamma > 0.0) atoms.push_back({{"z", z}, {"gamma", gamma}});
  json d = base("example_2_14", "power-law Ito family with an absorbing origin",
                interval(0, "inf", zero_reachable, false), ito(num(m) + "*x^" + num(k), a, 1.0),
                speed("1/(" + a + ")", "inf", 0, std::move(atoms)), x0,
                simulation(zero_reachable ? 0.0 : 1e-3, 100));
  d["expectations"] = {{"theta", theta}, {"origin_accessible", zero_reachable}};
  return d;
}

struct Builder {
  CatalogEntry entry;
  Params defaults;
  std::function<json(const Params&)> build;
};

const std::vector<Builder>& builders() {
  static const std::vector<Builder> table = {
      {{"bm", "Brownian motion on R", ""}, {}, bm},
      {{"absorbed_bm", "Brownian motion on [0, inf) absorbed at 0", ""}, {}, absorbed_bm},
      {{"reflecting_bm", "Brownian motion on [0, inf) reflected at 0", ""}, {}, reflecting_bm},
      {{"sticky_bm", "Brownian motion with a sticky point at 0", "gamma=2"}, {{"gamma", 2.0}}, sticky_bm},
      {{"gbm", "geometric Brownian motion", "mu=0.05, sigma=0.2"},
       {{"mu", 0.05}, {"sigma", 0.2}},
       gbm},
      {{"ou", "Ornstein-Uhlenbeck process", "kappa=1"}, {{"kappa", 1.0}}, ou},
      {{"bessel3", "three-dimensional Bessel process", ""}, {}, bessel3},
      {{"inverse_bessel3", "reciprocal three-dimensional Bessel process", ""}, {}, inverse_bessel3},
      {{"bounded_bm_01", "Brownian motion absorbed at 0 and 1", ""}, {}, bounded_bm_01},
      {{"example_2_14", "power-law Ito family mu=m x^k, a=sigma^2 x^(k+1)",
        "m=1, sigma=1, k=0, gamma=0, z=2, x0=1"},
       {{"m", 1.0}, {"sigma", 1.0}, {"k", 0.0}, {"gamma", 0.0}, {"z", 2.0}, {"x0", 1.0}},
       power_family},
  };
  return table;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const Builder& b : builders()) out.push_back(b.entry);
    return out;
  }();
  return entries;
}

json catalog_lookup(std::string_view text) {
  std::string name = trim(text);
  std::string args;
  if (const auto open = name.find('('); open != std::string::npos) {
    if (name.back() != ')') {
      throw Error(ErrorCode::InvalidArgument, "model parameters must be written name(k=v, ...)");
    }
    args = name.substr(open + 1, name.size() - open - 2);
    name = trim(name.substr(0, open));
  }
  const Builder* found = nullptr;
  for (const Builder& b : builders()) {
    if (b.entry.name == name) found = &b;
  }
  if (!found) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const Builder& b : builders()) {
      const std::size_t d = edit_distance(name, b.entry.name);
      if (d < best_d) {
        best_d = d;
        best = b.entry.name;
      }
    }
    std::string hint;
    if (best_d <= std::max<std::size_t>(2, name.size() / 3)) {
      hint = "; did you mean '" + best + "'?";
    } else {
      hint = "; available:";
      for (const Builder& b : builders()) hint += " " + b.entry.name;
    }
    throw Error(ErrorCode::UnknownModel, "unknown model '" + name + "'" + hint);
  }

  Params params = found->defaults;
  std::size_t pos = 0;
  while (pos < args.size()) {
    std::size_t comma = args.find(',', pos);
    if (comma == std::string::npos) comma = args.size();
    const std::string item = trim(std::string_view(args).substr(pos, comma - pos));
    pos = comma + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    const std::string key = trim(item.substr(0, eq == std::string::npos ? 0 : eq));
    if (eq == std::string::npos || !params.count(key)) {
      std::string allowed = found->entry.parameters.empty() ? "none" : found->entry.parameters;
      throw Error(ErrorCode::InvalidArgument,
                  "bad parameter '" + item + "' for " + name + " (parameters: " + allowed + ")");
    }
    const std::string value = trim(item.substr(eq + 1));
    double v = 0.0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || end != value.data() + value.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "parameter " + key + " needs a finite number");
    }
    params[key] = v;
  }
  json doc = found->build(params);
  if (!found->defaults.empty()) {
    json p = json::object();
    for (const auto& [k, v] : params) p[k] = v;
    doc["expectations"]["parameters"] = p;
  }
  return doc;
}

}  // namespace diffscope
