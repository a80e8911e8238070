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


// Command-line front end. Talks to the library only through the C interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "diffscope/diffscope.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

struct Owned {
  char* p = nullptr;
  ~Owned() { ds_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct ModelHandle {
  ds_model* p = nullptr;
  ~ModelHandle() { ds_model_free(p); }
};

struct Source {
  std::string model;
  std::string config;
  std::vector<std::string> params;
  std::optional<double> x0;
};

int fail(const std::string& where) {
  std::cerr << "diffscope: " << where << ": " << ds_last_error() << "\n";
  return kExitError;
}

bool write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::cerr << "diffscope: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::string model_name(const Source& src) {
  if (src.params.empty()) return src.model;
  std::string name = src.model;
  std::string args;
  if (const auto open = name.find('('); open != std::string::npos) {
    args = name.substr(open + 1, name.size() - open - 2);
    name = name.substr(0, open);
  }
  for (const std::string& p : src.params) args += (args.empty() ? "" : ",") + p;
  return name + "(" + args + ")";
}

// Loads the model document named by --model or --config, applying --x0.
std::optional<std::string> load_document(const Source& src) {
  std::string text;
  if (!src.config.empty()) {
    std::ifstream f(src.config, std::ios::binary);
    if (!f) {
      std::cerr << "diffscope: cannot read " << src.config << "\n";
      return std::nullopt;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  } else {
    Owned doc;
    if (ds_catalog_document(model_name(src).c_str(), &doc.p) != DS_OK) {
      fail("catalog");
      return std::nullopt;
    }
    text = doc.str();
  }
  if (src.x0) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      std::cerr << "diffscope: --x0 needs a JSON object document\n";
      return std::nullopt;
    }
    doc["x0"] = *src.x0;
    text = doc.dump(2);
  }
  return text;
}

void add_source_options(CLI::App* cmd, Source& src) {
  auto* m = cmd->add_option("--model", src.model, "catalog model, e.g. bessel3 or gbm(mu=0.1)");
  auto* c = cmd->add_option("--config", src.config, "model document (JSON)")->check(CLI::ExistingFile);
  m->excludes(c);
  cmd->add_option("--param", src.params, "catalog parameter k=v (repeatable)");
  cmd->add_option("--x0", src.x0, "override the starting point");
}

bool require_source(const Source& src) {
  if (src.model.empty() && src.config.empty()) {
    std::cerr << "diffscope: one of --model or --config is required\n";
    return false;
  }
  return true;
}

ds_format format_of(const std::string& f) { return f == "text" ? DS_FORMAT_TEXT : DS_FORMAT_JSON; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify and simulate one-dimensional diffusion markets"};
  app.set_version_flag("--version", std::string(ds_version()));
  app.require_subcommand(1);

  Source src;
  std::string format = "json";
  std::string out;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--out", out, "write output to this file");
  };

  CLI::App* classify = app.add_subcommand("classify", "no-arbitrage verdicts with clause traces");
  std::string horizon;
  add_source_options(classify, src);
  add_common(classify);
  classify->add_option("--horizon", horizon, "finite, infinite or both")
      ->check(CLI::IsMember({"finite", "infinite", "both"}));

  CLI::App* simulate = app.add_subcommand("simulate", "random-walk simulation");
  simulate->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  add_source_options(simulate, src);
  add_common(simulate);
  std::string mode = "smd";
  std::optional<double> T, h;
  std::optional<std::uint64_t> paths, seed;
  std::string interval, spacing;
  bool exponential = false;
  simulate->add_option("--mode", mode, "smd, exit, paths or gap")
      ->check(CLI::IsMember({"smd", "exit", "paths", "gap"}));
  simulate->add_option("--T", T, "horizon");
  simulate->add_option("--paths", paths, "number of paths");
  simulate->add_option("--seed", seed, "random seed");
  simulate->add_option("--h", h, "grid step");
  simulate->add_option("--interval", interval, "truncation or exit interval lo,hi");
  simulate->add_option("--spacing", spacing, "auto, uniform_scale or equal_time")
      ->check(CLI::IsMember({"auto", "uniform_scale", "equal_time"}));
  simulate->add_flag("--exponential", exponential, "exponential holding times");

  CLI::App* catalog = app.add_subcommand("catalog", "list catalog models or expand one");
  std::string catalog_name;
  std::vector<std::string> catalog_params;
  catalog->add_option("name", catalog_name, "model to expand");
  catalog->add_option("--param", catalog_params, "catalog parameter k=v (repeatable)");
  add_common(catalog);

  CLI::App* validate = app.add_subcommand("validate", "check a model document");
  add_source_options(validate, src);
  add_common(validate);

  CLI11_PARSE(app, argc, argv);
  const ds_format fmt = format_of(format);

  if (catalog->parsed()) {
    Owned text;
    if (catalog_name.empty()) {
      if (ds_catalog_list(fmt, &text.p) != DS_OK) return fail("catalog");
    } else {
      Source s{catalog_name, "", catalog_params, std::nullopt};
      if (ds_catalog_document(model_name(s).c_str(), &text.p) != DS_OK) return fail("catalog");
    }
    return write_output(text.str(), out) ? kExitOk : kExitError;
  }

  if (!require_source(src)) return kExitError;
  const std::optional<std::string> doc = load_document(src);
  if (!doc) return kExitError;

  if (validate->parsed()) {
    Owned text;
    int valid = 0;
    if (ds_validate_json(doc->c_str(), fmt, &text.p, &valid) != DS_OK) return fail("validate");
    if (!write_output(text.str(), out)) return kExitError;
    return valid ? kExitOk : kExitError;
  }

  ModelHandle model;
  if (ds_model_from_json(doc->c_str(), &model.p) != DS_OK) {
    std::cerr << "diffscope: model: " << ds_last_error() << "\n";
    return kExitError;
  }

  if (classify->parsed()) {
    Owned text;
    int conclusive = 0;
    if (ds_classify(model.p, horizon.empty() ? nullptr : horizon.c_str(), fmt, &text.p, &conclusive) !=
        DS_OK) {
      return fail("classify");
    }
    if (!write_output(text.str(), out)) return kExitError;
    return conclusive ? kExitOk : kExitInconclusive;
  }

  json opts = {{"mode", mode}};
  if (T) opts["T"] = *T;
  if (h) opts["h"] = *h;
  if (paths) opts["n_paths"] = *paths;
  if (seed) opts["seed"] = *seed;
  if (!spacing.empty()) opts["spacing"] = spacing;
  if (exponential) opts["exponential_holding"] = true;
  if (!interval.empty()) {
    const auto comma = interval.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      opts["interval"] = {std::stod(interval.substr(0, comma)), std::stod(interval.substr(comma + 1))};
    } catch (const std::exception&) {
      std::cerr << "diffscope: --interval expects lo,hi\n";
      return kExitError;
    }
  }
  Owned text;
  if (ds_simulate(model.p, opts.dump().c_str(), fmt, &text.p) != DS_OK) return fail("simulate");
  return write_output(text.str(), out) ? kExitOk : kExitError;
}
