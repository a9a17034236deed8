// Copyright 2026 The topotex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// topotex command-line front end. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "topotex/topotex.h"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int report(tt_status s) {
  if (s == TT_OK) return 0;
  std::fprintf(stderr, "topotex: %s\n", tt_last_error());
  return s == TT_ERR_DOMAIN ? kExitDomain : kExitUsage;
}

struct ConfigDeleter {
  void operator()(tt_config* c) const { tt_config_free(c); }
};
using ConfigPtr = std::unique_ptr<tt_config, ConfigDeleter>;

bool split_pair(const std::string& pair, std::string& pos, std::string& neg) {
  const auto colon = pair.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == pair.size()) return false;
  pos = pair.substr(0, colon);
  neg = pair.substr(colon + 1);
  return neg.find(':') == std::string::npos;
}

void print_pair(const char* verb, const std::string& pos, const std::string& neg, const tt_pair_summary& s) {
  std::printf("%s %s vs %s: train %d, test %d\n", verb, pos.c_str(), neg.c_str(), s.n_train, s.n_test);
  std::printf("explained variance (PC1..PC3): %.4f %.4f %.4f\n", s.explained_variance_ratio[0],
              s.explained_variance_ratio[1], s.explained_variance_ratio[2]);
  std::printf("confusion [actual x predicted]: %s->%s %d, %s->%s %d, %s->%s %d, %s->%s %d\n", pos.c_str(),
              pos.c_str(), s.confusion[0][0], pos.c_str(), neg.c_str(), s.confusion[0][1], neg.c_str(), pos.c_str(),
              s.confusion[1][0], neg.c_str(), neg.c_str(), s.confusion[1][1]);
  std::printf("Test data performance: %s (%d/%d)\n", s.accuracy_text, s.correct, s.total);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological texture classification: cubical persistence, landscapes, PCA and linear SVM"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tt_version()));

  std::string out_dir = ".";
  std::string manifest;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string pair;
  bool plot = false;
  bool reproducible = false;
  int jobs = 1;
  std::string image;
  int per_class = 200;

  auto* persistence = app.add_subcommand("persistence", "Barcode of one image (JSON, optional SVG plots)");
  persistence->add_option("image", image, "PNG or PGM image")->required();
  persistence->add_option("--out", out_dir, "Output directory");
  persistence->add_flag("--plot", plot, "Also write barcode and diagram SVGs");
  persistence->add_flag("--reproducible", reproducible, "Omit timestamps from SVG output");

  auto* embed = app.add_subcommand("embed", "Embed every annotation of a manifest");
  embed->add_option("--manifest", manifest, "JSON Lines annotation manifest")->required();
  embed->add_option("--config", config_path, "Pipeline config (JSON)");
  embed->add_option("--seed", seed, "Global seed (overrides the config)");
  embed->add_option("--out", out_dir, "Output directory")->required();
  embed->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "Fit PCA + SVM for one class pair and evaluate it");
  train->add_option("--out", out_dir, "Directory written by embed")->required();
  train->add_option("--pair", pair, "Class pair A:B (A is the positive side)")->required();
  train->add_option("--config", config_path, "Config overriding the one stored by embed");
  train->add_option("--seed", seed, "Split seed (overrides the config)");
  train->add_flag("--reproducible", reproducible, "Omit timestamps from SVG output");

  auto* evaluate = app.add_subcommand("evaluate", "Re-evaluate a trained pair on its test split");
  evaluate->add_option("--out", out_dir, "Directory written by embed")->required();
  evaluate->add_option("--pair", pair, "Class pair A:B")->required();
  evaluate->add_flag("--reproducible", reproducible, "Omit timestamps from SVG output");

  auto* interpret = app.add_subcommand("interpret", "Virtual and extreme landscapes for a trained pair");
  interpret->add_option("--out", out_dir, "Directory written by embed")->required();
  interpret->add_option("--pair", pair, "Class pair A:B")->required();
  interpret->add_flag("--reproducible", reproducible, "Omit timestamps from SVG output");

  auto* synth = app.add_subcommand("synth", "Write a synthetic sugar/flowers corpus and manifest");
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--per-class", per_class, "Images per class")->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const int flags = (plot ? TT_FLAG_PLOT : 0) | (reproducible ? TT_FLAG_REPRODUCIBLE : 0);
  std::string pos;
  std::string neg;
  if (!pair.empty() && !split_pair(pair, pos, neg)) {
    std::fprintf(stderr, "topotex: --pair expects A:B, got '%s'\n", pair.c_str());
    return kExitUsage;
  }

  if (*persistence) {
    tt_persistence_summary s{};
    if (int rc = report(tt_run_persistence(image.c_str(), out_dir.c_str(), flags, &s))) return rc;
    std::printf("H0 bars: %d, H1 bars: %d, files written: %d\n", s.h0_bars, s.h1_bars, s.files_written);
    return 0;
  }

  if (*embed) {
    tt_config* raw = nullptr;
    tt_status st = config_path.empty() ? tt_config_default(&raw) : tt_config_load(config_path.c_str(), &raw);
    ConfigPtr cfg(raw);
    if (int rc = report(st)) return rc;
    if (seed) tt_config_set_seed(cfg.get(), *seed);
    tt_ingest_summary s{};
    if (int rc = report(tt_run_embed(manifest.c_str(), cfg.get(), out_dir.c_str(), jobs, &s))) return rc;
    std::printf("annotations: %d, processed: %d, skipped: %d, failed: %d\n", s.total, s.processed, s.skipped,
                s.failed);
    std::printf("cache hits: %d, persistence computations: %ld\n", s.cache_hits, s.persistence_computations);
    if (s.skipped + s.failed > 0) std::printf("see %s/ingest_report.json for details\n", out_dir.c_str());
    return 0;
  }

  if (*train) {
    ConfigPtr cfg;
    if (!config_path.empty() || seed) {
      tt_config* raw = nullptr;
      tt_status st = config_path.empty() ? tt_config_from_dataset(out_dir.c_str(), &raw)
                                         : tt_config_load(config_path.c_str(), &raw);
      cfg.reset(raw);
      if (int rc = report(st)) return rc;
      if (seed) tt_config_set_seed(cfg.get(), *seed);
    }
    tt_pair_summary s{};
    if (int rc = report(tt_run_train(out_dir.c_str(), cfg.get(), pos.c_str(), neg.c_str(), flags, &s))) return rc;
    print_pair("trained", pos, neg, s);
    return 0;
  }

  if (*evaluate) {
    tt_pair_summary s{};
    if (int rc = report(tt_run_evaluate(out_dir.c_str(), pos.c_str(), neg.c_str(), flags, &s))) return rc;
    print_pair("evaluated", pos, neg, s);
    return 0;
  }

  if (*interpret) {
    tt_interpret_summary s{};
    if (int rc = report(tt_run_interpret(out_dir.c_str(), pos.c_str(), neg.c_str(), flags, &s))) return rc;
    std::printf("panels written: %d\n", s.panels);
    std::printf("virtual points on declared side: %s\n", s.side_checks_passed ? "yes" : "no");
    return s.side_checks_passed ? 0 : kExitDomain;
  }

  if (*synth) {
    if (int rc = report(tt_synthesize(out_dir.c_str(), per_class, seed.value_or(0)))) return rc;
    std::printf("wrote %d images per class and %s/manifest.jsonl\n", per_class, out_dir.c_str());
    return 0;
  }
  return kExitUsage;
}
