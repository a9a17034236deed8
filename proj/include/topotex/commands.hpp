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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "topotex/classify.hpp"
#include "topotex/persistence.hpp"
#include "topotex/pipeline.hpp"

// End-to-end workflows behind the CLI subcommands. Each writes its
// artifacts under an output directory and is byte-for-byte idempotent
// when `reproducible` is set.
namespace topotex::commands {

struct PersistenceRun {
  Barcode barcode;
  std::vector<std::filesystem::path> written;
};

/// <out>/<stem>.barcode.json, plus <stem>.barcode.svg and <stem>.diagram.svg with `plot`.
PersistenceRun persistence(const std::filesystem::path& image, const std::filesystem::path& out_dir, bool plot,
                           bool reproducible);

/// Runs ingestion and writes dataset.json, embeddings.bin and
/// ingest_report.json under `out_dir`. An empty cache_dir in the config
/// means <out>/cache.
IngestReport embed(const std::filesystem::path& manifest, PipelineConfig cfg, const std::filesystem::path& out_dir,
                   int jobs);

struct PairRun {
  std::string class_pos;
  std::string class_neg;
  std::filesystem::path dir;  // <out>/pair_<pos>_<neg>
  int n_train = 0;
  int n_test = 0;
  Evaluation evaluation;
  Eigen::VectorXd explained_variance_ratio;
};

std::filesystem::path pair_dir(const std::filesystem::path& out_dir, const std::string& pos, const std::string& neg);

/// Fresh split for the pair, PCA on its training rows, SVM in the projected
/// space, evaluation on the test rows. Writes model.json, split.json,
/// evaluation.csv, evaluation.json and three scatter views. Split counts
/// and C come from the dataset's config unless overridden in `cfg`.
PairRun train(const std::filesystem::path& out_dir, const PipelineConfig& cfg, const std::string& pos,
              const std::string& neg, bool reproducible);

/// Re-evaluates a trained pair on its stored test split.
PairRun evaluate(const std::filesystem::path& out_dir, const std::string& pos, const std::string& neg,
                 bool reproducible);

struct InterpretRun {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> panels;  // six SVGs
  bool side_checks_passed = false;
};

/// Virtual landscapes along the lifted normal plus the extreme real
/// annotation on each side; six SVG panels and interpret.json.
InterpretRun interpret(const std::filesystem::path& out_dir, const std::string& pos, const std::string& neg,
                       bool reproducible);

/// "89.25%"
std::string format_percent(double fraction);

}  // namespace topotex::commands
