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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "topotex/image.hpp"
#include "topotex/landscape.hpp"

namespace topotex {

struct PipelineConfig {
  int patch_size = 96;
  int patches_per_annotation = 6;
  int k = 5;
  Grid grid;
  std::uint64_t seed = 0;
  std::filesystem::path cache_dir;  // empty disables the cache
  double svm_c = 1.0;
  int train_per_class = 350;
  int test_per_class = 200;

  EmbeddingShape shape() const { return {grid, k}; }
};

/// Missing keys keep their defaults. Throws IoError on malformed input.
PipelineConfig config_from_json(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const PipelineConfig& cfg);

struct Provenance {
  std::string image_id;
  BBox bbox;
  std::uint64_t seed = 0;  // per-annotation seed actually used for subsampling
  std::vector<PatchCorner> corners;
};

struct EmbeddedAnnotation {
  int id = -1;  // zero-based record index in the manifest
  std::string label;
  LandscapeEmbedding embedding;
  Provenance provenance;
  std::string cache_key;
};

struct IngestIssue {
  int record = -1;
  std::string image_id;
  std::string message;
};

struct IngestReport {
  int total = 0;
  int processed = 0;
  int skipped = 0;
  int failed = 0;
  int cache_hits = 0;
  long persistence_computations = 0;
  std::vector<IngestIssue> warnings;
  std::vector<IngestIssue> errors;
};

struct IngestResult {
  std::vector<EmbeddedAnnotation> annotations;  // manifest order
  IngestReport report;
};

/// Crop → subsample → superlevel persistence → embed → average, for one
/// annotation on an already decoded image. Throws BoundsError/TooSmallError.
EmbeddedAnnotation embed_annotation(const GrayImage& img, const AnnotationRecord& rec, const PipelineConfig& cfg);

/// Relative image paths resolve against `base_dir`. `jobs` < 1 means 1.
/// Per-record failures are collected in the report. Output is independent
/// of `jobs`.
IngestResult ingest(const std::vector<AnnotationRecord>& records, const std::filesystem::path& base_dir,
                    const PipelineConfig& cfg, int jobs = 1);
IngestResult ingest(const std::filesystem::path& manifest, const PipelineConfig& cfg, int jobs = 1);

struct SplitSpec {
  int train_per_class = 350;
  int test_per_class = 200;
  std::uint64_t seed = 0;
};

/// Indices into the data vector, grouped by class in `classes` order and
/// ascending within a class.
struct Split {
  std::vector<int> train;
  std::vector<int> test;
};

/// Uniform sampling without replacement per class. Throws DomainError naming
/// the class when it has fewer than train + test annotations.
Split split(const std::vector<EmbeddedAnnotation>& data, const std::vector<std::string>& classes,
            const SplitSpec& spec);

/// Embedded annotations plus what is needed to revisit their source images.
struct Dataset {
  std::vector<EmbeddedAnnotation> items;
  PipelineConfig config;
  std::filesystem::path image_root;  // base for relative image ids
};

/// Dataset store written by the embed stage: dataset.json (records and
/// provenance) plus embeddings.bin (row-major float64 matrix).
void save_dataset(const std::filesystem::path& dir, const Dataset& ds);
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace topotex
