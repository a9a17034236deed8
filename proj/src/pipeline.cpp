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

#include "topotex/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include <json.hpp>

#include "topotex/cache.hpp"
#include "topotex/error.hpp"
#include "topotex/persistence.hpp"

namespace topotex {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

PipelineConfig config_from_json(const std::string& text) {
  PipelineConfig cfg;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw IoError("config must be a JSON object");
    cfg.patch_size = j.value("patch_size", cfg.patch_size);
    cfg.patches_per_annotation = j.value("patches_per_annotation", cfg.patches_per_annotation);
    cfg.k = j.value("k", cfg.k);
    cfg.grid.n = j.value("n", cfg.grid.n);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      cfg.grid.min = g.value("min", cfg.grid.min);
      cfg.grid.max = g.value("max", cfg.grid.max);
      cfg.grid.n = g.value("n", cfg.grid.n);
    }
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("cache_dir") && !j.at("cache_dir").is_null()) cfg.cache_dir = j.at("cache_dir").get<std::string>();
    cfg.svm_c = j.value("svm_c", cfg.svm_c);
    cfg.train_per_class = j.value("train_per_class", cfg.train_per_class);
    cfg.test_per_class = j.value("test_per_class", cfg.test_per_class);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed config: ") + e.what());
  }
  if (cfg.patch_size < 1 || cfg.patches_per_annotation < 1 || cfg.k < 1 || cfg.grid.n < 1 ||
      !(cfg.grid.max > cfg.grid.min) || !(cfg.svm_c > 0) || cfg.train_per_class < 1 || cfg.test_per_class < 1) {
    throw UsageError("config values out of range");
  }
  return cfg;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return config_from_json(text);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const PipelineConfig& cfg) {
  ojson j;
  j["patch_size"] = cfg.patch_size;
  j["patches_per_annotation"] = cfg.patches_per_annotation;
  j["k"] = cfg.k;
  j["grid"] = {{"min", cfg.grid.min}, {"max", cfg.grid.max}, {"n", cfg.grid.n}};
  j["seed"] = cfg.seed;
  j["cache_dir"] = cfg.cache_dir.empty() ? ojson(nullptr) : ojson(cfg.cache_dir.string());
  j["svm_c"] = cfg.svm_c;
  j["train_per_class"] = cfg.train_per_class;
  j["test_per_class"] = cfg.test_per_class;
  return j.dump(2) + "\n";
}

EmbeddedAnnotation embed_annotation(const GrayImage& img, const AnnotationRecord& rec, const PipelineConfig& cfg) {
  const GrayImage region = crop(img, rec.bbox);
  EmbeddedAnnotation out;
  out.label = rec.label;
  out.provenance.image_id = rec.image_id;
  out.provenance.bbox = rec.bbox;
  out.provenance.seed = annotation_seed(cfg.seed, rec.image_id, rec.bbox);
  const auto patches = sample_patches(region, cfg.patches_per_annotation, cfg.patch_size, out.provenance.seed);
  std::vector<LandscapeEmbedding> embeddings;
  embeddings.reserve(patches.size());
  for (const auto& p : patches) {
    out.provenance.corners.push_back(p.corner);
    embeddings.push_back(embed(superlevel_barcode(p.image), cfg.shape()));
  }
  out.embedding = average_embeddings(embeddings);
  return out;
}

namespace {

struct DecodedImage {
  std::string digest;
  std::optional<GrayImage> image;
  std::string error;
};

/// Small LRU of decoded images; manifests list many annotations per image.
class ImageStore {
 public:
  explicit ImageStore(std::size_t capacity) : capacity_(capacity) {}

  std::shared_ptr<const DecodedImage> get(const fs::path& path) {
    const std::string key = path.string();
    {
      std::lock_guard lock(mutex_);
      for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (it->first == key) {
          entries_.splice(entries_.begin(), entries_, it);
          return it->second;
        }
      }
    }
    auto decoded = std::make_shared<DecodedImage>();
    try {
      const auto bytes = read_file_bytes(path);
      decoded->digest = sha256_hex(bytes);
      decoded->image = decode_image(bytes);
    } catch (const Error& e) {
      decoded->error = e.what();
    }
    std::lock_guard lock(mutex_);
    entries_.emplace_front(key, decoded);
    if (entries_.size() > capacity_) entries_.pop_back();
    return decoded;
  }

 private:
  std::size_t capacity_;
  std::list<std::pair<std::string, std::shared_ptr<const DecodedImage>>> entries_;
  std::mutex mutex_;
};

std::string cache_key(const std::string& image_digest, const AnnotationRecord& rec, std::uint64_t seed,
                      const PipelineConfig& cfg) {
  ContentHasher h;
  h.add(std::string("topotex-embedding-v1")).add(image_digest);
  for (int c : {rec.bbox.x0, rec.bbox.y0, rec.bbox.x1, rec.bbox.y1}) h.add_i64(c);
  h.add_u64(seed)
      .add_i64(cfg.patch_size)
      .add_i64(cfg.patches_per_annotation)
      .add_i64(cfg.k)
      .add_f64(cfg.grid.min)
      .add_f64(cfg.grid.max)
      .add_i64(cfg.grid.n);
  return h.hex();
}

enum class Outcome { Computed, CacheHit, Skipped, Failed };

struct RecordResult {
  Outcome outcome = Outcome::Failed;
  std::optional<EmbeddedAnnotation> annotation;
  std::string message;
};

}  // namespace

IngestResult ingest(const std::vector<AnnotationRecord>& records, const fs::path& base_dir,
                    const PipelineConfig& cfg, int jobs) {
  std::unique_ptr<EmbeddingCache> cache;
  if (!cfg.cache_dir.empty()) cache = std::make_unique<EmbeddingCache>(cfg.cache_dir);
  ImageStore images(8 + 2 * static_cast<std::size_t>(std::max(jobs, 1)));

  std::vector<RecordResult> results(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      const auto& rec = records[i];
      RecordResult& r = results[i];
      try {
        const fs::path path = fs::path(rec.image_id).is_absolute() ? fs::path(rec.image_id) : base_dir / rec.image_id;
        const auto decoded = images.get(path);
        if (!decoded->image) {
          r.outcome = Outcome::Failed;
          r.message = decoded->error;
          continue;
        }
        const GrayImage& img = *decoded->image;
        const std::uint64_t seed = annotation_seed(cfg.seed, rec.image_id, rec.bbox);
        const std::string key = cache_key(decoded->digest, rec, seed, cfg);
        if (cache) {
          if (auto hit = cache->lookup(key); hit && hit->values.size() == cfg.shape().dimension()) {
            EmbeddedAnnotation a;
            a.label = rec.label;
            a.embedding = {cfg.grid, cfg.k, std::move(hit->values)};
            a.provenance = {rec.image_id, rec.bbox, seed, std::move(hit->corners)};
            a.cache_key = key;
            r.annotation = std::move(a);
            r.outcome = Outcome::CacheHit;
            continue;
          }
        }
        // Bounds problems are data errors; small annotations are skipped.
        const GrayImage region = crop(img, rec.bbox);
        if (region.width() < cfg.patch_size || region.height() < cfg.patch_size) {
          r.outcome = Outcome::Skipped;
          r.message = "annotation " + std::to_string(region.width()) + "x" + std::to_string(region.height()) +
                      " is smaller than patch size " + std::to_string(cfg.patch_size) + "; skipped";
          continue;
        }
        EmbeddedAnnotation a = embed_annotation(img, rec, cfg);
        a.cache_key = key;
        r.annotation = std::move(a);
        r.outcome = Outcome::Computed;
      } catch (const std::exception& e) {
        r.outcome = Outcome::Failed;
        r.message = e.what();
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(records.size(), 1))));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  // Merge in manifest order; cache writes happen here, serially.
  IngestResult out;
  out.report.total = static_cast<int>(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = results[i];
    const IngestIssue issue{static_cast<int>(i), records[i].image_id, r.message};
    switch (r.outcome) {
      case Outcome::Skipped:
        ++out.report.skipped;
        out.report.warnings.push_back(issue);
        continue;
      case Outcome::Failed:
        ++out.report.failed;
        out.report.errors.push_back(issue);
        continue;
      case Outcome::CacheHit:
        ++out.report.cache_hits;
        break;
      case Outcome::Computed:
        out.report.persistence_computations += cfg.patches_per_annotation;
        if (cache) cache->put(r.annotation->cache_key, {r.annotation->provenance.corners, r.annotation->embedding.values});
        break;
    }
    ++out.report.processed;
    r.annotation->id = static_cast<int>(i);
    out.annotations.push_back(std::move(*r.annotation));
  }
  if (cache) cache->flush();
  return out;
}

IngestResult ingest(const fs::path& manifest, const PipelineConfig& cfg, int jobs) {
  return ingest(read_manifest(manifest), manifest.parent_path(), cfg, jobs);
}

Split split(const std::vector<EmbeddedAnnotation>& data, const std::vector<std::string>& classes,
            const SplitSpec& spec) {
  if (spec.train_per_class < 0 || spec.test_per_class < 0) throw UsageError("split counts must be non-negative");
  Split out;
  for (const auto& cls : classes) {
    std::vector<int> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i].label == cls) members.push_back(static_cast<int>(i));
    }
    const std::size_t need = static_cast<std::size_t>(spec.train_per_class) + spec.test_per_class;
    if (members.size() < need) {
      throw DomainError("class '" + cls + "' has " + std::to_string(members.size()) + " annotations, needs " +
                        std::to_string(need) + " (" + std::to_string(spec.train_per_class) + " train + " +
                        std::to_string(spec.test_per_class) + " test)");
    }
    Rng rng(mix64(spec.seed ^ fnv1a(cls)));
    for (std::size_t i = 0; i < need; ++i) {
      const std::size_t j = i + rng.uniform(members.size() - 1 - i);
      std::swap(members[i], members[j]);
    }
    auto mid = members.begin() + spec.train_per_class;
    std::vector<int> tr(members.begin(), mid);
    std::vector<int> te(mid, members.begin() + static_cast<std::ptrdiff_t>(need));
    std::sort(tr.begin(), tr.end());
    std::sort(te.begin(), te.end());
    out.train.insert(out.train.end(), tr.begin(), tr.end());
    out.test.insert(out.test.end(), te.begin(), te.end());
  }
  return out;
}

namespace {
constexpr char kMatrixMagic[8] = {'T', 'T', 'E', 'M', 'B', '0', '0', '1'};
}

void save_dataset(const fs::path& dir, const Dataset& ds) {
  const auto& data = ds.items;
  const auto& cfg = ds.config;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::uint64_t dim = cfg.shape().dimension();

  ojson j;
  j["format"] = "topotex-dataset";
  j["version"] = 1;
  j["config"] = ojson::parse(config_to_json(cfg));
  j["image_root"] = ds.image_root.string();
  j["dimension"] = dim;
  j["records"] = ojson::array();
  for (std::size_t row = 0; row < data.size(); ++row) {
    const auto& a = data[row];
    if (a.embedding.values.size() != dim) throw UsageError("embedding dimension does not match config");
    ojson r;
    r["row"] = row;
    r["id"] = a.id;
    r["label"] = a.label;
    r["image"] = a.provenance.image_id;
    r["bbox"] = {a.provenance.bbox.x0, a.provenance.bbox.y0, a.provenance.bbox.x1, a.provenance.bbox.y1};
    r["seed"] = a.provenance.seed;
    ojson corners = ojson::array();
    for (const auto& c : a.provenance.corners) corners.push_back({c.x, c.y});
    r["corners"] = std::move(corners);
    r["key"] = a.cache_key;
    j["records"].push_back(std::move(r));
  }
  {
    std::ofstream out(dir / "dataset.json");
    if (!out) throw IoError("cannot write " + (dir / "dataset.json").string());
    out << j.dump(1) << "\n";
  }
  std::ofstream out(dir / "embeddings.bin", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "embeddings.bin").string());
  const std::uint64_t rows = data.size();
  out.write(kMatrixMagic, 8);
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&dim), 8);
  for (const auto& a : data) {
    out.write(reinterpret_cast<const char*>(a.embedding.values.data()), static_cast<std::streamsize>(dim * 8));
  }
  if (!out) throw IoError("write failed: " + (dir / "embeddings.bin").string());
}

Dataset load_dataset(const fs::path& dir) {
  std::ifstream jin(dir / "dataset.json");
  if (!jin) throw IoError("no dataset at " + dir.string() + " (run embed first)");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(jin);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed dataset.json: " + std::string(e.what()));
  }
  const PipelineConfig cfg = config_from_json(j.at("config").dump());
  std::ifstream bin(dir / "embeddings.bin", std::ios::binary);
  if (!bin) throw IoError("missing " + (dir / "embeddings.bin").string());
  char magic[8];
  std::uint64_t rows = 0, dim = 0;
  bin.read(magic, 8);
  bin.read(reinterpret_cast<char*>(&rows), 8);
  bin.read(reinterpret_cast<char*>(&dim), 8);
  if (!bin || std::memcmp(magic, kMatrixMagic, 8) != 0) throw IoError("embeddings.bin has a bad header");
  if (dim != cfg.shape().dimension() || rows != j.at("records").size()) {
    throw IoError("embeddings.bin does not match dataset.json");
  }
  Dataset ds;
  ds.config = cfg;
  ds.image_root = j.value("image_root", std::string());
  auto& data = ds.items;
  data.reserve(rows);
  try {
    for (const auto& r : j.at("records")) {
      EmbeddedAnnotation a;
      a.id = r.at("id").get<int>();
      a.label = r.at("label").get<std::string>();
      a.provenance.image_id = r.at("image").get<std::string>();
      const auto& b = r.at("bbox");
      a.provenance.bbox = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
      a.provenance.seed = r.at("seed").get<std::uint64_t>();
      for (const auto& c : r.at("corners")) a.provenance.corners.push_back({c[0].get<int>(), c[1].get<int>()});
      a.cache_key = r.at("key").get<std::string>();
      a.embedding.grid = cfg.grid;
      a.embedding.k = cfg.k;
      a.embedding.values.resize(dim);
      if (!bin.read(reinterpret_cast<char*>(a.embedding.values.data()), static_cast<std::streamsize>(dim * 8))) {
        throw IoError("embeddings.bin truncated");
      }
      data.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed dataset.json: " + std::string(e.what()));
  }
  return ds;
}

}  // namespace topotex
