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

#include "topotex/topotex.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "topotex/commands.hpp"
#include "topotex/error.hpp"
#include "topotex/synthetic.hpp"

struct tt_image {
  topotex::GrayImage value;
};

struct tt_barcode {
  topotex::Barcode value;
};

struct tt_config {
  topotex::PipelineConfig value;
};

namespace {

thread_local std::string last_error;

tt_status fail(tt_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
tt_status guarded(F&& f) noexcept {
  try {
    last_error.clear();
    f();
    return TT_OK;
  } catch (const topotex::Error& e) {
    switch (e.kind()) {
      case topotex::ErrorKind::Domain: return fail(TT_ERR_DOMAIN, e.what());
      case topotex::ErrorKind::Io: return fail(TT_ERR_IO, e.what());
      case topotex::ErrorKind::Usage: return fail(TT_ERR_USAGE, e.what());
    }
    return fail(TT_ERR_INTERNAL, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(TT_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TT_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw topotex::UsageError(std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill(tt_pair_summary* out, const topotex::commands::PairRun& run) {
  if (out == nullptr) return;
  *out = tt_pair_summary{};
  const auto& ev = run.evaluation;
  out->accuracy = ev.accuracy;
  std::snprintf(out->accuracy_text, sizeof out->accuracy_text, "%s",
                topotex::commands::format_percent(ev.accuracy).c_str());
  out->total = ev.total;
  out->correct = ev.correct;
  for (int a = 0; a < 2; ++a)
    for (int p = 0; p < 2; ++p) out->confusion[a][p] = ev.confusion[a][p];
  out->n_train = run.n_train;
  out->n_test = run.n_test;
  for (int i = 0; i < 3 && i < run.explained_variance_ratio.size(); ++i)
    out->explained_variance_ratio[i] = run.explained_variance_ratio[i];
}

}  // namespace

extern "C" {

TT_API const char* tt_last_error(void) { return last_error.c_str(); }
TT_API const char* tt_version(void) { return "1.0.0"; }
TT_API void tt_string_free(char* s) { std::free(s); }

TT_API tt_status tt_image_load(const char* path, tt_image** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tt_image{topotex::load_image(path)};
  });
}

TT_API tt_status tt_image_from_pixels(int width, int height, const uint8_t* pixels, tt_image** out) {
  return guarded([&] {
    require(pixels, "pixels");
    require(out, "out");
    if (width < 1 || height < 1) throw topotex::UsageError("image dimensions must be positive");
    std::vector<std::uint8_t> px(pixels, pixels + static_cast<std::size_t>(width) * height);
    *out = new tt_image{topotex::GrayImage(width, height, std::move(px))};
  });
}

TT_API int tt_image_width(const tt_image* img) { return img ? img->value.width() : 0; }
TT_API int tt_image_height(const tt_image* img) { return img ? img->value.height() : 0; }
TT_API void tt_image_free(tt_image* img) { delete img; }

TT_API tt_status tt_barcode_compute(const tt_image* img, tt_barcode** out) {
  return guarded([&] {
    require(img, "img");
    require(out, "out");
    *out = new tt_barcode{topotex::superlevel_barcode(img->value)};
  });
}

TT_API size_t tt_barcode_size(const tt_barcode* bc) { return bc ? bc->value.bars.size() : 0; }

TT_API tt_status tt_barcode_bar(const tt_barcode* bc, size_t index, tt_bar* out) {
  return guarded([&] {
    require(bc, "bc");
    require(out, "out");
    if (index >= bc->value.bars.size()) throw topotex::UsageError("bar index out of range");
    const auto& b = bc->value.bars[index];
    *out = tt_bar{b.dim, b.birth, b.death.value_or(0), b.death ? 0 : 1};
  });
}

TT_API tt_status tt_barcode_betti(const tt_barcode* bc, int cutoff, int* b0, int* b1) {
  return guarded([&] {
    require(bc, "bc");
    const auto betti = topotex::betti_at(bc->value, cutoff);
    if (b0) *b0 = betti.b0;
    if (b1) *b1 = betti.b1;
  });
}

TT_API tt_status tt_barcode_to_json(const tt_barcode* bc, char** out) {
  return guarded([&] {
    require(bc, "bc");
    require(out, "out");
    *out = dup_string(topotex::barcode_to_json(bc->value));
  });
}

TT_API void tt_barcode_free(tt_barcode* bc) { delete bc; }

TT_API size_t tt_embedding_dimension(void) { return topotex::EmbeddingShape{}.dimension(); }

TT_API tt_status tt_barcode_embed(const tt_barcode* bc, double* out, size_t capacity) {
  return guarded([&] {
    require(bc, "bc");
    require(out, "out");
    const auto e = topotex::embed(bc->value);
    if (capacity < e.values.size()) throw topotex::UsageError("output buffer too small");
    std::memcpy(out, e.values.data(), e.values.size() * sizeof(double));
  });
}

TT_API tt_status tt_config_default(tt_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new tt_config{};
  });
}

TT_API tt_status tt_config_load(const char* path, tt_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tt_config{topotex::load_config(path)};
  });
}

TT_API tt_status tt_config_from_dataset(const char* out_dir, tt_config** out) {
  return guarded([&] {
    require(out_dir, "out_dir");
    require(out, "out");
    *out = new tt_config{topotex::load_dataset(out_dir).config};
  });
}

TT_API void tt_config_set_seed(tt_config* cfg, uint64_t seed) {
  if (cfg) cfg->value.seed = seed;
}

TT_API uint64_t tt_config_seed(const tt_config* cfg) { return cfg ? cfg->value.seed : 0; }

TT_API tt_status tt_config_to_json(const tt_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = dup_string(topotex::config_to_json(cfg->value));
  });
}

TT_API void tt_config_free(tt_config* cfg) { delete cfg; }

TT_API tt_status tt_run_persistence(const char* image, const char* out_dir, int flags, tt_persistence_summary* summary) {
  return guarded([&] {
    require(image, "image");
    require(out_dir, "out_dir");
    const auto run = topotex::commands::persistence(image, out_dir, (flags & TT_FLAG_PLOT) != 0,
                                                    (flags & TT_FLAG_REPRODUCIBLE) != 0);
    if (summary) {
      summary->h0_bars = static_cast<int>(run.barcode.bars_of(0).size());
      summary->h1_bars = static_cast<int>(run.barcode.bars_of(1).size());
      summary->files_written = static_cast<int>(run.written.size());
    }
  });
}

TT_API tt_status tt_run_embed(const char* manifest, const tt_config* cfg, const char* out_dir, int jobs,
                              tt_ingest_summary* summary) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_dir, "out_dir");
    const auto r = topotex::commands::embed(manifest, cfg ? cfg->value : topotex::PipelineConfig{}, out_dir, jobs);
    if (summary) {
      *summary = tt_ingest_summary{r.total, r.processed, r.skipped, r.failed, r.cache_hits,
                                   r.persistence_computations};
    }
  });
}

TT_API tt_status tt_run_train(const char* out_dir, const tt_config* cfg, const char* class_pos, const char* class_neg,
                              int flags, tt_pair_summary* summary) {
  return guarded([&] {
    require(out_dir, "out_dir");
    require(class_pos, "class_pos");
    require(class_neg, "class_neg");
    const topotex::PipelineConfig c = cfg ? cfg->value : topotex::load_dataset(out_dir).config;
    fill(summary, topotex::commands::train(out_dir, c, class_pos, class_neg, (flags & TT_FLAG_REPRODUCIBLE) != 0));
  });
}

TT_API tt_status tt_run_evaluate(const char* out_dir, const char* class_pos, const char* class_neg, int flags,
                                 tt_pair_summary* summary) {
  return guarded([&] {
    require(out_dir, "out_dir");
    require(class_pos, "class_pos");
    require(class_neg, "class_neg");
    fill(summary, topotex::commands::evaluate(out_dir, class_pos, class_neg, (flags & TT_FLAG_REPRODUCIBLE) != 0));
  });
}

TT_API tt_status tt_run_interpret(const char* out_dir, const char* class_pos, const char* class_neg, int flags,
                                  tt_interpret_summary* summary) {
  return guarded([&] {
    require(out_dir, "out_dir");
    require(class_pos, "class_pos");
    require(class_neg, "class_neg");
    const auto run =
        topotex::commands::interpret(out_dir, class_pos, class_neg, (flags & TT_FLAG_REPRODUCIBLE) != 0);
    if (summary) {
      summary->panels = static_cast<int>(run.panels.size());
      summary->side_checks_passed = run.side_checks_passed ? 1 : 0;
    }
  });
}

TT_API tt_status tt_synthesize(const char* dir, int per_class, uint64_t seed) {
  return guarded([&] {
    require(dir, "dir");
    if (per_class < 1) throw topotex::UsageError("per_class must be positive");
    topotex::synthetic::write_dataset(dir, per_class, seed);
  });
}

}  // extern "C"
