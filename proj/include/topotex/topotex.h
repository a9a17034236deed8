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

#ifndef TOPOTEX_TOPOTEX_H
#define TOPOTEX_TOPOTEX_H

#include <stddef.h>
#include <stdint.h>

#if defined(TOPOTEX_BUILDING_LIBRARY)
#define TT_API __attribute__((visibility("default")))
#else
#define TT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Numeric values of DOMAIN and IO match the CLI exit codes. */
typedef enum tt_status {
  TT_OK = 0,
  TT_ERR_DOMAIN = 1,   /* bad data */
  TT_ERR_IO = 2,       /* unreadable or malformed files */
  TT_ERR_USAGE = 3,    /* invalid arguments, missing prerequisites */
  TT_ERR_INTERNAL = 4
} tt_status;

enum {
  TT_FLAG_PLOT = 1,
  TT_FLAG_REPRODUCIBLE = 2
};

/* Message for the most recent failure on the calling thread; "" if none. */
TT_API const char* tt_last_error(void);
TT_API const char* tt_version(void);
/* Frees strings returned through char** out-parameters. */
TT_API void tt_string_free(char* s);

/* ---- images ---- */
typedef struct tt_image tt_image;

/* 8-bit PNG (gray or RGB) or binary PGM. */
TT_API tt_status tt_image_load(const char* path, tt_image** out);
TT_API tt_status tt_image_from_pixels(int width, int height, const uint8_t* pixels, tt_image** out);
TT_API int tt_image_width(const tt_image* img);
TT_API int tt_image_height(const tt_image* img);
TT_API void tt_image_free(tt_image* img);

/* ---- barcodes ---- */
typedef struct tt_barcode tt_barcode;

typedef struct tt_bar {
  int dim;
  int birth;     /* intensity */
  int death;     /* intensity, meaningless when infinite != 0 */
  int infinite;
} tt_bar;

/* Superlevelset persistence of the image. */
TT_API tt_status tt_barcode_compute(const tt_image* img, tt_barcode** out);
TT_API size_t tt_barcode_size(const tt_barcode* bc);
TT_API tt_status tt_barcode_bar(const tt_barcode* bc, size_t index, tt_bar* out);
TT_API tt_status tt_barcode_betti(const tt_barcode* bc, int cutoff, int* b0, int* b1);
TT_API tt_status tt_barcode_to_json(const tt_barcode* bc, char** out);
TT_API void tt_barcode_free(tt_barcode* bc);

/* Landscape embedding with the default shape (k = 5, 200 samples over
 * [0, 255]); writes 2000 doubles. `capacity` is the length of `out`. */
TT_API size_t tt_embedding_dimension(void);
TT_API tt_status tt_barcode_embed(const tt_barcode* bc, double* out, size_t capacity);

/* ---- pipeline configuration ---- */
typedef struct tt_config tt_config;

TT_API tt_status tt_config_default(tt_config** out);
TT_API tt_status tt_config_load(const char* path, tt_config** out);
/* The configuration stored by a previous embed run in `out_dir`. */
TT_API tt_status tt_config_from_dataset(const char* out_dir, tt_config** out);
TT_API void tt_config_set_seed(tt_config* cfg, uint64_t seed);
TT_API uint64_t tt_config_seed(const tt_config* cfg);
TT_API tt_status tt_config_to_json(const tt_config* cfg, char** out);
TT_API void tt_config_free(tt_config* cfg);

/* ---- workflows ---- */
typedef struct tt_persistence_summary {
  int h0_bars;
  int h1_bars;
  int files_written;
} tt_persistence_summary;

typedef struct tt_ingest_summary {
  int total;
  int processed;
  int skipped;
  int failed;
  int cache_hits;
  long persistence_computations;
} tt_ingest_summary;

typedef struct tt_pair_summary {
  double accuracy;
  char accuracy_text[16]; /* "89.25%" */
  int total;
  int correct;
  int confusion[2][2];    /* [actual][predicted], 0 = first class of the pair */
  int n_train;
  int n_test;
  double explained_variance_ratio[3];
} tt_pair_summary;

typedef struct tt_interpret_summary {
  int panels;
  int side_checks_passed;
} tt_interpret_summary;

/* Summary pointers may be NULL. */
TT_API tt_status tt_run_persistence(const char* image, const char* out_dir, int flags, tt_persistence_summary* summary);
TT_API tt_status tt_run_embed(const char* manifest, const tt_config* cfg, const char* out_dir, int jobs,
                              tt_ingest_summary* summary);
/* cfg NULL: use the configuration stored by embed. */
TT_API tt_status tt_run_train(const char* out_dir, const tt_config* cfg, const char* class_pos, const char* class_neg,
                              int flags, tt_pair_summary* summary);
TT_API tt_status tt_run_evaluate(const char* out_dir, const char* class_pos, const char* class_neg, int flags,
                                 tt_pair_summary* summary);
TT_API tt_status tt_run_interpret(const char* out_dir, const char* class_pos, const char* class_neg, int flags,
                                  tt_interpret_summary* summary);

/* Writes a labelled sugar-like / flowers-like PGM corpus and its manifest
 * (<dir>/manifest.jsonl). */
TT_API tt_status tt_synthesize(const char* dir, int per_class, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif
