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

/* Exercises the shared library through its C header only. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "topotex/topotex.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_ring(void) {
  const uint8_t px[9] = {200, 200, 200, 200, 50, 200, 200, 200, 200};
  tt_image* img = NULL;
  tt_barcode* bc = NULL;
  tt_bar bar;
  int b0 = -1, b1 = -1;
  char* json = NULL;
  double* emb;
  size_t i, nonzero = 0;

  EXPECT(tt_image_from_pixels(3, 3, px, &img) == TT_OK);
  EXPECT(tt_image_width(img) == 3);
  EXPECT(tt_barcode_compute(img, &bc) == TT_OK);
  EXPECT(tt_barcode_size(bc) == 2);
  EXPECT(tt_barcode_bar(bc, 0, &bar) == TT_OK);
  EXPECT(bar.dim == 0 && bar.birth == 200 && bar.infinite);
  EXPECT(tt_barcode_bar(bc, 1, &bar) == TT_OK);
  EXPECT(bar.dim == 1 && bar.birth == 200 && bar.death == 50 && !bar.infinite);
  EXPECT(tt_barcode_bar(bc, 2, &bar) == TT_ERR_USAGE);
  EXPECT(strlen(tt_last_error()) > 0);
  EXPECT(tt_barcode_betti(bc, 120, &b0, &b1) == TT_OK);
  EXPECT(b0 == 1 && b1 == 1);
  EXPECT(tt_barcode_to_json(bc, &json) == TT_OK);
  EXPECT(json != NULL && strstr(json, "\"death\": null") != NULL);
  tt_string_free(json);

  EXPECT(tt_embedding_dimension() == 2000);
  emb = malloc(2000 * sizeof(double));
  EXPECT(tt_barcode_embed(bc, emb, 1999) == TT_ERR_USAGE);
  EXPECT(tt_barcode_embed(bc, emb, 2000) == TT_OK);
  for (i = 0; i < 2000; ++i) nonzero += emb[i] != 0.0;
  EXPECT(nonzero > 0);
  for (i = 0; i < 1000; ++i) EXPECT(emb[i] == 0.0);
  free(emb);

  tt_barcode_free(bc);
  tt_image_free(img);
}

static void test_errors(void) {
  tt_image* img = NULL;
  tt_config* cfg = NULL;
  const uint8_t px[1] = {0};
  EXPECT(tt_image_load("/definitely/not/here.pgm", &img) == TT_ERR_IO);
  EXPECT(img == NULL);
  EXPECT(strstr(tt_last_error(), "here.pgm") != NULL);
  EXPECT(tt_image_from_pixels(0, 1, px, &img) == TT_ERR_USAGE);
  EXPECT(tt_image_from_pixels(1, 1, NULL, &img) == TT_ERR_USAGE);
  EXPECT(tt_config_load("/definitely/not/here.json", &cfg) == TT_ERR_IO);
  EXPECT(tt_run_evaluate("/definitely/not/here", "a", "b", 0, NULL) == TT_ERR_USAGE);
  EXPECT(tt_synthesize("/tmp", 0, 1) == TT_ERR_USAGE);
  tt_image_free(NULL);
  tt_barcode_free(NULL);
  tt_config_free(NULL);
}

static void test_config(void) {
  tt_config* cfg = NULL;
  char* json = NULL;
  EXPECT(tt_config_default(&cfg) == TT_OK);
  tt_config_set_seed(cfg, 42);
  EXPECT(tt_config_seed(cfg) == 42);
  EXPECT(tt_config_to_json(cfg, &json) == TT_OK);
  EXPECT(strstr(json, "\"seed\"") != NULL);
  tt_string_free(json);
  tt_config_free(cfg);
}

int main(void) {
  test_ring();
  test_errors();
  test_config();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed (library %s)\n", tt_version());
  return 0;
}
