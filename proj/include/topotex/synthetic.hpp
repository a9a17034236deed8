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

#include "topotex/image.hpp"

namespace topotex::synthetic {

/// Many small (2–4 px) bright discs scattered over dark noise.
GrayImage sugar_like(int width, int height, std::uint64_t seed);

/// A few large (20–30 px) bright blobs with darker interior dimples over dark noise.
GrayImage flowers_like(int width, int height, std::uint64_t seed);

/// Uniform noise in [lo, hi].
GrayImage noise(int width, int height, int lo, int hi, std::uint64_t seed);

/// Writes `per_class` PGM images of each family under `dir` plus a
/// manifest.jsonl with one full-image annotation per file, labelled
/// "sugar" and "flowers". Image sides are drawn from [min_side, max_side].
/// Returns the manifest path.
std::filesystem::path write_dataset(const std::filesystem::path& dir, int per_class, std::uint64_t seed,
                                    int min_side = 110, int max_side = 170);

}  // namespace topotex::synthetic
