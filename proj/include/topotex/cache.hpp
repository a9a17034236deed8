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
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topotex/image.hpp"

namespace topotex {

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::span<const std::uint8_t> bytes);

/// Incremental SHA-256 builder for composite keys.
class ContentHasher {
 public:
  ContentHasher();
  ~ContentHasher();
  ContentHasher(const ContentHasher&) = delete;
  ContentHasher& operator=(const ContentHasher&) = delete;

  ContentHasher& add(std::span<const std::uint8_t> bytes);
  ContentHasher& add(const std::string& s);
  ContentHasher& add_u64(std::uint64_t v);
  ContentHasher& add_i64(std::int64_t v);
  ContentHasher& add_f64(double v);
  std::string hex();

 private:
  void* ctx_;
};

/// Embeddings keyed by content hash. Records live in one append-only
/// binary file (embeddings.bin); index.json maps keys to byte offsets.
/// Lookups and appends are serialized internally.
class EmbeddingCache {
 public:
  struct Entry {
    std::vector<PatchCorner> corners;
    std::vector<double> values;
  };

  explicit EmbeddingCache(std::filesystem::path dir);

  std::optional<Entry> lookup(const std::string& key) const;
  void put(const std::string& key, const Entry& entry);
  /// Rewrites index.json atomically.
  void flush();
  std::size_t size() const;

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::uint64_t> index_;
  mutable std::mutex mutex_;
};

}  // namespace topotex
