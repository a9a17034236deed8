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

#include "topotex/cache.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "topotex/error.hpp"

namespace topotex {

static_assert(std::endian::native == std::endian::little, "cache format assumes a little-endian host");

namespace {

constexpr char kRecordMagic[4] = {'T', 'T', 'C', '1'};
constexpr std::size_t kKeyLength = 64;

template <class T>
void put_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get_raw(std::ifstream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof v));
}

std::string to_hex(const unsigned char* digest, unsigned len) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    s.push_back(kDigits[digest[i] >> 4]);
    s.push_back(kDigits[digest[i] & 15]);
  }
  return s;
}

}  // namespace

ContentHasher::ContentHasher() : ctx_(EVP_MD_CTX_new()) {
  if (!ctx_ || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 initialisation failed");
  }
}

ContentHasher::~ContentHasher() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

ContentHasher& ContentHasher::add(std::span<const std::uint8_t> bytes) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), bytes.data(), bytes.size());
  return *this;
}

ContentHasher& ContentHasher::add(const std::string& s) {
  add_u64(s.size());
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), s.data(), s.size());
  return *this;
}

ContentHasher& ContentHasher::add_u64(std::uint64_t v) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), &v, sizeof v);
  return *this;
}

ContentHasher& ContentHasher::add_i64(std::int64_t v) { return add_u64(static_cast<std::uint64_t>(v)); }

ContentHasher& ContentHasher::add_f64(double v) { return add_u64(std::bit_cast<std::uint64_t>(v)); }

std::string ContentHasher::hex() {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), digest, &len);
  return to_hex(digest, len);
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  ContentHasher h;
  h.add(bytes);
  return h.hex();
}

EmbeddingCache::EmbeddingCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
  const auto index_path = dir_ / "index.json";
  if (!std::filesystem::exists(index_path)) return;
  std::ifstream in(index_path);
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& [key, entry] : j.at("entries").items()) index_[key] = entry.at("offset").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed cache index " + index_path.string() + ": " + e.what());
  }
}

std::optional<EmbeddingCache::Entry> EmbeddingCache::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  std::ifstream in(dir_ / "embeddings.bin", std::ios::binary);
  if (!in) return std::nullopt;
  in.seekg(static_cast<std::streamoff>(it->second));
  char magic[4];
  char stored_key[kKeyLength];
  if (!in.read(magic, 4) || std::memcmp(magic, kRecordMagic, 4) != 0) return std::nullopt;
  if (!in.read(stored_key, kKeyLength) || std::string(stored_key, kKeyLength) != key) return std::nullopt;
  Entry e;
  std::uint32_t n_corners = 0;
  if (!get_raw(in, n_corners)) return std::nullopt;
  e.corners.resize(n_corners);
  for (auto& c : e.corners) {
    std::int32_t x = 0, y = 0;
    if (!get_raw(in, x) || !get_raw(in, y)) return std::nullopt;
    c = {x, y};
  }
  std::uint64_t n_values = 0;
  if (!get_raw(in, n_values)) return std::nullopt;
  e.values.resize(n_values);
  if (!in.read(reinterpret_cast<char*>(e.values.data()), static_cast<std::streamsize>(n_values * sizeof(double)))) {
    return std::nullopt;
  }
  return e;
}

void EmbeddingCache::put(const std::string& key, const Entry& entry) {
  if (key.size() != kKeyLength) throw UsageError("cache keys are 64-character SHA-256 hex digests");
  std::lock_guard lock(mutex_);
  if (index_.count(key)) return;
  const auto path = dir_ / "embeddings.bin";
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + path.string());
  out.seekp(0, std::ios::end);
  const auto offset = static_cast<std::uint64_t>(out.tellp());
  out.write(kRecordMagic, 4);
  out.write(key.data(), kKeyLength);
  put_raw(out, static_cast<std::uint32_t>(entry.corners.size()));
  for (const auto& c : entry.corners) {
    put_raw(out, static_cast<std::int32_t>(c.x));
    put_raw(out, static_cast<std::int32_t>(c.y));
  }
  put_raw(out, static_cast<std::uint64_t>(entry.values.size()));
  out.write(reinterpret_cast<const char*>(entry.values.data()),
            static_cast<std::streamsize>(entry.values.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
  index_[key] = offset;
}

void EmbeddingCache::flush() {
  std::lock_guard lock(mutex_);
  nlohmann::ordered_json j;
  j["format"] = "topotex-embedding-cache";
  j["version"] = 1;
  j["entries"] = nlohmann::ordered_json::object();
  for (const auto& [key, offset] : index_) j["entries"][key] = {{"offset", offset}};
  const auto tmp = dir_ / "index.json.tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << j.dump(1) << "\n";
  }
  std::error_code ec;
  std::filesystem::rename(tmp, dir_ / "index.json", ec);
  if (ec) throw IoError("cannot replace cache index: " + ec.message());
}

std::size_t EmbeddingCache::size() const {
  std::lock_guard lock(mutex_);
  return index_.size();
}

}  // namespace topotex
