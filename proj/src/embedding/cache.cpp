// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "embedding/cache.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "common/digest.hpp"
#include "common/error.hpp"

namespace dbrouter {

namespace {

// Record: 64 hex key chars, u32 dim (LE), dim float32 (LE).
constexpr std::size_t kKeyLen = 64;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

EmbeddingCache::EmbeddingCache(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create cache dir " + dir.string() + ": " + ec.message());
  const auto path = dir / "embeddings.bin";
  load(path);
  file_ = std::fopen(path.string().c_str(), "ab");
  if (file_ == nullptr) throw Error(ErrorCode::kIo, "cannot open cache file " + path.string());
}

EmbeddingCache::~EmbeddingCache() {
  if (file_ != nullptr) std::fclose(file_);
}

std::string EmbeddingCache::key(const std::string& identity, const std::string& text) {
  std::string buf = identity;
  buf.push_back('\0');
  buf += text;
  return sha256_hex(buf);
}

void EmbeddingCache::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  std::size_t off = 0;
  while (off + kKeyLen + 4 <= data.size()) {
    std::string k(data.data() + off, kKeyLen);
    const std::uint32_t dim = get_u32(p + off + kKeyLen);
    const std::size_t need = kKeyLen + 4 + static_cast<std::size_t>(dim) * 4;
    if (off + need > data.size()) break;  // torn tail from an interrupted write
    std::vector<float> v(dim);
    for (std::uint32_t i = 0; i < dim; ++i) {
      const std::uint32_t bits = get_u32(p + off + kKeyLen + 4 + 4 * i);
      std::memcpy(&v[i], &bits, 4);
    }
    map_[std::move(k)] = std::move(v);
    off += need;
  }
}

std::optional<std::vector<float>> EmbeddingCache::get(const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::put(const std::string& key, const std::vector<float>& values) {
  std::unique_lock lock(mu_);
  auto [it, inserted] = map_.emplace(key, values);
  if (!inserted || file_ == nullptr) return;
  std::string rec = key;
  put_u32(rec, static_cast<std::uint32_t>(values.size()));
  for (float f : values) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(rec, bits);
  }
  if (std::fwrite(rec.data(), 1, rec.size(), file_) != rec.size() || std::fflush(file_) != 0) {
    throw Error(ErrorCode::kIo, "cannot append to embedding cache");
  }
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

}  // namespace dbrouter
