// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace dbrouter {

/// Content-addressed vector store keyed by sha256(provider identity, text).
/// Optionally backed by an append-only file `<dir>/embeddings.bin` that is
/// replayed on open. Concurrent readers, serialized writers.
class EmbeddingCache {
 public:
  EmbeddingCache() = default;
  explicit EmbeddingCache(const std::filesystem::path& dir);
  ~EmbeddingCache();

  EmbeddingCache(const EmbeddingCache&) = delete;
  EmbeddingCache& operator=(const EmbeddingCache&) = delete;

  static std::string key(const std::string& identity, const std::string& text);

  std::optional<std::vector<float>> get(const std::string& key) const;
  void put(const std::string& key, const std::vector<float>& values);

  std::size_t size() const;
  bool persistent() const { return file_ != nullptr; }

 private:
  void load(const std::filesystem::path& path);

  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::vector<float>> map_;
  std::FILE* file_ = nullptr;
};

}  // namespace dbrouter
