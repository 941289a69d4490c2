// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "embedding/cache.hpp"
#include "embedding/providers.hpp"
#include "embedding/vector.hpp"

namespace dbrouter {

enum class ProviderKind { kRemote, kDeterministicTest };

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kDeterministicTest;
  std::string endpoint;  // remote only
  std::string model = "sentence-transformers/all-mpnet-base-v2";
  std::size_t token_budget = 512;
  std::size_t batch_size = 64;
  std::chrono::milliseconds timeout{30000};
  std::size_t max_in_flight = 4;
  int retries = 3;
  std::size_t dim = 64;     // deterministic-test only
  std::uint64_t seed = 0;   // deterministic-test only
  std::string cache_dir;    // empty: in-memory cache only

  void validate() const;
};

ProviderKind parse_provider_kind(const std::string& s);
std::string to_string(ProviderKind k);

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& cfg);

struct EmbedderStats {
  std::uint64_t requested = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t provider_calls = 0;
  std::uint64_t truncated = 0;
};

/// embed_batch front end: truncation, content-addressed caching, batching
/// and bounded concurrent dispatch. Thread-safe.
class Embedder {
 public:
  Embedder(std::shared_ptr<EmbeddingProvider> provider, ProviderConfig cfg);

  /// One normalized vector per text, same order, uniform dim.
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts);
  EmbeddingVector embed(const std::string& text);

  const std::string& identity() const { return identity_; }
  const ProviderConfig& config() const { return cfg_; }
  EmbedderStats stats() const;

 private:
  std::shared_ptr<EmbeddingProvider> provider_;
  ProviderConfig cfg_;
  std::string identity_;
  std::unique_ptr<EmbeddingCache> cache_;
  std::atomic<std::size_t> dim_{0};
  std::atomic<std::uint64_t> requested_{0};
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> calls_{0};
  std::atomic<std::uint64_t> truncated_{0};
};

}  // namespace dbrouter
