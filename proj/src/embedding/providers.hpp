// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dbrouter {

/// Source of raw (not necessarily normalized) embeddings.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  /// Stable identity string; part of every cache key and index header.
  virtual std::string identity() const = 0;

  /// One vector per text, same order.
  virtual std::vector<std::vector<float>> embed(std::span<const std::string> texts) = 0;
};

/// Pure seeded function of the text: a hashed bag of content words, so
/// texts sharing vocabulary land close together. Used for network-free,
/// fully reproducible runs.
class DeterministicProvider final : public EmbeddingProvider {
 public:
  explicit DeterministicProvider(std::size_t dim = 64, std::uint64_t seed = 0);

  std::string identity() const override;
  std::vector<std::vector<float>> embed(std::span<const std::string> texts) override;

  std::vector<float> embed_one(const std::string& text) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Minimal POST-JSON transport; swapped for a stub in tests.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Returns status 0 when the request could not be delivered.
  virtual HttpResponse post_json(const std::string& path, const std::string& body) = 0;
};

/// cpp-httplib client for "http://host:port[/prefix]" endpoints.
std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url,
                                                   std::chrono::milliseconds timeout);

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
};

/// Client of the embedding wire protocol:
///   POST /v1/embed {"model": m, "texts": [...]}
///   200 -> {"dim": d, "vectors": [[...], ...]}
///   otherwise {"error": "..."}
/// Transport failures and 5xx replies are retried with exponential
/// backoff; 4xx replies fail immediately.
class RemoteProvider final : public EmbeddingProvider {
 public:
  RemoteProvider(std::string endpoint, std::string model, std::shared_ptr<HttpTransport> transport,
                 RetryPolicy retry = {});

  std::string identity() const override;
  std::vector<std::vector<float>> embed(std::span<const std::string> texts) override;

 private:
  std::string endpoint_;
  std::string model_;
  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy retry_;
};

/// Fixed text -> vector table; unknown texts are an error. Lets tests
/// construct embeddings analytically.
class TableProvider final : public EmbeddingProvider {
 public:
  TableProvider(std::string name, std::vector<std::pair<std::string, std::vector<float>>> rows);

  std::string identity() const override { return "table:" + name_; }
  std::vector<std::vector<float>> embed(std::span<const std::string> texts) override;

 private:
  std::string name_;
  std::vector<std::pair<std::string, std::vector<float>>> rows_;
};

}  // namespace dbrouter
