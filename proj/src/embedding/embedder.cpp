// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "embedding/embedder.hpp"

#include <future>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "common/error.hpp"
#include "embedding/truncate.hpp"

namespace dbrouter {

void ProviderConfig::validate() const {
  if (token_budget < 1) throw Error(ErrorCode::kInvalidArgument, "token_budget must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (max_in_flight < 1) throw Error(ErrorCode::kInvalidArgument, "max_in_flight must be >= 1");
  if (kind == ProviderKind::kRemote && endpoint.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "remote provider requires an endpoint (DBROUTER_EMBED_URL)");
  }
  if (kind == ProviderKind::kDeterministicTest && dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "deterministic provider dim must be >= 1");
  }
}

ProviderKind parse_provider_kind(const std::string& s) {
  if (s == "remote") return ProviderKind::kRemote;
  if (s == "deterministic-test" || s == "deterministic") return ProviderKind::kDeterministicTest;
  throw Error(ErrorCode::kInvalidArgument, "unknown provider kind '" + s + "'");
}

std::string to_string(ProviderKind k) {
  return k == ProviderKind::kRemote ? "remote" : "deterministic-test";
}

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& cfg) {
  cfg.validate();
  if (cfg.kind == ProviderKind::kDeterministicTest) {
    return std::make_unique<DeterministicProvider>(cfg.dim, cfg.seed);
  }
  std::shared_ptr<HttpTransport> transport = make_http_transport(cfg.endpoint, cfg.timeout);
  return std::make_unique<RemoteProvider>(cfg.endpoint, cfg.model, std::move(transport),
                                          RetryPolicy{cfg.retries, std::chrono::milliseconds(200)});
}

Embedder::Embedder(std::shared_ptr<EmbeddingProvider> provider, ProviderConfig cfg)
    : provider_(std::move(provider)), cfg_(std::move(cfg)) {
  if (!provider_) throw Error(ErrorCode::kInvalidArgument, "embedder needs a provider");
  cfg_.validate();
  identity_ = provider_->identity() + ":budget=" + std::to_string(cfg_.token_budget);
  cache_ = cfg_.cache_dir.empty() ? std::make_unique<EmbeddingCache>()
                                  : std::make_unique<EmbeddingCache>(std::filesystem::path(cfg_.cache_dir));
}

EmbedderStats Embedder::stats() const {
  return {requested_.load(), hits_.load(), calls_.load(), truncated_.load()};
}

EmbeddingVector Embedder::embed(const std::string& text) {
  return std::move(embed_batch(std::span<const std::string>(&text, 1)).front());
}

std::vector<EmbeddingVector> Embedder::embed_batch(std::span<const std::string> texts) {
  if (texts.empty()) throw Error(ErrorCode::kInvalidArgument, "embed_batch needs at least one text");
  requested_ += texts.size();

  std::vector<std::string> keys(texts.size());
  std::vector<std::optional<std::vector<float>>> found(texts.size());
  // Distinct missing texts (after truncation) -> positions needing them.
  std::vector<std::string> miss_texts;
  std::vector<std::string> miss_keys;
  std::unordered_map<std::string, std::size_t> miss_index;

  for (std::size_t i = 0; i < texts.size(); ++i) {
    keys[i] = EmbeddingCache::key(identity_, texts[i]);
    found[i] = cache_->get(keys[i]);
    if (found[i]) {
      ++hits_;
      continue;
    }
    if (miss_index.count(keys[i]) != 0) continue;
    std::string cut = truncate(texts[i], cfg_.token_budget);
    if (cut.size() != texts[i].size()) {
      ++truncated_;
      spdlog::debug("truncated text {} from {} to {} proxy tokens", keys[i].substr(0, 12),
                    proxy_token_count(texts[i]), proxy_token_count(cut));
    }
    miss_index.emplace(keys[i], miss_texts.size());
    miss_texts.push_back(std::move(cut));
    miss_keys.push_back(keys[i]);
  }

  if (!miss_texts.empty()) {
    std::vector<std::vector<float>> fresh(miss_texts.size());
    const std::size_t bs = cfg_.batch_size;
    std::vector<std::pair<std::size_t, std::size_t>> chunks;
    for (std::size_t b = 0; b < miss_texts.size(); b += bs) chunks.emplace_back(b, std::min(b + bs, miss_texts.size()));

    auto run_chunk = [&](std::size_t c) {
      const auto [b, e] = chunks[c];
      ++calls_;
      auto out = provider_->embed(std::span<const std::string>(miss_texts).subspan(b, e - b));
      if (out.size() != e - b) throw Error(ErrorCode::kTransport, "provider returned wrong vector count");
      for (std::size_t i = b; i < e; ++i) fresh[i] = std::move(out[i - b]);
    };

    if (chunks.size() == 1 || cfg_.max_in_flight == 1) {
      for (std::size_t c = 0; c < chunks.size(); ++c) run_chunk(c);
    } else {
      for (std::size_t w = 0; w < chunks.size(); w += cfg_.max_in_flight) {
        std::vector<std::future<void>> inflight;
        const std::size_t end = std::min(w + cfg_.max_in_flight, chunks.size());
        for (std::size_t c = w; c < end; ++c) inflight.push_back(std::async(std::launch::async, run_chunk, c));
        for (auto& f : inflight) f.get();
      }
    }

    for (std::size_t i = 0; i < fresh.size(); ++i) {
      fresh[i] = normalized(fresh[i]).values;
      const auto& v = fresh[i];
      std::size_t expected = 0;
      if (!dim_.compare_exchange_strong(expected, v.size()) && expected != v.size()) {
        throw Error(ErrorCode::kIntegrity, "embedding dimension mismatch: got " + std::to_string(v.size()) +
                                               ", expected " + std::to_string(expected));
      }
      cache_->put(miss_keys[i], v);
    }
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (!found[i]) found[i] = fresh[miss_index.at(keys[i])];
    }
  }

  std::vector<EmbeddingVector> result;
  result.reserve(texts.size());
  const std::size_t d0 = found.front()->size();
  for (auto& f : found) {
    if (f->size() != d0) throw Error(ErrorCode::kIntegrity, "embedding dimension mismatch across a batch");
    result.push_back(EmbeddingVector{std::move(*f), true});
  }
  return result;
}

}  // namespace dbrouter
