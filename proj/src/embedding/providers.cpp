// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "embedding/providers.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <string_view>
#include <thread>

#include "common/digest.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "httplib.h"
#include "json.hpp"

namespace dbrouter {

namespace {

// Function words and DDL keywords carry no routing signal for the
// bag-of-words test provider.
constexpr std::array<std::string_view, 52> kStopWords{
    "a",     "an",     "the",    "of",      "in",     "on",     "for",    "to",    "and",
    "or",    "is",     "are",    "was",     "were",   "be",     "by",     "with",  "from",
    "what",  "which",  "who",    "how",     "many",   "much",   "list",   "show",  "find",
    "give",  "return", "all",    "each",    "that",   "this",   "their",  "its",   "do",
    "does",  "did",    "have",   "has",     "create", "table",  "text",   "integer",
    "real",  "date",   "primary", "foreign", "key",   "number", "me",     "there"};

bool is_stop_word(std::string_view w) {
  for (auto s : kStopWords) {
    if (s == w) return true;
  }
  return false;
}

std::vector<std::string> content_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() > 3 && cur.back() == 's') cur.pop_back();  // crude plural folding
    if (!cur.empty() && !is_stop_word(cur)) out.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace

DeterministicProvider::DeterministicProvider(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be >= 1");
}

std::string DeterministicProvider::identity() const {
  return "deterministic-test:dim=" + std::to_string(dim_) + ":seed=" + std::to_string(seed_);
}

std::vector<float> DeterministicProvider::embed_one(const std::string& text) const {
  std::vector<double> acc(dim_, 0.0);
  auto add = [&](std::string_view key, double weight) {
    Rng rng(derive_seed(seed_, fnv1a64(key)));
    for (auto& v : acc) v += weight * rng.normal();
  };
  for (const auto& w : content_words(text)) add(w, 1.0);
  // A small text-specific component keeps distinct texts distinct and
  // guarantees a non-zero vector for stop-word-only input.
  add(std::string("\x01text:") + text, 0.15);
  double norm = 0.0;
  for (double v : acc) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<float> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = static_cast<float>(acc[i] / norm);
  return out;
}

std::vector<std::vector<float>> DeterministicProvider::embed(std::span<const std::string> texts) {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  HttplibTransport(std::string base_url, std::chrono::milliseconds timeout) {
    // Split "http://host:port/prefix" into client address and path prefix.
    const auto scheme = base_url.find("://");
    const auto path_start = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start != std::string::npos) {
      prefix_ = base_url.substr(path_start);
      base_url.resize(path_start);
    }
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    client_ = std::make_unique<httplib::Client>(base_url);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client_->set_connection_timeout(secs.count(), usecs.count());
    client_->set_read_timeout(secs.count(), usecs.count());
    client_->set_write_timeout(secs.count(), usecs.count());
  }

  HttpResponse post_json(const std::string& path, const std::string& body) override {
    std::lock_guard lock(mu_);
    auto res = client_->Post(prefix_ + path, body, "application/json");
    if (!res) return {0, httplib::to_string(res.error())};
    return {res->status, res->body};
  }

 private:
  std::mutex mu_;
  std::unique_ptr<httplib::Client> client_;
  std::string prefix_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url,
                                                   std::chrono::milliseconds timeout) {
  return std::make_unique<HttplibTransport>(base_url, timeout);
}

RemoteProvider::RemoteProvider(std::string endpoint, std::string model,
                               std::shared_ptr<HttpTransport> transport, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), transport_(std::move(transport)), retry_(retry) {
  if (!transport_) throw Error(ErrorCode::kInvalidArgument, "remote provider needs a transport");
}

std::string RemoteProvider::identity() const { return "remote:" + endpoint_ + ":" + model_; }

std::vector<std::vector<float>> RemoteProvider::embed(std::span<const std::string> texts) {
  const nlohmann::json request{{"model", model_}, {"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  const std::string body = request.dump();

  std::string last_error = "no attempt made";
  auto backoff = retry_.initial_backoff;
  for (int attempt = 0; attempt < std::max(1, retry_.attempts); ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    const HttpResponse res = transport_->post_json("/v1/embed", body);
    if (res.status == 0 || res.status >= 500) {
      last_error = res.status == 0 ? "transport: " + res.body : "HTTP " + std::to_string(res.status);
      continue;
    }
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res.body);
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kTransport, "embedding endpoint returned malformed JSON");
    }
    if (res.status != 200) {
      throw Error(ErrorCode::kTransport, "embedding endpoint HTTP " + std::to_string(res.status) + ": " +
                                             reply.value("error", std::string("unknown error")));
    }
    try {
      const auto dim = reply.at("dim").get<std::size_t>();
      auto vectors = reply.at("vectors").get<std::vector<std::vector<float>>>();
      if (vectors.size() != texts.size()) {
        throw Error(ErrorCode::kTransport, "embedding endpoint returned " + std::to_string(vectors.size()) +
                                               " vectors for " + std::to_string(texts.size()) + " texts");
      }
      for (const auto& v : vectors) {
        if (v.size() != dim) throw Error(ErrorCode::kTransport, "embedding dimension mismatch within a batch");
      }
      return vectors;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kTransport, std::string("malformed embedding response: ") + e.what());
    }
  }
  throw Error(ErrorCode::kTransport, "embedding request failed after " + std::to_string(retry_.attempts) +
                                         " attempts: " + last_error);
}

TableProvider::TableProvider(std::string name, std::vector<std::pair<std::string, std::vector<float>>> rows)
    : name_(std::move(name)), rows_(std::move(rows)) {}

std::vector<std::vector<float>> TableProvider::embed(std::span<const std::string> texts) {
  std::vector<std::vector<float>> out;
  for (const auto& t : texts) {
    auto it = std::find_if(rows_.begin(), rows_.end(), [&](const auto& r) { return r.first == t; });
    if (it == rows_.end()) throw Error(ErrorCode::kNotFound, "no embedding for text '" + t + "'");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace dbrouter
