// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "embedding/providers.hpp"

namespace dbrouter {

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

/// POST /v1/chat/completions with {model, messages:[{role:"user",
/// content}], temperature}; returns choices[0].message.content. Transport
/// failures and 5xx replies are retried with backoff.
class HttpChatClient final : public ChatClient {
 public:
  HttpChatClient(std::string model, double temperature, std::shared_ptr<HttpTransport> transport,
                 RetryPolicy retry = {});
  std::string complete(const std::string& prompt) override;

 private:
  std::string model_;
  double temperature_;
  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy retry_;
};

/// Network-free stand-in. By default replies with the prompt's own
/// candidate order, i.e. the embedding order.
class MockChatClient final : public ChatClient {
 public:
  using Script = std::function<std::string(const std::string& prompt)>;
  MockChatClient() = default;
  explicit MockChatClient(Script script) : script_(std::move(script)) {}
  std::string complete(const std::string& prompt) override;

 private:
  Script script_;
};

/// Candidate names in prompt enumeration order.
std::vector<std::string> prompt_candidates(const std::string& prompt);

/// Serves recorded replies keyed by sha256(prompt). File: JSON array of
/// {"prompt_digest", "response"}. Unknown prompts raise kNotFound.
class ReplayChatClient final : public ChatClient {
 public:
  explicit ReplayChatClient(const std::filesystem::path& path);
  explicit ReplayChatClient(std::map<std::string, std::string> by_digest) : by_digest_(std::move(by_digest)) {}
  std::string complete(const std::string& prompt) override;

 private:
  std::map<std::string, std::string> by_digest_;
};

/// Wraps another client and appends every exchange to a replay file.
class RecordingChatClient final : public ChatClient {
 public:
  RecordingChatClient(std::shared_ptr<ChatClient> inner, std::filesystem::path path);
  std::string complete(const std::string& prompt) override;

 private:
  std::shared_ptr<ChatClient> inner_;
  std::filesystem::path path_;
  std::mutex mu_;
  std::map<std::string, std::string> recorded_;
};

}  // namespace dbrouter
