// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rerank/chat.hpp"

#include <mutex>
#include <sstream>
#include <thread>

#include "common/digest.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"

namespace dbrouter {

HttpChatClient::HttpChatClient(std::string model, double temperature, std::shared_ptr<HttpTransport> transport,
                               RetryPolicy retry)
    : model_(std::move(model)), temperature_(temperature), transport_(std::move(transport)), retry_(retry) {
  if (!transport_) throw Error(ErrorCode::kInvalidArgument, "chat client needs a transport");
}

std::string HttpChatClient::complete(const std::string& prompt) {
  const nlohmann::json request{{"model", model_},
                               {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
                               {"temperature", temperature_}};
  const std::string body = request.dump();
  std::string last_error = "no attempt made";
  auto backoff = retry_.initial_backoff;
  for (int attempt = 0; attempt < std::max(1, retry_.attempts); ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    const auto res = transport_->post_json("/v1/chat/completions", body);
    if (res.status == 0 || res.status >= 500) {
      last_error = res.status == 0 ? "transport: " + res.body : "HTTP " + std::to_string(res.status);
      continue;
    }
    if (res.status != 200) {
      throw Error(ErrorCode::kTransport, "chat endpoint HTTP " + std::to_string(res.status) + ": " + res.body);
    }
    try {
      const auto reply = nlohmann::json::parse(res.body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kTransport, std::string("malformed chat response: ") + e.what());
    }
  }
  throw Error(ErrorCode::kTransport, "chat request failed after " + std::to_string(retry_.attempts) +
                                         " attempts: " + last_error);
}

std::vector<std::string> prompt_candidates(const std::string& prompt) {
  std::vector<std::string> out;
  std::istringstream in(prompt);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("Database ", 0) != 0 || line.rfind("Database schema:", 0) == 0) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    out.push_back(line.substr(colon + 2));
  }
  return out;
}

std::string MockChatClient::complete(const std::string& prompt) {
  if (script_) return script_(prompt);
  auto names = prompt_candidates(prompt);
  if (names.size() > 3) names.resize(3);
  return "<" + join(names, ",") + ">";
}

ReplayChatClient::ReplayChatClient(const std::filesystem::path& path) {
  try {
    for (const auto& rec : nlohmann::json::parse(read_file(path.string()))) {
      by_digest_[rec.at("prompt_digest").get<std::string>()] = rec.at("response").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": bad replay file: " + e.what());
  }
}

std::string ReplayChatClient::complete(const std::string& prompt) {
  const auto digest = sha256_hex(prompt);
  auto it = by_digest_.find(digest);
  if (it == by_digest_.end()) throw Error(ErrorCode::kNotFound, "no recorded reply for prompt " + digest);
  return it->second;
}

RecordingChatClient::RecordingChatClient(std::shared_ptr<ChatClient> inner, std::filesystem::path path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

std::string RecordingChatClient::complete(const std::string& prompt) {
  std::string reply = inner_->complete(prompt);
  std::lock_guard lock(mu_);
  recorded_[sha256_hex(prompt)] = reply;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [digest, response] : recorded_) arr.push_back({{"prompt_digest", digest}, {"response", response}});
  write_file(path_.string(), arr.dump(2) + "\n");
  return reply;
}

}  // namespace dbrouter
