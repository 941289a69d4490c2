// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rerank/parse.hpp"

#include <algorithm>
#include <optional>

#include "common/error.hpp"
#include "common/text.hpp"

namespace dbrouter {

namespace {

std::string clean(std::string_view raw) {
  std::string s = trim(raw);
  auto strip = [](char c) { return c == '"' || c == '\'' || c == '`' || c == '*'; };
  while (!s.empty() && strip(s.front())) s.erase(s.begin());
  while (!s.empty() && strip(s.back())) s.pop_back();
  return trim(s);
}

std::optional<std::string> resolve(const std::string& name, const std::vector<std::string>& shortlist) {
  if (name.empty()) return std::nullopt;
  for (const auto& id : shortlist) {
    if (id == name) return id;
  }
  for (const auto& id : shortlist) {
    if (iequals(id, name)) return id;
  }
  const std::string lname = to_lower(name);
  const std::string* unique = nullptr;
  for (const auto& id : shortlist) {
    const std::string lid = to_lower(id);
    if (lid.find(lname) != std::string::npos || lname.find(lid) != std::string::npos) {
      if (unique != nullptr) return std::nullopt;
      unique = &id;
    }
  }
  return unique != nullptr ? std::optional<std::string>(*unique) : std::nullopt;
}

std::vector<std::string> resolve_all(const std::vector<std::string>& names, const std::vector<std::string>& shortlist) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    auto id = resolve(clean(n), shortlist);
    if (id && std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  return out;
}

}  // namespace

std::vector<std::string> parse_ranking(std::string_view response, const std::vector<std::string>& shortlist) {
  if (shortlist.empty()) throw Error(ErrorCode::kInvalidArgument, "parse_ranking needs a non-empty shortlist");

  std::vector<std::string> parsed;
  for (std::size_t pos = response.find('<'); pos != std::string_view::npos && parsed.empty();
       pos = response.find('<', pos + 1)) {
    const auto close = response.find('>', pos + 1);
    if (close == std::string_view::npos) break;
    parsed = resolve_all(split(response.substr(pos + 1, close - pos - 1), ','), shortlist);
  }
  if (parsed.empty()) {
    std::string flat(response);
    std::replace(flat.begin(), flat.end(), '\n', ',');
    parsed = resolve_all(split(flat, ','), shortlist);
  }
  if (parsed.empty()) throw Error(ErrorCode::kParse, "no database name resolved in reply: " + std::string(response));

  const std::size_t want = std::min<std::size_t>(3, shortlist.size());
  for (const auto& id : shortlist) {
    if (parsed.size() >= want) break;
    if (std::find(parsed.begin(), parsed.end(), id) == parsed.end()) parsed.push_back(id);
  }
  parsed.resize(std::min(parsed.size(), want));
  return parsed;
}

}  // namespace dbrouter
