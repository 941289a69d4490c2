// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "schema/clusters.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"

namespace dbrouter {

VerticalClusters VerticalClusters::load(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path.string()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, path.string() + ": expected {db_id: cluster_id}");
  std::map<std::string, std::string> m;
  for (const auto& [db, cluster] : j.items()) {
    if (!cluster.is_string()) {
      throw Error(ErrorCode::kParse, path.string() + ": cluster of '" + db + "' is not a string");
    }
    m.emplace(db, cluster.get<std::string>());
  }
  return VerticalClusters(std::move(m));
}

std::optional<std::string> VerticalClusters::cluster_of(const std::string& db_id) const {
  auto it = map_.find(db_id);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

const std::string& VerticalClusters::at(const std::string& db_id) const {
  auto it = map_.find(db_id);
  if (it == map_.end()) throw Error(ErrorCode::kNotFound, "database '" + db_id + "' has no cluster");
  return it->second;
}

std::map<std::string, std::vector<std::string>> VerticalClusters::groups(
    const std::vector<std::string>& scope) const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& db : scope) out[at(db)].push_back(db);
  for (auto& [c, members] : out) std::sort(members.begin(), members.end());
  return out;
}

std::vector<std::size_t> VerticalClusters::size_profile(const std::vector<std::string>& scope) const {
  std::vector<std::size_t> sizes;
  for (const auto& [c, members] : groups(scope)) sizes.push_back(members.size());
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

bool VerticalClusters::all_singletons(const std::vector<std::string>& scope) const {
  for (const auto& [c, members] : groups(scope)) {
    if (members.size() > 1) return false;
  }
  return true;
}

}  // namespace dbrouter
