// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dbrouter {

/// Vertical (domain) cluster label per database.
class VerticalClusters {
 public:
  VerticalClusters() = default;
  explicit VerticalClusters(std::map<std::string, std::string> mapping) : map_(std::move(mapping)) {}

  /// JSON object {db_id: cluster_id}.
  static VerticalClusters load(const std::filesystem::path& path);

  std::optional<std::string> cluster_of(const std::string& db_id) const;
  const std::string& at(const std::string& db_id) const;  // throws kNotFound
  bool contains(const std::string& db_id) const { return map_.contains(db_id); }
  const std::map<std::string, std::string>& mapping() const { return map_; }
  bool empty() const { return map_.empty(); }

  /// cluster -> members (sorted), restricted to `scope`.
  std::map<std::string, std::vector<std::string>> groups(const std::vector<std::string>& scope) const;

  /// Cluster sizes over `scope`, largest first.
  std::vector<std::size_t> size_profile(const std::vector<std::string>& scope) const;

  /// True when every database of `scope` sits in its own cluster.
  bool all_singletons(const std::vector<std::string>& scope) const;

 private:
  std::map<std::string, std::string> map_;
};

}  // namespace dbrouter
