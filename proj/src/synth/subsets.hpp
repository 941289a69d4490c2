// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "schema/clusters.hpp"

namespace dbrouter {

/// Nested random subsets of `pool`: one seeded permutation, and each
/// requested size takes a prefix of it, so a larger subset always contains
/// every smaller one. Results follow the order of `sizes`; each subset is
/// sorted. Throws kInvalidArgument when a size exceeds the pool.
std::vector<std::vector<std::string>> sample_db_subsets(std::vector<std::string> pool,
                                                        std::span<const std::size_t> sizes,
                                                        std::uint64_t seed);

/// n_sets pairwise-disjoint subsets of `pool` whose cluster-size histogram
/// equals `reference_profile` (cluster sizes, any order): every set has
/// exactly one distinct pool cluster contributing s databases for each
/// reference cluster of size s. Throws kInfeasible naming the reference
/// cluster that could not be placed.
std::vector<std::vector<std::string>> sample_cluster_matched(
    const std::vector<std::string>& pool, const VerticalClusters& clusters,
    std::vector<std::size_t> reference_profile, std::size_t n_sets, std::uint64_t seed);

struct ClosestSets {
  std::vector<std::vector<std::string>> sets;
  /// Sum over sets of the L1 distance between the set's sorted cluster-size
  /// histogram and the reference (both zero-padded). 0 means exact.
  std::size_t distance = 0;
};

/// Fallback for profiles that cannot be matched exactly: n_sets disjoint
/// subsets of sum(reference_profile) databases each, chosen by seeded
/// swap-based local search to minimise the histogram distance. Throws
/// kInfeasible only when the pool is too small.
ClosestSets sample_cluster_closest(const std::vector<std::string>& pool, const VerticalClusters& clusters,
                                   std::vector<std::size_t> reference_profile, std::size_t n_sets,
                                   std::uint64_t seed);

/// L1 distance between two cluster-size histograms, zero-padded.
std::size_t profile_distance(std::vector<std::size_t> a, std::vector<std::size_t> b);

}  // namespace dbrouter
