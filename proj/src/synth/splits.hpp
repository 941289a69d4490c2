// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "schema/corpus.hpp"

namespace dbrouter {

/// Train / in-domain test / cross-domain test partition of a corpus.
///
/// Question lists hold question ids in corpus order; database sets are
/// sorted. train_dbs doubles as the in-domain database set.
struct RoutingDataset {
  std::vector<std::string> train;
  std::vector<std::string> test_in;
  std::vector<std::string> test_out;
  std::vector<std::string> train_dbs;
  std::vector<std::string> out_dbs;

  /// In-domain databases left without a test_in question (fewer than two
  /// questions, or every question forced into train as a duplicate).
  std::vector<std::string> uncovered_dbs;
  /// Held-out questions whose normalized text also occurs in train.
  std::size_t heldout_text_overlap = 0;

  const std::vector<std::string>& in_dbs() const { return train_dbs; }
};

/// Stratified per-database sample of round-half-up(n * in_fraction)
/// questions (at least one, at most n - 1) into test_in. Questions whose
/// normalized text occurs more than once in the train partition always stay
/// in train. The held-out partition becomes test_out unchanged.
///
/// Throws kInvalidArgument for a fraction outside (0, 1), kInfeasible when
/// no database has two or more questions, and kIntegrity when the held-out
/// partition shares a database with train.
RoutingDataset make_splits(const Corpus& corpus, double in_fraction, std::uint64_t seed);

/// Number of questions a database with n questions contributes to test_in
/// before duplicate exclusion.
std::size_t in_domain_quota(std::size_t n, double in_fraction);

/// Split file: {"train": [...], "test_in": [...], "test_out": [...]}.
void write_split_file(const RoutingDataset& dataset, const std::filesystem::path& path);

/// Rebuilds a dataset (including database sets) from a split file.
RoutingDataset read_split_file(const Corpus& corpus, const std::filesystem::path& path);

/// Dataset without a split file: train partition -> train, held-out -> test_out.
RoutingDataset dataset_from_partitions(const Corpus& corpus);

}  // namespace dbrouter
