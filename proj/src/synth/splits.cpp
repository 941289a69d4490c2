// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "synth/splits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"
#include "json.hpp"

namespace dbrouter {

namespace {

std::vector<std::string> sorted_dbs(const Corpus& corpus, const std::vector<std::string>& qids) {
  std::set<std::string> dbs;
  for (const auto& q : qids) dbs.insert(corpus.sample(q).gold_db_id);
  return {dbs.begin(), dbs.end()};
}

void fill_db_sets(const Corpus& corpus, RoutingDataset& ds) {
  std::set<std::string> train;
  for (const auto& q : ds.train) train.insert(corpus.sample(q).gold_db_id);
  for (const auto& q : ds.test_in) train.insert(corpus.sample(q).gold_db_id);
  ds.train_dbs.assign(train.begin(), train.end());
  ds.out_dbs = sorted_dbs(corpus, ds.test_out);
  for (const auto& db : ds.out_dbs) {
    if (train.contains(db)) {
      throw Error(ErrorCode::kIntegrity,
                  "held-out partition shares database '" + db + "' with train");
    }
  }
  std::set<std::string> train_texts;
  for (const auto& q : ds.train) train_texts.insert(normalize_question(corpus.sample(q).text));
  ds.heldout_text_overlap = static_cast<std::size_t>(
      std::count_if(ds.test_out.begin(), ds.test_out.end(), [&](const std::string& q) {
        return train_texts.contains(normalize_question(corpus.sample(q).text));
      }));
}

}  // namespace

std::size_t in_domain_quota(std::size_t n, double in_fraction) {
  if (n < 2) return 0;
  // Round half up; the epsilon absorbs binary representation error in
  // products such as 25 * 0.1 that are meant to be exact.
  auto quota = static_cast<std::size_t>(std::floor(static_cast<double>(n) * in_fraction + 0.5 + 1e-9));
  return std::clamp<std::size_t>(quota, 1, n - 1);
}

RoutingDataset make_splits(const Corpus& corpus, double in_fraction, std::uint64_t seed) {
  if (!(in_fraction > 0.0 && in_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "in_fraction must lie in (0, 1)");
  }

  std::map<std::string, std::vector<const RoutingSample*>> by_db;
  std::map<std::string, std::size_t> text_count;
  for (const auto& s : corpus.samples()) {
    if (s.partition != Partition::kTrain) continue;
    by_db[s.gold_db_id].push_back(&s);
    ++text_count[normalize_question(s.text)];
  }
  if (by_db.empty()) throw Error(ErrorCode::kInfeasible, "corpus has no train-partition questions");
  if (std::all_of(by_db.begin(), by_db.end(), [](const auto& kv) { return kv.second.size() < 2; })) {
    throw Error(ErrorCode::kInfeasible,
                "every database has a single question; no in-domain test set can be drawn");
  }

  RoutingDataset ds;
  std::set<std::string> held_in;
  Rng rng(seed);
  for (const auto& [db, questions] : by_db) {
    std::vector<const RoutingSample*> eligible;
    for (const auto* s : questions) {
      if (text_count[normalize_question(s->text)] == 1) eligible.push_back(s);
    }
    const std::size_t take = std::min(in_domain_quota(questions.size(), in_fraction), eligible.size());
    if (take == 0) {
      ds.uncovered_dbs.push_back(db);
      continue;
    }
    for (std::size_t idx : rng.sample_indices(eligible.size(), take)) {
      held_in.insert(eligible[idx]->question_id);
    }
  }

  for (const auto& s : corpus.samples()) {
    if (s.partition == Partition::kHeldOut) {
      ds.test_out.push_back(s.question_id);
    } else if (held_in.contains(s.question_id)) {
      ds.test_in.push_back(s.question_id);
    } else {
      ds.train.push_back(s.question_id);
    }
  }
  fill_db_sets(corpus, ds);
  return ds;
}

void write_split_file(const RoutingDataset& dataset, const std::filesystem::path& path) {
  nlohmann::json j{{"train", dataset.train}, {"test_in", dataset.test_in}, {"test_out", dataset.test_out}};
  write_file(path.string(), j.dump(1) + "\n");
}

RoutingDataset read_split_file(const Corpus& corpus, const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path.string()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  RoutingDataset ds;
  try {
    ds.train = j.at("train").get<std::vector<std::string>>();
    ds.test_in = j.at("test_in").get<std::vector<std::string>>();
    ds.test_out = j.at("test_out").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  for (const auto* list : {&ds.train, &ds.test_in, &ds.test_out}) {
    for (const auto& q : *list) corpus.sample(q);  // referential check
  }
  fill_db_sets(corpus, ds);
  std::set<std::string> covered;
  for (const auto& q : ds.test_in) covered.insert(corpus.sample(q).gold_db_id);
  for (const auto& db : ds.train_dbs) {
    if (!covered.contains(db)) ds.uncovered_dbs.push_back(db);
  }
  return ds;
}

RoutingDataset dataset_from_partitions(const Corpus& corpus) {
  RoutingDataset ds;
  for (const auto& s : corpus.samples()) {
    (s.partition == Partition::kTrain ? ds.train : ds.test_out).push_back(s.question_id);
  }
  fill_db_sets(corpus, ds);
  ds.uncovered_dbs = ds.train_dbs;
  return ds;
}

}  // namespace dbrouter
