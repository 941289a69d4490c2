// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "synth/pairs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "common/digest.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"
#include "synth/sql_tables.hpp"

namespace dbrouter {

std::string_view to_string(PairKind kind) {
  switch (kind) {
    case PairKind::kSchema: return "schema";
    case PairKind::kTable: return "table";
    case PairKind::kStatement: return "statement";
  }
  return "schema";
}

std::string_view to_string(NegativeClass cls) { return cls == NegativeClass::kHard ? "hard" : "soft"; }

PairKind parse_pair_kind(std::string_view s) {
  if (s == "schema") return PairKind::kSchema;
  if (s == "table") return PairKind::kTable;
  if (s == "statement") return PairKind::kStatement;
  throw Error(ErrorCode::kParse, "unknown pair kind '" + std::string(s) + "'");
}

NegativeClass parse_negative_class(std::string_view s) {
  if (s == "hard") return NegativeClass::kHard;
  if (s == "soft") return NegativeClass::kSoft;
  throw Error(ErrorCode::kParse, "unknown negative class '" + std::string(s) + "'");
}

NegativePolicy NegativePolicy::parse(std::string_view spec) {
  auto count_after = [&](std::string_view prefix) -> std::size_t {
    const std::string digits(spec.substr(prefix.size()));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "bad count in policy '" + std::string(spec) + "'");
    }
    return static_cast<std::size_t>(std::stoull(digits));
  };
  if (spec == "all") return {Kind::kAll, 0};
  if (spec == "per-db-pair") return {Kind::kPerDbPair, 1};
  if (spec.starts_with("per-db-pair:")) return {Kind::kPerDbPair, count_after("per-db-pair:")};
  if (spec.starts_with("per-question:")) return {Kind::kPerQuestion, count_after("per-question:")};
  throw Error(ErrorCode::kInvalidArgument,
              "unknown negative policy '" + std::string(spec) +
                  "' (expected all, per-question:<k>, per-db-pair[:<k>])");
}

std::string NegativePolicy::to_string() const {
  switch (kind) {
    case Kind::kAll: return "all";
    case Kind::kPerQuestion: return "per-question:" + std::to_string(count);
    case Kind::kPerDbPair: return "per-db-pair:" + std::to_string(count);
  }
  return "all";
}

namespace {

/// Per-question stream so output does not depend on iteration order.
Rng question_rng(std::uint64_t seed, std::string_view question_id) {
  return Rng(derive_seed(seed, fnv1a64(question_id)));
}

void finalize(PairSet& set) {
  std::sort(set.pairs.begin(), set.pairs.end(), [](const PairExample& a, const PairExample& b) {
    return std::make_tuple(std::string_view(a.question_id), fnv1a64(a.side_b), std::string_view(a.id)) <
           std::make_tuple(std::string_view(b.question_id), fnv1a64(b.side_b), std::string_view(b.id));
  });
  set.positives = static_cast<std::size_t>(
      std::count_if(set.pairs.begin(), set.pairs.end(), [](const auto& p) { return p.label == 1; }));
  set.negatives = set.pairs.size() - set.positives;
}

PairExample make_pair(std::string id, const RoutingSample& q, std::string side_a, std::string side_b,
                      int label, PairKind kind, std::optional<NegativeClass> cls = std::nullopt) {
  PairExample p;
  p.id = std::move(id);
  p.side_a = std::move(side_a);
  p.side_b = std::move(side_b);
  p.label = label;
  p.kind = kind;
  p.negative_class = cls;
  p.question_id = q.question_id;
  return p;
}

}  // namespace

PairSet gen_schema_pairs(const RoutingDataset& dataset, const Corpus& corpus,
                         const NegativePolicy& policy, std::uint64_t seed, DbNameStyle name_style) {
  PairSet out;
  if (dataset.train.empty()) throw Error(ErrorCode::kInvalidArgument, "train split is empty");
  const auto& dbs = dataset.train_dbs;

  std::map<std::string, std::string> texts;
  for (const auto& db : dbs) texts.emplace(db, db_text(corpus.database(db), name_style));

  std::map<std::string, std::vector<const RoutingSample*>> by_db;
  for (const auto& qid : dataset.train) {
    const auto& q = corpus.sample(qid);
    by_db[q.gold_db_id].push_back(&q);
    out.pairs.push_back(make_pair("schema/" + qid + "/pos", q, q.text, texts.at(q.gold_db_id), 1,
                                  PairKind::kSchema));
  }

  auto negative = [&](const RoutingSample& q, const std::string& other) {
    out.pairs.push_back(make_pair("schema/" + q.question_id + "/neg/" + other, q, q.text,
                                  texts.at(other), 0, PairKind::kSchema));
  };

  switch (policy.kind) {
    case NegativePolicy::Kind::kAll:
      for (const auto& qid : dataset.train) {
        const auto& q = corpus.sample(qid);
        for (const auto& other : dbs) {
          if (other != q.gold_db_id) negative(q, other);
        }
      }
      break;
    case NegativePolicy::Kind::kPerQuestion:
      for (const auto& qid : dataset.train) {
        const auto& q = corpus.sample(qid);
        std::vector<std::string> others;
        for (const auto& other : dbs) {
          if (other != q.gold_db_id) others.push_back(other);
        }
        Rng rng = question_rng(seed, qid);
        for (std::size_t idx : rng.sample_indices(others.size(), policy.count)) negative(q, others[idx]);
      }
      break;
    case NegativePolicy::Kind::kPerDbPair: {
      // For each ordered (gold, other) database pair, `count` distinct
      // questions of the gold database are paired with the other schema.
      for (const auto& [gold, questions] : by_db) {
        for (const auto& other : dbs) {
          if (other == gold) continue;
          Rng rng(derive_seed(seed, fnv1a64(gold + '\x1f' + other)));
          for (std::size_t idx : rng.sample_indices(questions.size(), policy.count)) {
            negative(*questions[idx], other);
          }
        }
      }
      break;
    }
  }
  finalize(out);
  return out;
}

PairSet gen_statement_pairs(const RoutingDataset& dataset, const Corpus& corpus,
                            std::size_t hard_per_question, std::size_t soft_per_question,
                            std::uint64_t seed) {
  PairSet out;
  for (const auto& qid : dataset.train) {
    const auto& q = corpus.sample(qid);
    if (!q.evidence_ids || q.evidence_ids->empty()) {
      ++out.skipped_questions;
      continue;
    }
    const auto& gold = corpus.database(q.gold_db_id);
    const std::set<std::string> evidence(q.evidence_ids->begin(), q.evidence_ids->end());
    for (const auto& id : *q.evidence_ids) {
      out.pairs.push_back(make_pair("statement/" + qid + "/pos/" + id, q, q.text,
                                    gold.find_statement(id)->text, 1, PairKind::kStatement));
    }

    Rng rng = question_rng(seed, qid);
    std::vector<const DomainStatement*> hard;
    for (const auto& s : gold.metadata) {
      if (!evidence.contains(s.id)) hard.push_back(&s);
    }
    for (std::size_t idx : rng.sample_indices(hard.size(), hard_per_question)) {
      out.pairs.push_back(make_pair("statement/" + qid + "/hard/" + hard[idx]->id, q, q.text,
                                    hard[idx]->text, 0, PairKind::kStatement, NegativeClass::kHard));
    }

    std::vector<std::pair<const std::string*, const DomainStatement*>> soft;
    for (const auto& db : dataset.train_dbs) {
      if (db == q.gold_db_id) continue;
      for (const auto& s : corpus.database(db).metadata) soft.emplace_back(&db, &s);
    }
    for (std::size_t idx : rng.sample_indices(soft.size(), soft_per_question)) {
      const auto& [db, s] = soft[idx];
      out.pairs.push_back(make_pair("statement/" + qid + "/soft/" + *db + "/" + s->id, q, q.text,
                                    s->text, 0, PairKind::kStatement, NegativeClass::kSoft));
    }
  }
  finalize(out);
  return out;
}

std::vector<TableNegativeCandidate> table_negative_candidates(
    const DatabaseSchema& db, const std::vector<const TableSchema*>& relevant,
    const std::vector<std::string>& evidence_ids) {
  std::vector<std::vector<std::string>> variants;
  variants.emplace_back();
  std::vector<std::string> own;
  for (const auto& id : evidence_ids) own.push_back(db.find_statement(id)->text);
  if (!own.empty()) variants.push_back(own);
  const std::set<std::string> evidence(evidence_ids.begin(), evidence_ids.end());
  for (const auto& s : db.metadata) {
    if (!evidence.contains(s.id)) variants.push_back({s.text});
  }

  std::vector<TableNegativeCandidate> out;
  for (const auto& t : db.tables) {
    if (std::find(relevant.begin(), relevant.end(), &t) != relevant.end()) continue;
    for (const auto& v : variants) out.push_back({&t, v});
  }
  return out;
}

PairSet gen_table_pairs(const RoutingDataset& dataset, const Corpus& corpus,
                        const NegativePolicy& policy, std::uint64_t seed) {
  if (policy.kind == NegativePolicy::Kind::kPerDbPair) {
    throw Error(ErrorCode::kInvalidArgument, "per-db-pair policy applies to schema pairs only");
  }
  PairSet out;
  for (const auto& qid : dataset.train) {
    const auto& q = corpus.sample(qid);
    auto sql = corpus.sql_map().find(qid);
    if (sql == corpus.sql_map().end()) {
      ++out.skipped_questions;
      continue;
    }
    const auto& gold = corpus.database(q.gold_db_id);
    std::vector<const TableSchema*> relevant;
    for (const auto& name : extract_tables_from_sql(sql->second, qid)) {
      if (const auto* t = gold.find_table(name)) {
        if (std::find(relevant.begin(), relevant.end(), t) == relevant.end()) relevant.push_back(t);
      } else {
        ++out.unresolved_tables;
      }
    }
    if (relevant.empty()) {
      ++out.skipped_questions;
      continue;
    }
    // Keep schema order for relevant tables.
    std::sort(relevant.begin(), relevant.end());

    std::vector<std::string> evidence_ids = q.evidence_ids.value_or(std::vector<std::string>{});
    std::string side_a = q.text;
    for (const auto& id : evidence_ids) side_a += "\n" + gold.find_statement(id)->text;

    for (const auto* t : relevant) {
      out.pairs.push_back(make_pair("table/" + qid + "/pos/" + t->name, q, side_a,
                                    table_text(*t, std::span<const std::string>{}), 1,
                                    PairKind::kTable));
    }
    auto candidates = table_negative_candidates(gold, relevant, evidence_ids);
    std::vector<std::size_t> chosen;
    if (policy.kind == NegativePolicy::Kind::kAll) {
      for (std::size_t i = 0; i < candidates.size(); ++i) chosen.push_back(i);
    } else {
      Rng rng = question_rng(seed, qid);
      chosen = rng.sample_indices(candidates.size(), policy.count);
    }
    for (std::size_t idx : chosen) {
      const auto& c = candidates[idx];
      out.pairs.push_back(make_pair("table/" + qid + "/neg/" + std::to_string(idx), q, side_a,
                                    table_text(*c.table, c.statements), 0, PairKind::kTable));
    }
  }
  finalize(out);
  return out;
}

}  // namespace dbrouter
