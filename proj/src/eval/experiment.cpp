// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eval/experiment.hpp"

#include <algorithm>
#include <set>

#include <spdlog/spdlog.h>

#include "common/error.hpp"
#include "synth/subsets.hpp"

namespace dbrouter {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::kSubsetScaling:
      return "subset-scaling";
    case Protocol::kClusterMatchedSampling:
      return "cluster-matched-sampling";
    case Protocol::kMetadataAblation:
      return "metadata-ablation";
    case Protocol::kInVsCross:
      return "in-vs-cross";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view s) {
  if (s == "subset-scaling") return Protocol::kSubsetScaling;
  if (s == "cluster-matched-sampling") return Protocol::kClusterMatchedSampling;
  if (s == "metadata-ablation") return Protocol::kMetadataAblation;
  if (s == "in-vs-cross") return Protocol::kInVsCross;
  throw Error(ErrorCode::kInvalidArgument, "unknown protocol '" + std::string(s) + "'");
}

MetricsReport average_reports(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to average");
  MetricsReport out;
  bool vertical = true;
  double w = 0;
  OverallMetrics across;
  for (const auto& r : reports) {
    out.n += r.n;
    out.overall.r1 += r.overall.r1;
    out.overall.r3 += r.overall.r3;
    out.overall.map += r.overall.map;
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    if (!r.within_r1 || !r.across) {
      vertical = false;
      continue;
    }
    w += *r.within_r1;
    across.r1 += r.across->r1;
    across.r3 += r.across->r3;
    across.map += r.across->map;
  }
  const double k = static_cast<double>(reports.size());
  out.overall = {out.overall.r1 / k, out.overall.r3 / k, out.overall.map / k};
  if (vertical) {
    out.within_r1 = w / k;
    out.across = OverallMetrics{across.r1 / k, across.r3 / k, across.map / k};
  }
  return out;
}

namespace {

std::vector<const RoutingSample*> questions_in(const Corpus& corpus, const std::vector<std::string>& qids,
                                               const std::vector<std::string>& dbs) {
  const std::set<std::string> allowed(dbs.begin(), dbs.end());
  std::vector<const RoutingSample*> out;
  for (const auto& id : qids) {
    const auto& s = corpus.sample(id);
    if (allowed.contains(s.gold_db_id)) out.push_back(&s);
  }
  return out;
}

MetricsReport eval_cell(const Router& router, const Reranker* reranker, const EvalOptions& base,
                        const std::vector<const RoutingSample*>& qs, const std::vector<std::string>& scope) {
  EvalOptions opts = base;
  opts.rank.scope = scope;
  return evaluate(router, reranker, qs, opts);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const Router& router, const Reranker* reranker,
                                const RoutingDataset& dataset) {
  const Corpus& corpus = router.corpus();
  ExperimentResult res{spec.protocol, {}, {}};
  std::vector<std::string> in_dbs = dataset.in_dbs();
  std::vector<std::string> out_dbs = dataset.out_dbs;
  std::sort(in_dbs.begin(), in_dbs.end());
  std::sort(out_dbs.begin(), out_dbs.end());

  switch (spec.protocol) {
    case Protocol::kSubsetScaling: {
      if (spec.sizes.empty()) throw Error(ErrorCode::kInvalidArgument, "subset-scaling needs sizes");
      std::vector<std::string> pool = in_dbs;
      pool.insert(pool.end(), out_dbs.begin(), out_dbs.end());
      std::vector<std::string> qids = dataset.test_in;
      qids.insert(qids.end(), dataset.test_out.begin(), dataset.test_out.end());
      std::vector<std::size_t> sizes = spec.sizes;
      std::sort(sizes.begin(), sizes.end(), std::greater<>());
      const auto subsets = sample_db_subsets(pool, sizes, spec.seed);
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        const auto qs = questions_in(corpus, qids, subsets[i]);
        if (qs.empty()) {
          spdlog::warn("subset of {} DBs has no test questions; skipped", sizes[i]);
          continue;
        }
        res.cells.push_back({std::to_string(sizes[i]) + " DB", eval_cell(router, reranker, spec.eval, qs, subsets[i])});
        res.scopes.push_back(subsets[i]);
      }
      break;
    }
    case Protocol::kClusterMatchedSampling: {
      if (spec.eval.clusters == nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "cluster-matched-sampling needs a cluster file");
      }
      const auto profile = spec.eval.clusters->size_profile(out_dbs);
      std::vector<std::vector<std::string>> sets;
      std::string approx_warning;
      try {
        sets = sample_cluster_matched(in_dbs, *spec.eval.clusters, profile, spec.n_sets, spec.seed);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kInfeasible) throw;
        auto closest = sample_cluster_closest(in_dbs, *spec.eval.clusters, profile, spec.n_sets, spec.seed);
        approx_warning = "no exact cluster-profile match (" + std::string(e.what()) +
                         "); sets use the closest profiles found, total distance " +
                         std::to_string(closest.distance);
        spdlog::warn("{}", approx_warning);
        sets = std::move(closest.sets);
      }
      std::vector<MetricsReport> per_set;
      for (std::size_t i = 0; i < sets.size(); ++i) {
        const auto qs = questions_in(corpus, dataset.test_in, sets[i]);
        if (qs.empty()) {
          spdlog::warn("in-domain set {} has no test questions; skipped", i + 1);
          continue;
        }
        per_set.push_back(eval_cell(router, reranker, spec.eval, qs, sets[i]));
        res.cells.push_back({"in-domain set " + std::to_string(i + 1), per_set.back()});
        res.scopes.push_back(sets[i]);
      }
      auto averaged = average_reports(per_set);
      if (!approx_warning.empty()) averaged.warnings.push_back(approx_warning);
      res.cells.push_back({"in-domain (avg of " + std::to_string(per_set.size()) + " sets)", std::move(averaged)});
      res.scopes.emplace_back();
      res.cells.push_back({"cross-domain",
                           eval_cell(router, reranker, spec.eval, questions_in(corpus, dataset.test_out, out_dbs), out_dbs)});
      res.scopes.push_back(out_dbs);
      break;
    }
    case Protocol::kMetadataAblation: {
      const auto qs = questions_in(corpus, dataset.test_out, out_dbs);
      EvalOptions with = spec.eval;
      EvalOptions without = spec.eval;
      with.rank.strategy = Strategy::kPooledTablesMetadata;
      without.rank.strategy = Strategy::kPooledTables;
      res.cells.push_back({"with metadata", eval_cell(router, reranker, with, qs, out_dbs)});
      res.cells.push_back({"without metadata", eval_cell(router, reranker, without, qs, out_dbs)});
      res.scopes = {out_dbs, out_dbs};
      break;
    }
    case Protocol::kInVsCross: {
      res.cells.push_back({"in-domain",
                           eval_cell(router, reranker, spec.eval, questions_in(corpus, dataset.test_in, in_dbs), in_dbs)});
      res.cells.push_back({"cross-domain",
                           eval_cell(router, reranker, spec.eval, questions_in(corpus, dataset.test_out, out_dbs), out_dbs)});
      res.scopes = {in_dbs, out_dbs};
      break;
    }
  }
  return res;
}

}  // namespace dbrouter
