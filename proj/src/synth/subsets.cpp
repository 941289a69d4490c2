// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "synth/subsets.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace dbrouter {

std::vector<std::vector<std::string>> sample_db_subsets(std::vector<std::string> pool,
                                                        std::span<const std::size_t> sizes,
                                                        std::uint64_t seed) {
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  for (std::size_t s : sizes) {
    if (s == 0 || s > pool.size()) {
      throw Error(ErrorCode::kInvalidArgument, "subset size " + std::to_string(s) +
                                                   " outside [1, " + std::to_string(pool.size()) + "]");
    }
  }
  Rng rng(seed);
  rng.shuffle(pool);
  std::vector<std::vector<std::string>> out;
  for (std::size_t s : sizes) {
    std::vector<std::string> subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
    std::sort(subset.begin(), subset.end());
    out.push_back(std::move(subset));
  }
  return out;
}

namespace {

/// Assigns every (set, reference cluster) slot to a pool cluster by
/// depth-first search. Slots are filled largest first; candidate clusters
/// are tried in order of remaining capacity with a seeded tie-break.
class ClusterAssigner {
 public:
  struct Slot {
    std::size_t set;
    std::size_t size;
    std::size_t ref_index;
  };

  ClusterAssigner(std::vector<std::size_t> capacity, std::vector<Slot> slots, std::size_t n_sets,
                  Rng& rng)
      : capacity_(std::move(capacity)),
        slots_(std::move(slots)),
        used_(n_sets, std::vector<bool>(capacity_.size(), false)),
        choice_(slots_.size(), 0),
        rng_(rng) {
    tiebreak_.resize(capacity_.size());
    for (auto& t : tiebreak_) t = rng_.next();
  }

  bool solve() { return place(0); }
  const std::vector<std::size_t>& choice() const { return choice_; }
  std::size_t deepest_failure() const { return deepest_; }

 private:
  bool place(std::size_t k) {
    if (k == slots_.size()) return true;
    if (++nodes_ > kNodeBudget) return false;
    const Slot& slot = slots_[k];
    std::vector<std::size_t> candidates;
    for (std::size_t c = 0; c < capacity_.size(); ++c) {
      if (!used_[slot.set][c] && capacity_[c] >= slot.size) candidates.push_back(c);
    }
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
      if (capacity_[a] != capacity_[b]) return capacity_[a] > capacity_[b];
      return tiebreak_[a] < tiebreak_[b];
    });
    for (std::size_t c : candidates) {
      capacity_[c] -= slot.size;
      used_[slot.set][c] = true;
      choice_[k] = c;
      if (place(k + 1)) return true;
      capacity_[c] += slot.size;
      used_[slot.set][c] = false;
      if (nodes_ > kNodeBudget) return false;
    }
    deepest_ = std::max(deepest_, k);
    return false;
  }

  static constexpr std::size_t kNodeBudget = 2'000'000;

  std::vector<std::size_t> capacity_;
  std::vector<Slot> slots_;
  std::vector<std::vector<bool>> used_;
  std::vector<std::size_t> choice_;
  std::vector<std::uint64_t> tiebreak_;
  Rng& rng_;
  std::size_t nodes_ = 0;
  std::size_t deepest_ = 0;
};

}  // namespace

std::vector<std::vector<std::string>> sample_cluster_matched(
    const std::vector<std::string>& pool, const VerticalClusters& clusters,
    std::vector<std::size_t> reference_profile, std::size_t n_sets, std::uint64_t seed) {
  if (n_sets == 0 || reference_profile.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one set and one reference cluster");
  }
  std::sort(reference_profile.rbegin(), reference_profile.rend());
  if (reference_profile.back() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "reference clusters must be non-empty");
  }

  const auto groups = clusters.groups(pool);
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> members;
  for (const auto& [c, m] : groups) {
    names.push_back(c);
    members.push_back(m);
  }
  std::vector<std::size_t> capacity;
  for (const auto& m : members) capacity.push_back(m.size());

  std::size_t needed = 0;
  for (std::size_t s : reference_profile) needed += s;
  if (needed * n_sets > pool.size()) {
    throw Error(ErrorCode::kInfeasible, "need " + std::to_string(needed * n_sets) +
                                            " databases but the pool holds " +
                                            std::to_string(pool.size()));
  }

  std::vector<ClusterAssigner::Slot> slots;
  for (std::size_t r = 0; r < reference_profile.size(); ++r) {
    for (std::size_t s = 0; s < n_sets; ++s) slots.push_back({s, reference_profile[r], r});
  }
  Rng rng(seed);
  ClusterAssigner assigner(capacity, slots, n_sets, rng);
  if (!assigner.solve()) {
    const auto& blocking = slots[assigner.deepest_failure()];
    throw Error(ErrorCode::kInfeasible,
                "cannot place reference cluster #" + std::to_string(blocking.ref_index + 1) +
                    " (size " + std::to_string(blocking.size) + ") in set " +
                    std::to_string(blocking.set + 1) + " of " + std::to_string(n_sets));
  }

  for (auto& m : members) rng.shuffle(m);
  std::vector<std::size_t> cursor(members.size(), 0);
  std::vector<std::vector<std::string>> out(n_sets);
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const std::size_t c = assigner.choice()[k];
    for (std::size_t i = 0; i < slots[k].size; ++i) out[slots[k].set].push_back(members[c][cursor[c]++]);
  }
  for (auto& set : out) std::sort(set.begin(), set.end());
  return out;
}

std::size_t profile_distance(std::vector<std::size_t> a, std::vector<std::size_t> b) {
  std::sort(a.rbegin(), a.rend());
  std::sort(b.rbegin(), b.rend());
  const std::size_t n = std::max(a.size(), b.size());
  a.resize(n, 0);
  b.resize(n, 0);
  std::size_t d = 0;
  for (std::size_t i = 0; i < n; ++i) d += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return d;
}

ClosestSets sample_cluster_closest(const std::vector<std::string>& pool, const VerticalClusters& clusters,
                                   std::vector<std::size_t> reference_profile, std::size_t n_sets,
                                   std::uint64_t seed) {
  if (n_sets == 0 || reference_profile.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one set and one reference cluster");
  }
  std::size_t set_size = 0;
  for (std::size_t s : reference_profile) set_size += s;
  std::vector<std::string> dbs(pool);
  std::sort(dbs.begin(), dbs.end());
  dbs.erase(std::unique(dbs.begin(), dbs.end()), dbs.end());
  if (set_size * n_sets > dbs.size()) {
    throw Error(ErrorCode::kInfeasible, "need " + std::to_string(set_size * n_sets) +
                                            " databases but the pool holds " + std::to_string(dbs.size()));
  }

  // Cluster index per database; bins 0..n_sets-1 are the sets, bin n_sets
  // holds the databases left out.
  std::map<std::string, std::size_t> cluster_ids;
  std::vector<std::size_t> cluster_of(dbs.size());
  for (std::size_t i = 0; i < dbs.size(); ++i) {
    cluster_of[i] = cluster_ids.emplace(clusters.at(dbs[i]), cluster_ids.size()).first->second;
  }
  Rng rng(seed);
  std::vector<std::size_t> order(dbs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> bins(n_sets + 1);
  for (std::size_t k = 0; k < order.size(); ++k) bins[std::min(k / set_size, n_sets)].push_back(order[k]);

  auto cost = [&](const std::vector<std::size_t>& bin) {
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t i : bin) ++counts[cluster_of[i]];
    std::vector<std::size_t> profile;
    for (const auto& [c, n] : counts) profile.push_back(n);
    return profile_distance(std::move(profile), reference_profile);
  };
  std::vector<std::size_t> costs(n_sets + 1, 0);
  std::size_t total = 0;
  for (std::size_t b = 0; b < n_sets; ++b) total += costs[b] = cost(bins[b]);

  const std::size_t iterations = 4000 * dbs.size();
  for (std::size_t it = 0; it < iterations && total > 0; ++it) {
    const std::size_t b1 = rng.uniform(n_sets);
    std::size_t b2 = rng.uniform(n_sets + (bins[n_sets].empty() ? 0 : 1));
    if (b1 == b2) continue;
    const std::size_t i1 = rng.uniform(bins[b1].size());
    const std::size_t i2 = rng.uniform(bins[b2].size());
    if (cluster_of[bins[b1][i1]] == cluster_of[bins[b2][i2]]) continue;
    std::swap(bins[b1][i1], bins[b2][i2]);
    const std::size_t c1 = cost(bins[b1]);
    const std::size_t c2 = b2 < n_sets ? cost(bins[b2]) : 0;
    const std::size_t next = total - costs[b1] - costs[b2] + c1 + c2;
    if (next <= total) {
      total = next;
      costs[b1] = c1;
      costs[b2] = c2;
    } else {
      std::swap(bins[b1][i1], bins[b2][i2]);
    }
  }

  ClosestSets out;
  out.distance = total;
  for (std::size_t b = 0; b < n_sets; ++b) {
    std::vector<std::string> set;
    for (std::size_t i : bins[b]) set.push_back(dbs[i]);
    std::sort(set.begin(), set.end());
    out.sets.push_back(std::move(set));
  }
  return out;
}

}  // namespace dbrouter
