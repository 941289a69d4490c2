// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include "adapter/trainer.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "common/digest.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"

namespace dbrouter {

void TrainConfig::validate() const {
  if (batch_size < 1) throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  if (!(margin > 0.0)) throw Error(ErrorCode::kInvalidArgument, "margin must be > 0");
  if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0 && epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Adam parameters out of range");
  }
}

double mean_loss(const Eigen::MatrixXd& w, const std::vector<EmbeddedPair>& pairs, double margin, LossMode mode) {
  double sum = 0.0;
  for (const auto& p : pairs) sum += contrastive_loss(w * p.a, w * p.b, p.label, margin, mode);
  return pairs.empty() ? 0.0 : sum / static_cast<double>(pairs.size());
}

TrainResult train_adapter(const std::vector<EmbeddedPair>& pairs, const TrainConfig& cfg) {
  cfg.validate();
  if (pairs.empty()) throw Error(ErrorCode::kInvalidArgument, "no training pairs");
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& p : pairs) {
    has_pos = has_pos || p.label == 1;
    has_neg = has_neg || p.label == 0;
    if (p.a.size() != pairs.front().a.size() || p.b.size() != pairs.front().a.size()) {
      throw Error(ErrorCode::kInvalidArgument, "training pairs have mixed embedding dims");
    }
  }
  if (!has_pos || !has_neg) throw Error(ErrorCode::kInvalidArgument, "training pairs need both labels");

  const auto dim = static_cast<std::size_t>(pairs.front().a.size());
  TrainResult result{identity_adapter(dim, cfg.seed, cfg.init_sigma, cfg.margin, cfg.loss_mode), {}};
  if (cfg.epochs == 0) return result;

  Eigen::MatrixXd w = result.adapter.weight;
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(w.rows(), w.cols());
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(w.rows(), w.cols());
  Eigen::MatrixXd best = w;
  double best_loss = mean_loss(w, pairs, cfg.margin, cfg.loss_mode);

  Rng rng(derive_seed(cfg.seed, fnv1a64("adapter-shuffle")));
  std::vector<std::size_t> order(pairs.size());
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    double epoch_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
      const std::size_t e = std::min(b + cfg.batch_size, order.size());
      Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(w.rows(), w.cols());
      double batch_loss = 0.0;
      for (std::size_t k = b; k < e; ++k) {
        const auto& p = pairs[order[k]];
        auto lg = loss_gradient(w, p.a, p.b, p.label, cfg.margin, cfg.loss_mode);
        batch_loss += lg.loss;
        grad += lg.grad;
      }
      const double n = static_cast<double>(e - b);
      batch_loss /= n;
      grad /= n;
      ++step;
      if (!std::isfinite(batch_loss) || !grad.allFinite()) {
        throw Error(ErrorCode::kNumeric, "training diverged at step " + std::to_string(step) + " (epoch " +
                                             std::to_string(epoch + 1) + ")");
      }
      m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * grad;
      m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      w -= cfg.learning_rate * ((m1 / c1).array() / ((m2 / c2).array().sqrt() + cfg.epsilon)).matrix();
      epoch_sum += batch_loss;
      ++batches;
    }
    result.log.epoch_mean_loss.push_back(epoch_sum / static_cast<double>(batches));

    Eigen::MatrixXd snapshot = w;
    round_to_float(snapshot);
    const double post = mean_loss(snapshot, pairs, cfg.margin, cfg.loss_mode);
    result.log.post_epoch_loss.push_back(post);
    spdlog::info("epoch {}: mean batch loss {:.6f}, post-epoch loss {:.6f}", epoch + 1,
                 result.log.epoch_mean_loss.back(), post);
    if (post < best_loss) {
      best_loss = post;
      best = snapshot;
      result.log.selected_epoch = epoch + 1;
    }
  }
  result.log.steps = step;
  result.adapter.weight = best;
  result.adapter.validate();
  return result;
}

TrainResult train_adapter(const std::vector<PairExample>& pairs, Embedder& embedder, const TrainConfig& cfg) {
  if (pairs.empty()) throw Error(ErrorCode::kInvalidArgument, "no training pairs");
  std::vector<std::string> texts;
  std::unordered_map<std::string, std::size_t> slot;
  auto intern = [&](const std::string& t) {
    auto [it, inserted] = slot.emplace(t, texts.size());
    if (inserted) texts.push_back(t);
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  idx.reserve(pairs.size());
  for (const auto& p : pairs) idx.emplace_back(intern(p.side_a), intern(p.side_b));

  const auto vecs = embedder.embed_batch(texts);
  auto to_eigen = [](const EmbeddingVector& v) {
    Eigen::VectorXd e(static_cast<Eigen::Index>(v.dim()));
    for (std::size_t i = 0; i < v.dim(); ++i) e(static_cast<Eigen::Index>(i)) = v.values[i];
    return e;
  };
  std::vector<EmbeddedPair> embedded;
  embedded.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    embedded.push_back({to_eigen(vecs[idx[i].first]), to_eigen(vecs[idx[i].second]), pairs[i].label});
  }
  return train_adapter(embedded, cfg);
}

}  // namespace dbrouter
