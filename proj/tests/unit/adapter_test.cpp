// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "adapter/adapter.hpp"
#include "adapter/loss.hpp"
#include "adapter/trainer.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/text.hpp"
#include "embedding/embedder.hpp"
#include "embedding/providers.hpp"
#include "oracles/oracles.hpp"
#include "test_support.hpp"

namespace dbrouter {
namespace {

Eigen::VectorXd random_vec(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  return v;
}

std::vector<EmbeddedPair> to_pairs(const oracle::SeparableSet& set) {
  std::vector<EmbeddedPair> out;
  for (const auto& p : set.train) out.push_back({p.a, p.b, p.label});
  return out;
}

TEST(Loss, ScalarExamples) {
  // d = 0 for a perfectly aligned positive.
  EXPECT_DOUBLE_EQ(contrastive_loss_from_cos(1.0, 1, 0.5, LossMode::kDistanceStandard), 0.0);
  // Negative beyond the margin: d = 0.8.
  EXPECT_DOUBLE_EQ(contrastive_loss_from_cos(0.2, 0, 0.5, LossMode::kDistanceStandard), 0.0);
  // Negative inside the margin: d = 0.3 gives 0.5 * 0.2^2.
  EXPECT_NEAR(contrastive_loss_from_cos(0.7, 0, 0.5, LossMode::kDistanceStandard), 0.02, 1e-15);
  // Literal form: 0.5 (cos^2) for positives, 0.5 relu(m - cos^2) for negatives.
  EXPECT_NEAR(contrastive_loss_from_cos(0.6, 1, 0.5, LossMode::kPaperLiteral), 0.18, 1e-15);
  EXPECT_NEAR(contrastive_loss_from_cos(0.6, 0, 0.5, LossMode::kPaperLiteral), 0.07, 1e-15);
  EXPECT_THROW(contrastive_loss_from_cos(0.5, 2, 0.5, LossMode::kPaperLiteral), Error);
}

TEST(Loss, ModeNames) {
  EXPECT_EQ(parse_loss_mode("paper-literal"), LossMode::kPaperLiteral);
  EXPECT_EQ(to_string(LossMode::kDistanceStandard), "distance-standard");
  EXPECT_THROW(parse_loss_mode("x"), Error);
}

TEST(Gradient, AlignedPositiveIsStationary) {
  Rng rng(2);
  const auto e = random_vec(rng, 6);
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(6, 6);
  const auto lg = loss_gradient(w, e, e, 1, 0.5, LossMode::kDistanceStandard);
  EXPECT_NEAR(lg.loss, 0.0, 1e-15);
  EXPECT_LT(lg.grad.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gradient, DeadHingeIsZero) {
  Eigen::VectorXd a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  const auto lg = loss_gradient(Eigen::MatrixXd::Identity(2, 2), a, b, 0, 0.5, LossMode::kDistanceStandard);
  EXPECT_EQ(lg.loss, 0.0);
  EXPECT_EQ(lg.grad.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Gradient, MatchesFiniteDifferences) {
  Rng rng(17);
  for (int draw = 0; draw < 40; ++draw) {
    for (bool literal : {false, true}) {
      const int dim = 8;
      Eigen::MatrixXd w = Eigen::MatrixXd::Identity(dim, dim);
      for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) w(r, c) += 0.3 * rng.normal();
      }
      const auto ei = random_vec(rng, dim);
      Eigen::VectorXd ej = random_vec(rng, dim);
      const int label = draw % 2;
      // Keep negatives inside the active hinge region.
      if (label == 0) ej = ei + 0.4 * ej;
      const auto mode = literal ? LossMode::kPaperLiteral : LossMode::kDistanceStandard;
      const double margin = literal ? 0.9 : 0.5;
      const auto lg = loss_gradient(w, ei, ej, label, margin, mode);
      EXPECT_NEAR(lg.loss, oracle::loss(w, ei, ej, label, margin, literal), 1e-12);
      const auto fd = oracle::finite_difference(w, ei, ej, label, margin, literal);
      const double rel = (lg.grad - fd).norm() / std::max(1e-12, fd.norm());
      if (fd.norm() > 1e-9) EXPECT_LT(rel, 1e-4) << "draw " << draw << " literal " << literal;
    }
  }
}

TEST(Adapter, IdentityInitIsNearIdentity) {
  const auto a = identity_adapter(4, 3);
  EXPECT_LT((a.weight - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_EQ(identity_adapter(4, 3).digest(), a.digest());
  EXPECT_NE(identity_adapter(4, 4).digest(), a.digest());
}

TEST(Adapter, ApplyMatchesIndependentProduct) {
  Rng rng(8);
  LinearAdapter a;
  a.weight = Eigen::MatrixXd(3, 4);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) a.weight(r, c) = static_cast<float>(rng.normal());
  }
  EmbeddingVector e{{0.5f, -0.25f, 1.0f, 2.0f}, false};
  const auto z = apply_adapter(a, e);
  ASSERT_EQ(z.dim(), 3u);
  long double norm = 0;
  std::vector<long double> ref(3, 0.0L);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) ref[r] += static_cast<long double>(a.weight(r, c)) * e.values[c];
    norm += ref[r] * ref[r];
  }
  for (int r = 0; r < 3; ++r) EXPECT_NEAR(z.values[r], static_cast<double>(ref[r] / std::sqrt(norm)), 1e-6);
}

TEST(Adapter, IdentityKeepsDirection) {
  LinearAdapter a;
  a.weight = Eigen::MatrixXd::Identity(2, 2);
  const auto z = apply_adapter(a, EmbeddingVector{{3.0f, 4.0f}, false});
  EXPECT_NEAR(z.values[0], 0.6f, 1e-7);
  EXPECT_NEAR(z.values[1], 0.8f, 1e-7);
  EXPECT_THROW(apply_adapter(a, EmbeddingVector{{0.0f, 0.0f}, false}), Error);
  EXPECT_THROW(apply_adapter(a, EmbeddingVector{{1.0f}, false}), Error);
}

TEST(Adapter, SaveLoadRoundTrip) {
  auto a = identity_adapter(5, 9, 0.01, 0.4, LossMode::kPaperLiteral);
  testing::TempDir dir;
  save_adapter(a, dir / "a.bin");
  const auto b = load_adapter(dir / "a.bin");
  EXPECT_EQ(b.weight, a.weight);
  EXPECT_EQ(b.margin, 0.4);
  EXPECT_EQ(b.mode, LossMode::kPaperLiteral);
  EXPECT_EQ(b.digest(), a.digest());
}

TEST(Adapter, CorruptPayloadDetected) {
  auto a = identity_adapter(3, 1);
  testing::TempDir dir;
  save_adapter(a, dir / "a.bin");
  auto bytes = read_file((dir / "a.bin").string());
  bytes[bytes.size() - 2] ^= 0x40;
  write_file((dir / "a.bin").string(), bytes);
  try {
    load_adapter(dir / "a.bin");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIntegrity);
  }
  write_file((dir / "b.bin").string(), "not an adapter");
  EXPECT_THROW(load_adapter(dir / "b.bin"), Error);
}

TEST(Trainer, ZeroEpochsReturnsInitialAdapter) {
  const auto set = oracle::separable_set(1);
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.seed = 5;
  const auto r = train_adapter(to_pairs(set), cfg);
  EXPECT_EQ(r.adapter.weight, identity_adapter(8, 5).weight);
  EXPECT_EQ(r.log.selected_epoch, 0u);
}

TEST(Trainer, LearnsSeparableSet) {
  const auto set = oracle::separable_set(3);
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.learning_rate = 1e-2;
  cfg.seed = 11;
  const auto r = train_adapter(to_pairs(set), cfg);
  ASSERT_EQ(r.log.epoch_mean_loss.size(), 30u);
  EXPECT_LT(r.log.epoch_mean_loss.back(), r.log.epoch_mean_loss.front());
  const auto score = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return cosine(Eigen::VectorXd(r.adapter.weight * a), Eigen::VectorXd(r.adapter.weight * b));
  };
  const double pos = score(set.heldout_query, set.candidates[0]);
  for (std::size_t c = 1; c < set.candidates.size(); ++c) EXPECT_GT(pos, score(set.heldout_query, set.candidates[c]));
}

TEST(Trainer, SameSeedSameAdapter) {
  const auto set = oracle::separable_set(4);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.learning_rate = 1e-3;
  cfg.seed = 2;
  EXPECT_EQ(train_adapter(to_pairs(set), cfg).adapter.digest(), train_adapter(to_pairs(set), cfg).adapter.digest());
}

TEST(Trainer, RejectsSingleLabel) {
  std::vector<EmbeddedPair> pairs{{Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3), 1}};
  EXPECT_THROW(train_adapter(pairs, TrainConfig{}), Error);
  TrainConfig bad;
  bad.batch_size = 0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Trainer, ZeroEmbeddingIsNumericError) {
  auto set = to_pairs(oracle::separable_set(5));
  set[0].a = Eigen::VectorXd::Zero(8);
  try {
    train_adapter(set, TrainConfig{});
    FAIL() << "expected a numeric error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumeric);
  }
}

TEST(Trainer, FromTextPairs) {
  ProviderConfig pcfg;
  pcfg.dim = 16;
  Embedder embedder(std::make_shared<DeterministicProvider>(16, 0), pcfg);
  std::vector<PairExample> pairs{
      {"p0", "how many singers", "singer table", 1, PairKind::kSchema, std::nullopt, "q0"},
      {"p1", "how many singers", "pets table", 0, PairKind::kSchema, std::nullopt, "q0"},
      {"p2", "pets weight", "pets table", 1, PairKind::kSchema, std::nullopt, "q1"},
      {"p3", "pets weight", "singer table", 0, PairKind::kSchema, std::nullopt, "q1"},
  };
  TrainConfig cfg;
  cfg.epochs = 2;
  const auto r = train_adapter(pairs, embedder, cfg);
  EXPECT_EQ(r.adapter.d_in(), 16u);
  EXPECT_EQ(r.log.epoch_mean_loss.size(), 2u);
}

}  // namespace
}  // namespace dbrouter
