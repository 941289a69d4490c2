// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace dbrouter {

/// kDistanceStandard: d = 1 - cos, L = 0.5 (l d^2 + (1-l) relu(m - d)^2).
/// kPaperLiteral:     c = cos,     L = 0.5 (l c^2 + (1-l) relu(m - c^2)).
enum class LossMode { kDistanceStandard, kPaperLiteral };

std::string_view to_string(LossMode mode);
LossMode parse_loss_mode(std::string_view s);

/// Cosine of two unnormalized vectors; kNumeric on a zero vector.
double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

double contrastive_loss_from_cos(double cos, int label, double margin, LossMode mode);
double dloss_dcos(double cos, int label, double margin, LossMode mode);

double contrastive_loss(const Eigen::VectorXd& zi, const Eigen::VectorXd& zj, int label, double margin,
                        LossMode mode);

struct LossAndGradient {
  double loss = 0.0;
  Eigen::MatrixXd grad;  // dL/dW, same shape as W
};

/// Loss of the pair projected through z = W e, with its exact gradient
/// with respect to W.
LossAndGradient loss_gradient(const Eigen::MatrixXd& w, const Eigen::VectorXd& ei, const Eigen::VectorXd& ej,
                              int label, double margin, LossMode mode);

}  // namespace dbrouter
