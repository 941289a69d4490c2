// Copyright 2026 The dbrouter Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace dbrouter {

/// Correctly rounded sum (Shewchuk partials); independent of input order.
double exact_sum(std::span<const double> values);

/// exact_sum / n with the division remainder and the sum's own rounding
/// error folded back in, so e.g. the mean of {0.9, 0.7, 0.5} is 0.7.
/// Throws kInvalidArgument on an empty input.
double exact_mean(std::span<const double> values);

}  // namespace dbrouter
