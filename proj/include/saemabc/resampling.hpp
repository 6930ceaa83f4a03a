// Copyright 2026 The saemabc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SAEMABC_RESAMPLING_HPP
#define SAEMABC_RESAMPLING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "saemabc/rng.hpp"

namespace saemabc {

/// Tolerance on |sum(w) - 1| accepted by routines that expect normalized weights.
inline constexpr double kNormalizationTolerance = 1e-8;

/// Effective sample size 1 / sum(w^2), clamped to [1, M].
/// Throws ContractViolation if the weights are not normalized.
double ess(std::span<const double> normalized_weights);

/// Stratified resampling: one uniform draw in each stratum ((m-1)/M, m/M].
/// Returns M zero-based ancestor indices in non-decreasing order.
std::vector<std::size_t> stratified_resample(std::span<const double> normalized_weights, Rng& rng);

/// Draw one index with probability proportional to the normalized weights.
std::size_t sample_index(std::span<const double> normalized_weights, Rng& rng);

/// Exponentiate and normalize log-weights with max subtraction.
/// Writes normalized weights to `out` and returns log(sum(exp(log_weights))),
/// which is -inf when every entry is -inf (out is then left zero).
double normalize_log_weights(std::span<const double> log_weights, std::span<double> out);

}  // namespace saemabc

#endif  // SAEMABC_RESAMPLING_HPP
