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

#ifndef SAEMABC_KERNELS_HPP
#define SAEMABC_KERNELS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace saemabc {

enum class KernelKind { gaussian, uniform };

using Distance = std::function<double(std::span<const double>, std::span<const double>)>;
using SummaryMap = std::function<std::vector<double>(std::span<const double>)>;

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// ABC kernel J_delta comparing a simulated observation against data.
///
/// The gaussian kernel is (1/delta) exp(-|y* - y|^2 / (2 delta^2)), summed
/// componentwise in log space for vector observations with one shared delta.
/// The uniform kernel is the indicator of rho(eta(y*), eta(y)) <= delta; its
/// distance and summary map default to Euclidean and identity.
struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  Distance distance;
  SummaryMap summary;

  static KernelSpec gaussian() { return {}; }
  static KernelSpec uniform(Distance rho = {}, SummaryMap eta = {}) {
    return {KernelKind::uniform, std::move(rho), std::move(eta)};
  }
};

/// log J_delta(y, y*). Throws std::domain_error for delta <= 0.
double kernel_log_weight(const KernelSpec& spec, std::span<const double> y, std::span<const double> y_star,
                         double delta);

/// Batched form for scalar observations: out[m] = log J_delta(y, y_star[m]).
void kernel_log_weights(const KernelSpec& spec, double y, std::span<const double> y_star, double delta,
                        std::span<double> out);

struct ThresholdLevel {
  double delta;
  std::size_t iterations;
};

/// Deterministic decreasing tolerance sequence delta_1 > ... > delta_L > 0,
/// each used for a block of SAEM iterations.
class ThresholdSchedule {
 public:
  explicit ThresholdSchedule(std::vector<ThresholdLevel> levels);

  static ThresholdSchedule constant(double delta, std::size_t iterations) {
    return ThresholdSchedule({{delta, iterations}});
  }

  [[nodiscard]] const std::vector<ThresholdLevel>& levels() const noexcept { return levels_; }
  /// Total iterations K covered by the schedule.
  [[nodiscard]] std::size_t total_iterations() const noexcept { return total_; }

  /// delta for SAEM iteration k in [1, K].
  [[nodiscard]] double delta_at(std::size_t k) const;

 private:
  std::vector<ThresholdLevel> levels_;
  std::size_t total_ = 0;
};

inline double schedule_delta(const ThresholdSchedule& sched, std::size_t k) { return sched.delta_at(k); }

}  // namespace saemabc

#endif  // SAEMABC_KERNELS_HPP
