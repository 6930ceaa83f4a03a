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

#ifndef SAEMABC_SAEM_HPP
#define SAEMABC_SAEM_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "saemabc/fisher.hpp"
#include "saemabc/kernels.hpp"
#include "saemabc/model.hpp"
#include "saemabc/particle_filter.hpp"

namespace saemabc {

/// gamma_k = 1 for k <= K1, (k - K1)^{-1} afterwards.
class StepSizeSchedule {
 public:
  StepSizeSchedule(std::size_t total, std::size_t warmup);

  [[nodiscard]] std::size_t total() const noexcept { return total_; }
  [[nodiscard]] std::size_t warmup() const noexcept { return warmup_; }
  /// Throws ContractViolation unless 1 <= k <= K.
  [[nodiscard]] double gamma(std::size_t k) const;

 private:
  std::size_t total_;
  std::size_t warmup_;
};

inline double gamma(const StepSizeSchedule& sched, std::size_t k) { return sched.gamma(k); }

/// s_prev + gamma (s_c - s_prev).
std::vector<double> sa_update(std::span<const double> s_prev, std::span<const double> s_c, double gamma);

/// Builds the incremental weighter for SAEM iteration k at the current estimate.
using WeighterFactory =
    std::function<std::unique_ptr<IncrementalWeighter>(const ParameterVector& theta, std::size_t k)>;

struct AbcFilterSpec {
  KernelSpec kernel;
  ThresholdSchedule schedule;
  FilterSettings settings;
};

struct BootstrapFilterSpec {
  FilterSettings settings;
};

/// Simulation step by rejection ABC instead of a particle filter.
struct RejectionFilterSpec {
  ThresholdSchedule schedule;
  std::size_t max_attempts = 100000;
  Distance distance;
  SummaryMap summary;
};

/// Any particle filter given by its weighter; `delta` labels the trace.
struct CustomFilterSpec {
  WeighterFactory weighter;
  FilterSettings settings;
  std::function<double(std::size_t k)> delta;
};

using FilterSpec = std::variant<AbcFilterSpec, BootstrapFilterSpec, RejectionFilterSpec, CustomFilterSpec>;

struct TraceRow {
  std::size_t iteration = 0;
  double gamma = 0.0;
  /// NaN for the bootstrap filter.
  double delta = 0.0;
  std::vector<double> natural;
  std::vector<double> working;
  /// Filter means over time; NaN for rejection ABC.
  double ess_mean = 0.0;
  double distinct_mean = 0.0;
};

struct SaemResult {
  ParameterVector theta;
  std::vector<double> statistics;
  /// Standard errors in the model's Fisher coordinates, on the natural
  /// parameter scale and on the working scale.
  std::vector<std::string> fisher_coordinates;
  StandardErrors se;
  std::vector<double> se_natural;
  std::vector<double> se_working;
  FisherState fisher;
  std::vector<TraceRow> trace;
  std::vector<std::string> warnings;
};

/// Called after every iteration with the path drawn at that iteration.
struct SaemObserver {
  std::function<void(std::size_t k, const LatentPath& path, std::span<const double> s, const FisherState* fisher)>
      on_iteration;
  std::function<void(std::size_t k, const FilterDiagnostics& diagnostics)> on_filter;
};

/// SAEM coupled to a particle filter (or rejection ABC) for the simulation step.
///
/// Iteration k runs the filter at theta^{(k-1)}, draws one path from its
/// genealogy, updates s_k with gamma_k, applies the closed-form M-step and,
/// when the model supplies derivatives, updates the Fisher accumulators at
/// theta^{(k)}. s_0, G_0, H_0 are zero. Failures surface as SaemError.
SaemResult run_saem(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                    const ParameterVector& theta0, const StepSizeSchedule& sched, const FilterSpec& filter, Rng& rng,
                    const SaemObserver* observer = nullptr);

/// CSV: iteration,gamma,delta,<parameter names>,ess_mean,distinct_mean.
void write_trace_csv(std::ostream& os, const std::vector<std::string>& names, const std::vector<TraceRow>& trace);

}  // namespace saemabc

#endif  // SAEMABC_SAEM_HPP
