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

#ifndef SAEMABC_PARTICLE_FILTER_HPP
#define SAEMABC_PARTICLE_FILTER_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "saemabc/kernels.hpp"
#include "saemabc/model.hpp"
#include "saemabc/rng.hpp"

namespace saemabc {

/// Full record of one filter run.
///
/// Time indices j run over 1..n; vectors indexed by time are stored at j-1.
/// States for each interval keep every fine substep so genealogy paths carry
/// the complete fine-grid trajectory. Particle m at time j owns the block
/// states[j-1][(m*R + r)*dx ...] for r = 0..R-1; the last block entry is X_j.
struct ParticleSystem {
  std::size_t particles = 0;
  std::size_t observations = 0;
  std::size_t substeps = 1;
  std::size_t state_dim = 1;
  std::size_t obs_dim = 1;
  /// Root key of the per-particle random substreams (see particle_stream).
  std::uint64_t seed = 0;

  std::vector<double> initial_states;
  std::vector<std::vector<double>> states;
  /// ancestors[j-1][m]: index at time j-1 of the parent of particle m at time j.
  /// At j = 1 this is the identity into initial_states.
  std::vector<std::vector<std::size_t>> ancestors;
  /// Unnormalized log-weights log W_j.
  std::vector<std::vector<double>> log_weights;
  /// Normalized weights w_j before any resampling at j.
  std::vector<std::vector<double>> weights;
  std::vector<bool> resampled;
  /// Simulated pseudo-observations Y*_j (ABC runs only).
  std::vector<std::vector<double>> pseudo_observations;

  /// X_j for particle m.
  [[nodiscard]] std::span<const double> state(std::size_t j, std::size_t m) const;
  /// The R substates of particle m over (t_{j-1}, t_j].
  [[nodiscard]] std::span<const double> interval(std::size_t j, std::size_t m) const;
  /// Weights carried into step j+1: uniform after a resample, else w_j.
  [[nodiscard]] std::vector<double> post_resample_weights(std::size_t j) const;
};

struct FilterDiagnostics {
  std::vector<double> ess;
  std::vector<std::size_t> distinct;
  std::vector<bool> resampled;
  /// Sum over j of log sum_m w_{j-1}^m exp(incremental log-weight).
  /// For the bootstrap filter this is the usual likelihood estimate.
  double log_likelihood = 0.0;

  [[nodiscard]] std::vector<std::size_t> resample_events() const;
  [[nodiscard]] double mean_ess() const;
  [[nodiscard]] double mean_distinct() const;
};

struct FilterResult {
  ParticleSystem system;
  FilterDiagnostics diagnostics;
};

/// Supplies the incremental log-weight at each observation time. The ABC
/// and bootstrap filters differ only in the weighter they install.
class IncrementalWeighter {
 public:
  virtual ~IncrementalWeighter() = default;
  [[nodiscard]] virtual bool simulates_pseudo_observations() const = 0;
  /// states: M current states X_j (contiguous); pseudo: M pseudo-observations
  /// or empty; out: M log-weights.
  virtual void log_weights(std::size_t j, std::span<const double> y_j, std::span<const double> states,
                           std::span<const double> pseudo, std::span<double> out) const = 0;
};

/// Weights by the ABC kernel between Y_j and simulated Y*_j.
class AbcKernelWeighter final : public IncrementalWeighter {
 public:
  AbcKernelWeighter(KernelSpec kernel, double delta, std::size_t obs_dim);
  [[nodiscard]] bool simulates_pseudo_observations() const override { return true; }
  void log_weights(std::size_t j, std::span<const double> y_j, std::span<const double> states,
                   std::span<const double> pseudo, std::span<double> out) const override;

 private:
  KernelSpec kernel_;
  double delta_;
  std::size_t obs_dim_;
};

/// Weights by the model observation density f(Y_j | X_j).
class ObservationDensityWeighter final : public IncrementalWeighter {
 public:
  ObservationDensityWeighter(const StateSpaceModel& model, const ParameterVector& theta)
      : model_(model), theta_(theta) {}
  [[nodiscard]] bool simulates_pseudo_observations() const override { return false; }
  void log_weights(std::size_t j, std::span<const double> y_j, std::span<const double> states,
                   std::span<const double> pseudo, std::span<double> out) const override;

 private:
  const StateSpaceModel& model_;
  ParameterVector theta_;
};

struct FilterSettings {
  std::size_t particles = 1000;
  /// Resample when ESS < resample_threshold (strict).
  double resample_threshold = 200;
};

/// Random substream of particle m (zero-based) at time j; drives the initial
/// draw (j = 1), the propagation into X_j and the pseudo-observation.
inline Rng particle_stream(std::uint64_t seed, std::size_t j, std::size_t m) { return Rng::substream(seed, {0, j, m}); }
/// Random substream of the resampling step at time j.
inline Rng resampling_stream(std::uint64_t seed, std::size_t j) { return Rng::substream(seed, {1, j}); }

/// Sequential importance resampling with a pluggable weighting function.
FilterResult run_particle_filter(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                                 const ParameterVector& theta, const FilterSettings& settings,
                                 const IncrementalWeighter& weighter, Rng& rng);

/// ABC-SMC filter: propagate blindly, simulate Y*_j, weight by J_delta.
FilterResult run_abc_smc(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                         const ParameterVector& theta, const FilterSettings& settings, double delta,
                         const KernelSpec& kernel, Rng& rng);

/// Bootstrap filter: propagate blindly, weight by f(Y_j | X_j).
FilterResult run_bootstrap(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                           const ParameterVector& theta, const FilterSettings& settings, Rng& rng);

/// Trace the lineage of final particle `final_index` back to time 0.
LatentPath genealogy_path(const ParticleSystem& ps, std::size_t final_index);

/// Draw m' from the final normalized weights and return its lineage.
LatentPath sample_genealogy_path(const ParticleSystem& ps, Rng& rng);

/// Number of distinct state vectors (exact equality) among the selected particles.
std::size_t count_distinct(std::span<const double> states, std::size_t dim, std::span<const std::size_t> selection);

/// CSV with columns time_index,ess,distinct_count,resampled.
void write_diagnostics_csv(std::ostream& os, const FilterDiagnostics& d);

}  // namespace saemabc

#endif  // SAEMABC_PARTICLE_FILTER_HPP
