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

#include "saemabc/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "saemabc/errors.hpp"
#include "saemabc/resampling.hpp"
#include "saemabc/simd.hpp"

namespace saemabc {

std::span<const double> ParticleSystem::state(std::size_t j, std::size_t m) const {
  return interval(j, m).subspan((substeps - 1) * state_dim, state_dim);
}

std::span<const double> ParticleSystem::interval(std::size_t j, std::size_t m) const {
  if (j == 0 || j > observations || m >= particles) throw ContractViolation("ParticleSystem: index out of range");
  const std::size_t block = substeps * state_dim;
  return std::span<const double>(states[j - 1]).subspan(m * block, block);
}

std::vector<double> ParticleSystem::post_resample_weights(std::size_t j) const {
  if (j == 0 || j > observations) throw ContractViolation("ParticleSystem: index out of range");
  if (resampled[j - 1]) return std::vector<double>(particles, 1.0 / static_cast<double>(particles));
  return weights[j - 1];
}

std::vector<std::size_t> FilterDiagnostics::resample_events() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < resampled.size(); ++j)
    if (resampled[j]) out.push_back(j + 1);
  return out;
}

double FilterDiagnostics::mean_ess() const {
  return ess.empty() ? 0.0 : std::accumulate(ess.begin(), ess.end(), 0.0) / static_cast<double>(ess.size());
}

double FilterDiagnostics::mean_distinct() const {
  if (distinct.empty()) return 0.0;
  double s = 0.0;
  for (auto d : distinct) s += static_cast<double>(d);
  return s / static_cast<double>(distinct.size());
}

AbcKernelWeighter::AbcKernelWeighter(KernelSpec kernel, double delta, std::size_t obs_dim)
    : kernel_(std::move(kernel)), delta_(delta), obs_dim_(obs_dim) {
  if (!(delta > 0.0)) throw std::domain_error("ABC threshold delta must be positive");
}

void AbcKernelWeighter::log_weights(std::size_t, std::span<const double> y_j, std::span<const double>,
                                    std::span<const double> pseudo, std::span<double> out) const {
  if (obs_dim_ == 1) {
    kernel_log_weights(kernel_, y_j[0], pseudo, delta_, out);
    return;
  }
  for (std::size_t m = 0; m < out.size(); ++m)
    out[m] = kernel_log_weight(kernel_, y_j, pseudo.subspan(m * obs_dim_, obs_dim_), delta_);
}

void ObservationDensityWeighter::log_weights(std::size_t, std::span<const double> y_j,
                                             std::span<const double> states, std::span<const double>,
                                             std::span<double> out) const {
  model_.obs_logdensity_batch(y_j, states, theta_, out);
}

std::size_t count_distinct(std::span<const double> states, std::size_t dim, std::span<const std::size_t> selection) {
  if (selection.empty()) return 0;
  if (dim == 1) {
    std::vector<double> v(selection.size());
    for (std::size_t i = 0; i < selection.size(); ++i) v[i] = states[selection[i]];
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  }
  std::vector<std::vector<double>> v(selection.size());
  for (std::size_t i = 0; i < selection.size(); ++i) {
    auto s = states.subspan(selection[i] * dim, dim);
    v[i].assign(s.begin(), s.end());
  }
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

FilterResult run_particle_filter(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                                 const ParameterVector& theta, const FilterSettings& settings,
                                 const IncrementalWeighter& weighter, Rng& rng) {
  const std::size_t M = settings.particles;
  const std::size_t n = grid.n();
  const std::size_t R = grid.substeps();
  const std::size_t dx = model.state_dim();
  const std::size_t dy = model.obs_dim();
  if (M == 0) throw ContractViolation("particle filter: need at least one particle");
  if (!(settings.resample_threshold <= static_cast<double>(M)))
    throw ContractViolation("particle filter: resampling threshold exceeds the particle count");
  if (y.size() != n || y.dim() != dy) throw ContractViolation("particle filter: observations do not match grid/model");

  const bool abc = weighter.simulates_pseudo_observations();
  FilterResult result;
  ParticleSystem& ps = result.system;
  ps.particles = M;
  ps.observations = n;
  ps.substeps = R;
  ps.state_dim = dx;
  ps.obs_dim = dy;
  ps.seed = rng();
  ps.initial_states.assign(M * dx, 0.0);
  ps.states.resize(n);
  ps.ancestors.resize(n);
  ps.log_weights.resize(n);
  ps.weights.resize(n);
  ps.resampled.assign(n, false);
  if (abc) ps.pseudo_observations.resize(n);

  FilterDiagnostics& diag = result.diagnostics;
  diag.ess.resize(n);
  diag.distinct.resize(n);
  diag.resampled.assign(n, false);

  std::vector<std::size_t> identity(M);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  ps.ancestors[0] = identity;

  const std::size_t block = R * dx;
  std::vector<double> times(R + 1);
  std::vector<double> current(M * dx);
  std::vector<double> increments(M);
  // log of the normalized weights carried from the previous step.
  std::vector<double> log_carried(M, -std::log(static_cast<double>(M)));

  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t r = 0; r <= R; ++r) times[r] = grid.fine_time((j - 1) * R + r);
    auto& block_states = ps.states[j - 1];
    block_states.resize(M * block);
    std::vector<double>* pseudo = abc ? &ps.pseudo_observations[j - 1] : nullptr;
    if (pseudo != nullptr) pseudo->resize(M * dy);

    const auto& parents = ps.ancestors[j - 1];
    for (std::size_t m = 0; m < M; ++m) {
      Rng stream = particle_stream(ps.seed, j, m);
      std::span<const double> parent;
      if (j == 1) {
        std::span<double> x0(ps.initial_states.data() + m * dx, dx);
        model.sample_initial(theta, stream, x0);
        parent = x0;
      } else {
        parent = ps.interval(j - 1, parents[m]).subspan((R - 1) * dx, dx);
      }
      std::span<double> out(block_states.data() + m * block, block);
      model.simulate_interval(parent, times, theta, stream, out);
      std::copy_n(out.data() + (R - 1) * dx, dx, current.data() + m * dx);
      if (pseudo != nullptr)
        model.simulate_obs(out.subspan((R - 1) * dx, dx), theta, stream,
                           std::span<double>(pseudo->data() + m * dy, dy));
    }

    weighter.log_weights(j, y.at(j), current, pseudo != nullptr ? std::span<const double>(*pseudo) : std::span<const double>{},
                         increments);

    auto& logw = ps.log_weights[j - 1];
    logw = log_carried;
    simd::add_inplace(logw, increments);
    auto& w = ps.weights[j - 1];
    w.resize(M);
    const double log_total = normalize_log_weights(logw, w);
    if (log_total == -std::numeric_limits<double>::infinity()) throw DegenerateFilterError(j);
    if (std::isnan(log_total)) throw DegenerateFilterError(j);
    diag.log_likelihood += log_total;

    const double e = ess(w);
    diag.ess[j - 1] = e;
    if (e < settings.resample_threshold) {
      Rng stream = resampling_stream(ps.seed, j);
      auto idx = stratified_resample(w, stream);
      ps.resampled[j - 1] = true;
      diag.resampled[j - 1] = true;
      diag.distinct[j - 1] = count_distinct(current, dx, idx);
      std::fill(log_carried.begin(), log_carried.end(), -std::log(static_cast<double>(M)));
      if (j < n) ps.ancestors[j] = std::move(idx);
    } else {
      diag.distinct[j - 1] = count_distinct(current, dx, identity);
      for (std::size_t m = 0; m < M; ++m) log_carried[m] = std::log(w[m]);
      if (j < n) ps.ancestors[j] = identity;
    }
  }
  return result;
}

FilterResult run_abc_smc(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                         const ParameterVector& theta, const FilterSettings& settings, double delta,
                         const KernelSpec& kernel, Rng& rng) {
  AbcKernelWeighter weighter(kernel, delta, model.obs_dim());
  return run_particle_filter(model, grid, y, theta, settings, weighter, rng);
}

FilterResult run_bootstrap(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                           const ParameterVector& theta, const FilterSettings& settings, Rng& rng) {
  ObservationDensityWeighter weighter(model, theta);
  return run_particle_filter(model, grid, y, theta, settings, weighter, rng);
}

LatentPath genealogy_path(const ParticleSystem& ps, std::size_t final_index) {
  const std::size_t n = ps.observations;
  const std::size_t block = ps.substeps * ps.state_dim;
  if (final_index >= ps.particles) throw ContractViolation("genealogy_path: particle index out of range");
  std::vector<double> values(n * block);
  std::size_t b = final_index;
  for (std::size_t j = n; j >= 1; --j) {
    auto src = ps.interval(j, b);
    std::copy(src.begin(), src.end(), values.begin() + static_cast<std::ptrdiff_t>((j - 1) * block));
    b = ps.ancestors[j - 1][b];
  }
  std::vector<double> x0(ps.initial_states.begin() + static_cast<std::ptrdiff_t>(b * ps.state_dim),
                         ps.initial_states.begin() + static_cast<std::ptrdiff_t>((b + 1) * ps.state_dim));
  return LatentPath(ps.state_dim, ps.substeps, std::move(x0), std::move(values));
}

LatentPath sample_genealogy_path(const ParticleSystem& ps, Rng& rng) {
  if (ps.observations == 0) throw ContractViolation("sample_genealogy_path: empty particle system");
  return genealogy_path(ps, sample_index(ps.weights[ps.observations - 1], rng));
}

void write_diagnostics_csv(std::ostream& os, const FilterDiagnostics& d) {
  os << "time_index,ess,distinct_count,resampled\n";
  const auto old = os.precision(17);
  for (std::size_t j = 0; j < d.ess.size(); ++j)
    os << (j + 1) << ',' << d.ess[j] << ',' << d.distinct[j] << ',' << (d.resampled[j] ? 1 : 0) << '\n';
  os.precision(old);
}

}  // namespace saemabc
