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

#ifndef SAEMABC_GIBBS_HPP
#define SAEMABC_GIBBS_HPP

#include <cstddef>
#include <vector>

#include "saemabc/mcmc.hpp"
#include "saemabc/model.hpp"
#include "saemabc/priors.hpp"

namespace saemabc {

/// Appendix conditionals of the nonlinear Gaussian model, up to additive constants.
enum class GibbsBlock { sigma_x, sigma_y, path };

/// log p(which | rest, Y) for the nonlinear Gaussian model with standard
/// deviations sigma_x, sigma_y. Priors apply to the sigma blocks only.
double gibbs_conditional_logdensity(GibbsBlock which, const ObservationSeries& y, const LatentPath& x,
                                    double sigma_x, double sigma_y, const PriorSpec& priors);

struct GibbsSettings {
  std::size_t iterations = 10000;
  /// Parameter updated through the non-central path X* = X / theta[i].
  std::size_t state_scale_index = 0;
  /// Random-walk step on the working scale, adapted per parameter.
  double initial_step = 0.2;
  double target_acceptance = 0.44;
  /// Adaptation stops after this fraction of the iterations.
  double adapt_fraction = 0.5;
};

struct GibbsState {
  ParameterVector theta;
  LatentPath path;
};

/// Metropolis-within-Gibbs with a blind block proposal for the path and a
/// non-central parametrization for the state-noise scale.
///
/// One sweep: (i) propose X# by forward simulation at theta and accept with
/// ratio p(Y | X#) / p(Y | X); (ii) set X* = X / s, where s is the
/// state-noise scale; (iii) update s given X* and every other component
/// given X by log-scale random walks; (iv) set X = s X*. Needs a model with
/// a transition density.
class GibbsSampler {
 public:
  GibbsSampler(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y, PriorSpec priors,
               GibbsSettings settings);

  /// theta0 with a path simulated forward at theta0.
  [[nodiscard]] GibbsState initial_state(const ParameterVector& theta0, Rng& rng) const;

  /// log p(Y | X#) - log p(Y | X).
  [[nodiscard]] double path_log_ratio(const ParameterVector& theta, const LatentPath& proposal,
                                      const LatentPath& current) const;
  /// Log-density of the state scale given X*: complete log-likelihood at
  /// X = s X*, plus N d_x log s, plus the prior.
  [[nodiscard]] double noncentral_logdensity(const ParameterVector& theta, const LatentPath& standardized) const;
  /// Complete log-likelihood plus prior log-density.
  [[nodiscard]] double log_posterior(const ParameterVector& theta, const LatentPath& path) const;

  /// X / s and s X on states 1..N; X_0 is left unchanged.
  [[nodiscard]] static LatentPath scale_path(const LatentPath& x, double factor);

  /// Run a chain from theta0; the record holds one row per sweep.
  [[nodiscard]] ChainRecord run(const ParameterVector& theta0, Rng& rng) const;

  /// One sweep with the given per-parameter step sizes. Returns the
  /// acceptance probabilities (path first, then each parameter).
  std::vector<double> sweep(GibbsState& state, const std::vector<double>& steps, Rng& rng,
                            std::vector<bool>& accepted) const;

 private:
  const StateSpaceModel& model_;
  TimeGrid grid_;
  const ObservationSeries& y_;
  PriorSpec priors_;
  GibbsSettings settings_;
};

}  // namespace saemabc

#endif  // SAEMABC_GIBBS_HPP
