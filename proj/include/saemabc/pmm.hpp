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

#ifndef SAEMABC_PMM_HPP
#define SAEMABC_PMM_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "saemabc/mcmc.hpp"
#include "saemabc/model.hpp"
#include "saemabc/particle_filter.hpp"
#include "saemabc/priors.hpp"

namespace saemabc {

/// Returns a (possibly noisy) log-likelihood estimate at theta.
using LikelihoodEstimator = std::function<double(const ParameterVector& theta, Rng& rng)>;

/// Bootstrap-filter log-likelihood estimate.
LikelihoodEstimator bootstrap_likelihood(const StateSpaceModel& model, const TimeGrid& grid,
                                         const ObservationSeries& y, FilterSettings settings);

/// The starting log-likelihood estimate was not finite.
class PmmInitializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PmmSettings {
  std::size_t iterations = 2000;
  double target_acceptance = 0.07;
  /// Working-scale random-walk standard deviations; empty means 0.1 each.
  std::vector<double> proposal_sd;
  /// Adaptation of the global proposal scale stops after this fraction.
  double adapt_fraction = 0.5;
  bool adapt = true;
};

struct PmmStats {
  std::size_t estimator_calls = 0;
  std::size_t proposals_evaluated = 0;
  std::size_t outside_prior = 0;
  /// Proposals whose estimate was -inf or whose filter degenerated.
  std::size_t degenerate = 0;
};

/// Pseudo-marginal Metropolis-Hastings on the working scale.
///
/// Proposals are Gaussian random walks on (log) working coordinates with a
/// diagonal covariance whose global scale is adapted toward the target
/// acceptance rate. The acceptance ratio includes the log-Jacobian of the
/// transform. The estimate of the incumbent state is stored and reused;
/// each evaluated proposal triggers exactly one estimator call.
ChainRecord pmm_run(const StateSpaceModel& model, const PriorSpec& priors, const ParameterVector& theta0,
                    const PmmSettings& settings, const LikelihoodEstimator& estimator, Rng& rng,
                    PmmStats* stats = nullptr);

/// pmm_run with a bootstrap filter of M particles and resampling threshold M_bar.
ChainRecord pmm_run(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                    const PriorSpec& priors, const ParameterVector& theta0, FilterSettings filter,
                    const PmmSettings& settings, Rng& rng, PmmStats* stats = nullptr);

}  // namespace saemabc

#endif  // SAEMABC_PMM_HPP
