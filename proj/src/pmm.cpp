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

#include "saemabc/pmm.hpp"

#include <cmath>
#include <limits>

#include "saemabc/errors.hpp"

namespace saemabc {

LikelihoodEstimator bootstrap_likelihood(const StateSpaceModel& model, const TimeGrid& grid,
                                         const ObservationSeries& y, FilterSettings settings) {
  return [&model, grid, &y, settings](const ParameterVector& theta, Rng& rng) {
    return run_bootstrap(model, grid, y, theta, settings, rng).diagnostics.log_likelihood;
  };
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_jacobian(const ParameterVector& theta) {
  double total = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta.specs()[i].domain == Domain::positive) total += std::log(theta[i]);
  return total;
}

double safe_estimate(const LikelihoodEstimator& estimator, const ParameterVector& theta, Rng& rng, PmmStats& stats) {
  ++stats.estimator_calls;
  try {
    const double v = estimator(theta, rng);
    return std::isnan(v) ? kNegInf : v;
  } catch (const DegenerateFilterError&) {
    return kNegInf;
  }
}

}  // namespace

ChainRecord pmm_run(const StateSpaceModel& model, const PriorSpec& priors, const ParameterVector& theta0,
                    const PmmSettings& settings, const LikelihoodEstimator& estimator, Rng& rng, PmmStats* stats) {
  const std::size_t p = theta0.size();
  if (priors.size() != p) throw ContractViolation("pmm_run: one prior per parameter is required");
  if (settings.iterations == 0) throw ContractViolation("pmm_run: iterations must be positive");
  std::vector<double> sd = settings.proposal_sd.empty() ? std::vector<double>(p, 0.1) : settings.proposal_sd;
  if (sd.size() != p) throw ContractViolation("pmm_run: proposal_sd needs one entry per parameter");
  if (p != model.parameter_specs().size()) throw ContractViolation("pmm_run: starting value does not fit the model");

  PmmStats local;
  PmmStats& st = stats != nullptr ? *stats : local;
  st = {};

  ParameterVector theta = theta0;
  double log_prior = prior_logpdf(priors, theta);
  if (log_prior == kNegInf) throw PmmInitializationError("pmm_run: starting value outside the prior support");
  double loglik = safe_estimate(estimator, theta, rng, st);
  if (!std::isfinite(loglik))
    throw PmmInitializationError("pmm_run: log-likelihood estimate at the starting value is not finite");

  const auto freeze = settings.adapt
                          ? static_cast<std::size_t>(settings.adapt_fraction * static_cast<double>(settings.iterations))
                          : 0;
  ScaleAdapter adapter(1.0, settings.target_acceptance, freeze);

  ChainRecord chain;
  chain.parameter_names = theta.names();
  chain.target_name = "loglik_estimate";
  chain.step_names = {"theta"};
  chain.draws.reserve(settings.iterations);

  const std::vector<ParameterSpec> specs = theta.specs();
  for (std::size_t b = 1; b <= settings.iterations; ++b) {
    const double scale = adapter.scale();
    std::vector<double> w = theta.to_working();
    for (std::size_t i = 0; i < p; ++i) w[i] += scale * sd[i] * rng.normal();
    const ParameterVector cand = ParameterVector::from_working(specs, w);
    double prob = 0.0;
    bool accepted = false;
    const double cand_prior = prior_logpdf(priors, cand);
    if (cand_prior == kNegInf) {
      ++st.outside_prior;
    } else {
      ++st.proposals_evaluated;
      const double cand_loglik = safe_estimate(estimator, cand, rng, st);
      if (cand_loglik == kNegInf) {
        ++st.degenerate;
      } else {
        const double log_ratio =
            cand_loglik + cand_prior + log_jacobian(cand) - (loglik + log_prior + log_jacobian(theta));
        prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
        if (rng.uniform() < prob) {
          theta = cand;
          loglik = cand_loglik;
          log_prior = cand_prior;
          accepted = true;
        }
      }
    }
    adapter.update(b, prob);
    chain.draws.push_back(theta.values());
    chain.target.push_back(loglik);
    chain.accepted.push_back({accepted});
  }
  return chain;
}

ChainRecord pmm_run(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                    const PriorSpec& priors, const ParameterVector& theta0, FilterSettings filter,
                    const PmmSettings& settings, Rng& rng, PmmStats* stats) {
  return pmm_run(model, priors, theta0, settings, bootstrap_likelihood(model, grid, y, filter), rng, stats);
}

}  // namespace saemabc
