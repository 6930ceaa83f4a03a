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

#include "saemabc/gibbs.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "saemabc/errors.hpp"
#include "saemabc/nonlinear_gaussian.hpp"

namespace saemabc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double accept_probability(double log_ratio) {
  if (std::isnan(log_ratio)) return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

}  // namespace

double gibbs_conditional_logdensity(GibbsBlock which, const ObservationSeries& y, const LatentPath& x,
                                    double sigma_x, double sigma_y, const PriorSpec& priors) {
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) throw std::domain_error("gibbs conditional: sigmas must be positive");
  const auto s = nlg_sufficient_stats(y, x);
  const double n = static_cast<double>(y.size());
  switch (which) {
    case GibbsBlock::sigma_x:
      return -n * std::log(sigma_x) - s[0] / (2.0 * sigma_x * sigma_x) + priors.at(0).logpdf(sigma_x);
    case GibbsBlock::sigma_y:
      return -n * std::log(sigma_y) - s[1] / (2.0 * sigma_y * sigma_y) + priors.at(1).logpdf(sigma_y);
    case GibbsBlock::path:
      return -n * std::log(sigma_x * sigma_y) - s[1] / (2.0 * sigma_y * sigma_y) - s[0] / (2.0 * sigma_x * sigma_x);
  }
  return kNegInf;
}

GibbsSampler::GibbsSampler(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                           PriorSpec priors, GibbsSettings settings)
    : model_(model), grid_(grid), y_(y), priors_(std::move(priors)), settings_(settings) {
  if (!model.has_transition_density())
    throw ContractViolation("Gibbs sampler needs a model with a transition density");
  if (priors_.size() != model.parameter_specs().size())
    throw ContractViolation("Gibbs sampler: one prior per parameter is required");
  if (settings_.state_scale_index >= priors_.size())
    throw ContractViolation("Gibbs sampler: state scale index out of range");
  if (model.parameter_specs()[settings_.state_scale_index].domain != Domain::positive)
    throw ContractViolation("Gibbs sampler: the state scale must be a positive parameter");
  if (settings_.iterations == 0) throw ContractViolation("Gibbs sampler: iterations must be positive");
}

GibbsState GibbsSampler::initial_state(const ParameterVector& theta0, Rng& rng) const {
  return {theta0, simulate_path(model_, grid_, theta0, rng)};
}

LatentPath GibbsSampler::scale_path(const LatentPath& x, double factor) {
  std::vector<double> v = x.values();
  for (double& e : v) e *= factor;
  return LatentPath(x.dim(), x.substeps(), x.initial_state(), std::move(v));
}

double GibbsSampler::path_log_ratio(const ParameterVector& theta, const LatentPath& proposal,
                                    const LatentPath& current) const {
  double total = 0.0;
  for (std::size_t j = 1; j <= y_.size(); ++j)
    total += model_.obs_logdensity(y_.at(j), proposal.at_sample(j), theta) -
             model_.obs_logdensity(y_.at(j), current.at_sample(j), theta);
  return total;
}

double GibbsSampler::log_posterior(const ParameterVector& theta, const LatentPath& path) const {
  const double lp = prior_logpdf(priors_, theta);
  if (lp == kNegInf) return kNegInf;
  return complete_loglik(model_, grid_, y_, path, theta) + lp;
}

double GibbsSampler::noncentral_logdensity(const ParameterVector& theta, const LatentPath& standardized) const {
  const double s = theta[settings_.state_scale_index];
  const double lp = prior_logpdf(priors_, theta);
  if (lp == kNegInf) return kNegInf;
  const double jac = static_cast<double>(standardized.values().size()) * std::log(s);
  return complete_loglik(model_, grid_, y_, scale_path(standardized, s), theta) + jac + lp;
}

std::vector<double> GibbsSampler::sweep(GibbsState& state, const std::vector<double>& steps, Rng& rng,
                                        std::vector<bool>& accepted) const {
  const std::size_t p = state.theta.size();
  std::vector<double> probs(p + 1, 0.0);
  accepted.assign(p + 1, false);

  // (i) blind block proposal for the path.
  LatentPath proposal = simulate_path(model_, grid_, state.theta, rng);
  const double a_path = accept_probability(path_log_ratio(state.theta, proposal, state.path));
  probs[0] = a_path;
  if (rng.uniform() < a_path) {
    state.path = std::move(proposal);
    accepted[0] = true;
  }

  const std::size_t si = settings_.state_scale_index;
  const std::vector<ParameterSpec> specs = state.theta.specs();
  auto propose = [&](std::size_t i, double step) {
    const double w = to_working(specs[i].domain, state.theta[i]) + step * rng.normal();
    const double v = to_natural(specs[i].domain, w);
    // Log-Jacobian of the working-scale walk for positive components.
    const double jac = specs[i].domain == Domain::positive ? std::log(v) - std::log(state.theta[i]) : 0.0;
    return std::pair<double, double>{v, jac};
  };

  // (ii)-(iii) non-central update of the state scale.
  const double s_old = state.theta[si];
  LatentPath standardized = scale_path(state.path, 1.0 / s_old);
  {
    const auto [v, jac] = propose(si, steps[si]);
    const ParameterVector cand = state.theta.with(si, v);
    const double num = noncentral_logdensity(cand, standardized);
    const double den = noncentral_logdensity(state.theta, standardized);
    const double a = num == kNegInf ? 0.0 : accept_probability(num - den + jac);
    probs[si + 1] = a;
    if (rng.uniform() < a) {
      state.theta = cand;
      accepted[si + 1] = true;
    }
  }
  // (iv) back to the centred path.
  state.path = scale_path(standardized, state.theta[si]);

  // Remaining components given the centred path.
  for (std::size_t i = 0; i < p; ++i) {
    if (i == si) continue;
    const auto [v, jac] = propose(i, steps[i]);
    if (specs[i].domain == Domain::positive && !(v > 0.0)) continue;
    const ParameterVector cand = state.theta.with(i, v);
    const double num = log_posterior(cand, state.path);
    const double den = log_posterior(state.theta, state.path);
    const double a = num == kNegInf ? 0.0 : accept_probability(num - den + jac);
    probs[i + 1] = a;
    if (rng.uniform() < a) {
      state.theta = cand;
      accepted[i + 1] = true;
    }
  }
  return probs;
}

ChainRecord GibbsSampler::run(const ParameterVector& theta0, Rng& rng) const {
  ChainRecord chain;
  chain.parameter_names = theta0.names();
  chain.target_name = "log_posterior";
  chain.step_names.push_back("path");
  for (const auto& n : chain.parameter_names) chain.step_names.push_back(n);

  const std::size_t p = theta0.size();
  const auto freeze = static_cast<std::size_t>(settings_.adapt_fraction * static_cast<double>(settings_.iterations));
  std::vector<ScaleAdapter> adapters(p, ScaleAdapter(settings_.initial_step, settings_.target_acceptance, freeze));

  GibbsState state = initial_state(theta0, rng);
  chain.draws.reserve(settings_.iterations);
  std::vector<double> steps(p);
  std::vector<bool> accepted;
  for (std::size_t b = 1; b <= settings_.iterations; ++b) {
    for (std::size_t i = 0; i < p; ++i) steps[i] = adapters[i].scale();
    const auto probs = sweep(state, steps, rng, accepted);
    for (std::size_t i = 0; i < p; ++i) adapters[i].update(b, probs[i + 1]);
    chain.draws.push_back(state.theta.values());
    chain.target.push_back(log_posterior(state.theta, state.path));
    chain.accepted.push_back(accepted);
  }
  return chain;
}

}  // namespace saemabc
