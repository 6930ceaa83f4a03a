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

#include <gtest/gtest.h>

#include <cmath>

#include "saemabc/errors.hpp"
#include "saemabc/gibbs.hpp"
#include "saemabc/linear_gaussian.hpp"
#include "saemabc/nonlinear_gaussian.hpp"
#include "saemabc/pmm.hpp"

using namespace saemabc;

namespace {

struct NlgData {
  NonlinearGaussianModel model;
  TimeGrid grid{0.0, 1.0, 20, 1};
  ObservationSeries y;
  PriorSpec priors{Prior::uniform(0.1, 15.0), Prior::uniform(0.1, 15.0)};
  NlgData() {
    Rng rng(11);
    y = simulate_dataset(model, grid, model.make_parameters({2.0, 2.0}), rng).observations;
  }
};

struct LgData {
  LinearGaussianModel model;
  TimeGrid grid;
  ObservationSeries y;
  PriorSpec priors{Prior::uniform(-0.99, 0.99), Prior::uniform(0.2, 3.0), Prior::uniform(0.2, 3.0)};
  explicit LgData(std::size_t n, std::uint64_t seed = 12) : grid(0.0, 1.0, n, 1) {
    Rng rng(seed);
    y = simulate_dataset(model, grid, model.default_parameters(), rng).observations;
  }
};

double batch_means_se(const std::vector<double>& v, std::size_t batches = 50) {
  const std::size_t len = v.size() / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < len; ++i) means[b] += v[b * len + i];
    means[b] /= static_cast<double>(len);
  }
  double m = 0.0;
  for (double x : means) m += x / static_cast<double>(batches);
  double ss = 0.0;
  for (double x : means) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST(Priors, UniformAndFlatLog) {
  const auto u = Prior::uniform(0.1, 15.0);
  EXPECT_DOUBLE_EQ(u.logpdf(1.0), -std::log(14.9));
  EXPECT_EQ(u.logpdf(0.05), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(u.logpdf(15.1), -std::numeric_limits<double>::infinity());
  EXPECT_DOUBLE_EQ(Prior::flat_log().logpdf(2.0), -std::log(2.0));
  EXPECT_EQ(Prior::flat_log().logpdf(0.0), -std::numeric_limits<double>::infinity());
  EXPECT_THROW((void)Prior::uniform(2.0, 1.0), ContractViolation);
  EXPECT_EQ(u.describe(), "uniform(0.1, 15)");
}

TEST(GibbsConditionals, MatchIndependentTranscription) {
  NlgData d;
  Rng rng(1);
  const auto x = simulate_path(d.model, d.grid, d.model.make_parameters({2.0, 2.0}), rng);
  double sx = 0.0, sy = 0.0;
  double prev = 0.0;
  for (std::size_t j = 1; j <= d.y.size(); ++j) {
    const double xi = x.at_sample(j)[0];
    const double e = xi - 2.0 * std::sin(std::exp(prev));
    sx += e * e;
    sy += (d.y.at(j)[0] - xi) * (d.y.at(j)[0] - xi);
    prev = xi;
  }
  const double n = static_cast<double>(d.y.size());
  for (double s : {0.5, 1.7, 4.0}) {
    EXPECT_NEAR(gibbs_conditional_logdensity(GibbsBlock::sigma_x, d.y, x, s, 1.0, d.priors),
                -n * std::log(s) - sx / (2 * s * s) - std::log(14.9), 1e-10);
    EXPECT_NEAR(gibbs_conditional_logdensity(GibbsBlock::sigma_y, d.y, x, 1.0, s, d.priors),
                -n * std::log(s) - sy / (2 * s * s) - std::log(14.9), 1e-10);
  }
  EXPECT_THROW((void)gibbs_conditional_logdensity(GibbsBlock::path, d.y, x, 0.0, 1.0, d.priors), std::domain_error);
}

TEST(GibbsConditionals, ConsistentWithFullPosterior) {
  NlgData d;
  const GibbsSampler g(d.model, d.grid, d.y, d.priors, {});
  Rng rng(2);
  const auto x1 = simulate_path(d.model, d.grid, d.model.make_parameters({2.0, 2.0}), rng);
  const auto x2 = simulate_path(d.model, d.grid, d.model.make_parameters({2.0, 2.0}), rng);
  const auto th_a = d.model.make_parameters({1.3, 2.2});
  const auto th_b = d.model.make_parameters({3.1, 2.2});
  EXPECT_NEAR(gibbs_conditional_logdensity(GibbsBlock::sigma_x, d.y, x1, 1.3, 2.2, d.priors) -
                  gibbs_conditional_logdensity(GibbsBlock::sigma_x, d.y, x1, 3.1, 2.2, d.priors),
              g.log_posterior(th_a, x1) - g.log_posterior(th_b, x1), 1e-9);
  EXPECT_NEAR(gibbs_conditional_logdensity(GibbsBlock::path, d.y, x1, 1.3, 2.2, d.priors) -
                  gibbs_conditional_logdensity(GibbsBlock::path, d.y, x2, 1.3, 2.2, d.priors),
              g.log_posterior(th_a, x1) - g.log_posterior(th_a, x2), 1e-9);
  // The blind proposal ratio keeps only the observation part.
  double obs = 0.0;
  for (std::size_t j = 1; j <= d.y.size(); ++j)
    obs += d.model.obs_logdensity(d.y.at(j), x2.at_sample(j), th_a) - d.model.obs_logdensity(d.y.at(j), x1.at_sample(j), th_a);
  EXPECT_NEAR(g.path_log_ratio(th_a, x2, x1), obs, 1e-10);
}

TEST(GibbsSampler, NoncentralDensityIncludesJacobian) {
  NlgData d;
  const GibbsSampler g(d.model, d.grid, d.y, d.priors, {});
  Rng rng(3);
  const auto th = d.model.make_parameters({1.5, 2.0});
  const auto x = simulate_path(d.model, d.grid, th, rng);
  const auto z = GibbsSampler::scale_path(x, 1.0 / 1.5);
  EXPECT_NEAR(g.noncentral_logdensity(th, z), g.log_posterior(th, x) + 20.0 * std::log(1.5), 1e-9);
}

TEST(GibbsSampler, ScalePathRoundTrip) {
  NlgData d;
  Rng rng(4);
  const auto x = simulate_path(d.model, d.grid, d.model.make_parameters({2.0, 2.0}), rng);
  const auto back = GibbsSampler::scale_path(GibbsSampler::scale_path(x, 3.7), 1.0 / 3.7);
  ASSERT_EQ(back.values().size(), x.values().size());
  for (std::size_t i = 0; i < x.values().size(); ++i) EXPECT_NEAR(back.values()[i], x.values()[i], 1e-14 * (1 + std::abs(x.values()[i])));
  EXPECT_EQ(back.initial_state(), x.initial_state());
}

TEST(GibbsSampler, ZeroStepAcceptsParameterMoves) {
  NlgData d;
  const GibbsSampler g(d.model, d.grid, d.y, d.priors, {});
  Rng rng(5);
  auto state = g.initial_state(d.model.make_parameters({2.0, 2.0}), rng);
  std::vector<bool> acc;
  const auto probs = g.sweep(state, {0.0, 0.0}, rng, acc);
  EXPECT_DOUBLE_EQ(probs[1], 1.0);
  EXPECT_DOUBLE_EQ(probs[2], 1.0);
  EXPECT_TRUE(acc[1] && acc[2]);
  EXPECT_NEAR(state.theta[0], 2.0, 1e-15);
}

TEST(GibbsSampler, PriorViolationIsRejected) {
  NlgData d;
  const GibbsSampler g(d.model, d.grid, d.y, {Prior::uniform(1.9, 2.1), Prior::uniform(1.9, 2.1)}, {});
  Rng rng(6);
  auto state = g.initial_state(d.model.make_parameters({2.0, 2.0}), rng);
  EXPECT_EQ(g.log_posterior(d.model.make_parameters({2.5, 2.0}), state.path), -std::numeric_limits<double>::infinity());
  std::vector<bool> acc;
  for (int i = 0; i < 200; ++i) {
    (void)g.sweep(state, {1.0, 1.0}, rng, acc);
    ASSERT_GE(state.theta[0], 1.9);
    ASSERT_LE(state.theta[0], 2.1);
    ASSERT_GE(state.theta[1], 1.9);
    ASSERT_LE(state.theta[1], 2.1);
  }
}

TEST(GibbsSampler, RejectsBadConfiguration) {
  NlgData d;
  EXPECT_THROW(GibbsSampler(d.model, d.grid, d.y, {Prior::flat_log()}, {}), ContractViolation);
  GibbsSettings s;
  s.state_scale_index = 5;
  EXPECT_THROW(GibbsSampler(d.model, d.grid, d.y, d.priors, s), ContractViolation);
}

TEST(GibbsSampler, MixesOnLinearGaussian) {
  LgData d(10);
  GibbsSettings s;
  s.iterations = 5000;
  s.state_scale_index = 1;
  const GibbsSampler g(d.model, d.grid, d.y, d.priors, s);
  const std::vector<std::vector<double>> starts = {{-0.5, 0.4, 2.5}, {0.9, 2.5, 0.4}, {0.0, 1.0, 1.0}, {0.5, 2.0, 2.0}};
  std::vector<std::vector<std::vector<double>>> cols(3);
  for (std::size_t c = 0; c < starts.size(); ++c) {
    Rng rng(100 + c);
    const auto chain = g.run(d.model.make_parameters(starts[c]), rng);
    for (std::size_t i = 0; i < 3; ++i) cols[i].push_back(chain.column(i, 2500));
  }
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(gelman_rubin(cols[i]), 1.1) << i;
}

TEST(Pmm, TinyProposalIsMostlyAccepted) {
  LgData d(20);
  PmmSettings s;
  s.iterations = 500;
  s.proposal_sd = {1e-4, 1e-4, 1e-4};
  s.adapt = false;
  Rng rng(7);
  const auto chain = pmm_run(d.model, d.grid, d.y, d.priors, d.model.default_parameters(), {5000, 1000}, s, rng);
  EXPECT_GT(chain.acceptance_rate(0), 0.5);
}

TEST(Pmm, EstimatorCallAccounting) {
  LgData d(10);
  PmmSettings s;
  s.iterations = 300;
  s.proposal_sd = {0.5, 0.5, 0.5};
  PmmStats st;
  Rng rng(8);
  const LikelihoodEstimator exact = [&](const ParameterVector& th, Rng&) { return kalman_loglik(d.y, th); };
  (void)pmm_run(d.model, d.priors, d.model.default_parameters(), s, exact, rng, &st);
  EXPECT_EQ(st.estimator_calls, st.proposals_evaluated + 1);
  EXPECT_EQ(st.proposals_evaluated + st.outside_prior, 300u);
  EXPECT_GT(st.outside_prior, 0u);
}

TEST(Pmm, StartOutsidePriorFails) {
  LgData d(10);
  Rng rng(9);
  const LikelihoodEstimator exact = [&](const ParameterVector& th, Rng&) { return kalman_loglik(d.y, th); };
  EXPECT_THROW((void)pmm_run(d.model, d.priors, d.model.make_parameters({0.5, 5.0, 1.0}), {}, exact, rng),
               PmmInitializationError);
  const LikelihoodEstimator broken = [](const ParameterVector&, Rng&) { return -std::numeric_limits<double>::infinity(); };
  EXPECT_THROW((void)pmm_run(d.model, d.priors, d.model.default_parameters(), {}, broken, rng), PmmInitializationError);
}

TEST(Pmm, ExactLikelihoodMatchesQuadraturePosterior) {
  LgData d(20, 13);
  // Posterior means by midpoint quadrature over the prior box.
  const int na = 80, ns = 80;
  double z = 0.0, ma = 0.0, mx = 0.0, my = 0.0;
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> ll(static_cast<std::size_t>(na * ns * ns));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < ns; ++j)
      for (int k = 0; k < ns; ++k) {
        const double a = -0.99 + 1.98 * (i + 0.5) / na, sx = 0.2 + 2.8 * (j + 0.5) / ns, sy = 0.2 + 2.8 * (k + 0.5) / ns;
        const double v = kalman_loglik(d.y, a, sx * sx, sy * sy);
        ll[static_cast<std::size_t>((i * ns + j) * ns + k)] = v;
        lmax = std::max(lmax, v);
      }
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < ns; ++j)
      for (int k = 0; k < ns; ++k) {
        const double w = std::exp(ll[static_cast<std::size_t>((i * ns + j) * ns + k)] - lmax);
        z += w;
        ma += w * (-0.99 + 1.98 * (i + 0.5) / na);
        mx += w * (0.2 + 2.8 * (j + 0.5) / ns);
        my += w * (0.2 + 2.8 * (k + 0.5) / ns);
      }
  const std::vector<double> reference = {ma / z, mx / z, my / z};

  PmmSettings s;
  s.iterations = 100000;
  s.target_acceptance = 0.25;
  s.proposal_sd = {0.2, 0.3, 0.3};
  Rng rng(10);
  const LikelihoodEstimator exact = [&](const ParameterVector& th, Rng&) { return kalman_loglik(d.y, th); };
  const auto chain = pmm_run(d.model, d.priors, d.model.default_parameters(), s, exact, rng);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto col = chain.column(i, 50000);
    EXPECT_LT(std::abs(mean_of(col) - reference[i]), 3.0 * batch_means_se(col)) << i;
  }
}

TEST(Pmm, MixesOnLinearGaussian) {
  LgData d(10);
  PmmSettings s;
  s.iterations = 5000;
  s.target_acceptance = 0.2;
  s.proposal_sd = {0.2, 0.3, 0.3};
  const std::vector<std::vector<double>> starts = {{-0.5, 0.4, 2.5}, {0.9, 2.5, 0.4}, {0.0, 1.0, 1.0}, {0.5, 2.0, 2.0}};
  std::vector<std::vector<std::vector<double>>> cols(3);
  for (std::size_t c = 0; c < starts.size(); ++c) {
    Rng rng(200 + c);
    const auto chain = pmm_run(d.model, d.grid, d.y, d.priors, d.model.make_parameters(starts[c]), {200, 40}, s, rng);
    for (std::size_t i = 0; i < 3; ++i) cols[i].push_back(chain.column(i, 2500));
  }
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(gelman_rubin(cols[i]), 1.1) << i;
}

TEST(McmcUtilities, GelmanRubinAndAdapter) {
  EXPECT_THROW((void)gelman_rubin({{1.0, 2.0}}), ContractViolation);
  EXPECT_THROW((void)gelman_rubin({{1.0, 2.0}, {1.0}}), ContractViolation);
  Rng rng(14);
  std::vector<std::vector<double>> same(4, std::vector<double>(2000));
  for (auto& c : same)
    for (double& v : c) v = rng.normal();
  EXPECT_LT(gelman_rubin(same), 1.01);
  auto apart = same;
  for (double& v : apart[0]) v += 5.0;
  EXPECT_GT(gelman_rubin(apart), 1.5);

  ScaleAdapter up(1.0, 0.44, 100);
  for (std::size_t b = 1; b <= 100; ++b) up.update(b, 1.0);
  EXPECT_GT(up.scale(), 1.0);
  const double frozen = up.scale();
  up.update(101, 0.0);
  EXPECT_EQ(up.scale(), frozen);
}
