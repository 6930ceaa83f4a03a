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
#include <limits>
#include <sstream>

#include "saemabc/errors.hpp"
#include "saemabc/fisher.hpp"
#include "saemabc/linear_gaussian.hpp"
#include "saemabc/nonlinear_gaussian.hpp"
#include "saemabc/saem.hpp"

using namespace saemabc;

TEST(StepSize, WarmupThenHarmonicDecay) {
  const StepSizeSchedule s(400, 300);
  EXPECT_EQ(gamma(s, 1), 1.0);
  EXPECT_EQ(gamma(s, 300), 1.0);
  EXPECT_EQ(gamma(s, 301), 1.0);
  EXPECT_DOUBLE_EQ(gamma(s, 310), 0.1);
  EXPECT_THROW((void)gamma(s, 0), ContractViolation);
  EXPECT_THROW((void)gamma(s, 401), ContractViolation);
}

TEST(SaUpdate, ReplacementFixedPointAndMidpoint) {
  const std::vector<double> prev = {1.5, -2.0};
  const std::vector<double> sc = {0.25, 7.0};
  EXPECT_EQ(sa_update(prev, sc, 1.0), sc);
  EXPECT_EQ(sa_update(prev, prev, 0.3), prev);
  EXPECT_EQ(sa_update(std::vector<double>{0.0}, std::vector<double>{4.0}, 0.5), std::vector<double>{2.0});
  EXPECT_THROW((void)sa_update(prev, std::vector<double>{1.0}, 0.5), ContractViolation);
}

TEST(Fisher, FirstIterationRecoversHessian) {
  Eigen::VectorXd g(2);
  g << 0.3, -1.2;
  Eigen::MatrixXd h(2, 2);
  h << -2.0, 0.4, 0.4, -3.0;
  const auto st = fisher_update(FisherState::zero(2), g, h, 1.0);
  EXPECT_TRUE(st.G.isApprox(g));
  EXPECT_TRUE(st.H.isApprox(h + g * g.transpose()));
  EXPECT_LT((st.F - h).norm(), 1e-14);
}

TEST(Fisher, ZeroGradientIsAFixedPointOfH) {
  FisherState st = FisherState::zero(2);
  st.G << 1.0, 2.0;
  st.H << -4.0, 1.0, 1.0, -5.0;
  const auto next = fisher_update(st, Eigen::VectorXd::Zero(2), st.H, 0.25);
  EXPECT_TRUE(next.G.isApprox(st.G * 0.75));
  EXPECT_TRUE(next.H.isApprox(st.H));
}

TEST(Fisher, ConvergesToGaussianInformation) {
  // Fully observed i.i.d. N(0, s2) data at the MLE.
  Rng rng(1);
  const int n = 40;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = 1.7 * rng.normal();
    ss += v * v;
  }
  const double s2 = ss / n;
  Eigen::VectorXd g(1);
  g << -n / (2.0 * s2) + ss / (2.0 * s2 * s2);
  Eigen::MatrixXd h(1, 1);
  h << n / (2.0 * s2 * s2) - ss / (s2 * s2 * s2);
  const StepSizeSchedule sched(500, 100);
  FisherState st = FisherState::zero(1);
  for (std::size_t k = 1; k <= 500; ++k) st = fisher_update(st, g, h, sched.gamma(k));
  EXPECT_NEAR(st.F(0, 0), -n / (2.0 * s2 * s2), 1e-9 * n / (s2 * s2));
}

TEST(Fisher, NonFiniteInputNamesTheEntry) {
  Eigen::VectorXd g(2);
  g << 0.0, std::numeric_limits<double>::quiet_NaN();
  try {
    (void)fisher_update(FisherState::zero(2), g, Eigen::MatrixXd::Zero(2, 2), 0.5);
    FAIL();
  } catch (const ContractViolation& e) {
    EXPECT_NE(std::string(e.what()).find("gradient entry 1"), std::string::npos) << e.what();
  }
}

TEST(StandardErrors, KnownInverses) {
  Eigen::MatrixXd f1(1, 1);
  f1 << -4.0;
  auto se = standard_errors(f1);
  EXPECT_TRUE(se.valid);
  EXPECT_DOUBLE_EQ(se.values[0], 0.5);
  se = standard_errors(-Eigen::MatrixXd::Identity(2, 2));
  EXPECT_EQ(se.values, (std::vector<double>{1.0, 1.0}));
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  se = standard_errors(bad);
  EXPECT_FALSE(se.valid);
  EXPECT_TRUE(std::isnan(se.values[0]) && std::isnan(se.values[1]));
  EXPECT_FALSE(se.warning.empty());
}

TEST(StandardErrors, ScaleConversions) {
  // Variance coordinate to SD: d(v)/d(sigma) = 2 sigma.
  const auto nat = convert_standard_errors({0.4}, {2.0 * 2.0});
  EXPECT_DOUBLE_EQ(nat[0], 0.1);
  const NonlinearGaussianModel m;
  const auto w = working_scale_standard_errors({0.1, 0.3}, m.make_parameters({2.0, 3.0}));
  EXPECT_DOUBLE_EQ(w[0], 0.05);
  EXPECT_DOUBLE_EQ(w[1], 0.1);
}

namespace {

struct NlgSetup {
  NonlinearGaussianModel model;
  TimeGrid grid{0.0, 1.0, 50, 1};
  ObservationSeries y;
  NlgSetup() {
    Rng rng(20260101);
    y = simulate_dataset(model, grid, model.make_parameters({std::sqrt(5.0), std::sqrt(5.0)}), rng).observations;
  }
};

}  // namespace

TEST(RunSaem, DeterministicUnderSeed) {
  NlgSetup s;
  const AbcFilterSpec spec{KernelSpec::gaussian(), ThresholdSchedule({{2.0, 20}, {1.0, 20}}), {200, 40}};
  const auto th0 = s.model.make_parameters({3.0, 1.5});
  Rng a(5), b(5);
  const auto ra = run_saem(s.model, s.grid, s.y, th0, StepSizeSchedule(40, 30), spec, a);
  const auto rb = run_saem(s.model, s.grid, s.y, th0, StepSizeSchedule(40, 30), spec, b);
  std::ostringstream ta, tb;
  write_trace_csv(ta, ra.theta.names(), ra.trace);
  write_trace_csv(tb, rb.theta.names(), rb.trace);
  EXPECT_EQ(ta.str(), tb.str());
  EXPECT_EQ(ra.theta, rb.theta);
  EXPECT_EQ(ta.str().substr(0, ta.str().find('\n')), "iteration,gamma,delta,sigma_x,sigma_y,ess_mean,distinct_mean");
}

TEST(RunSaem, ScheduleLengthMustMatchK) {
  NlgSetup s;
  const AbcFilterSpec spec{KernelSpec::gaussian(), ThresholdSchedule::constant(1.0, 30), {100, 20}};
  Rng rng(1);
  EXPECT_THROW((void)run_saem(s.model, s.grid, s.y, s.model.make_parameters({1.0, 1.0}), StepSizeSchedule(40, 30),
                              spec, rng),
               ContractViolation);
}

TEST(RunSaem, WarmupReplacesStatisticsAndFisherStaysSymmetric) {
  NlgSetup s;
  const StepSizeSchedule sched(60, 40);
  const AbcFilterSpec spec{KernelSpec::gaussian(), ThresholdSchedule::constant(1.0, 60), {200, 40}};
  std::size_t checked = 0;
  SaemObserver obs;
  obs.on_iteration = [&](std::size_t k, const LatentPath& path, std::span<const double> stat, const FisherState* f) {
    if (k <= 40) {
      const auto sc = s.model.sufficient_stats(s.y, path, s.grid);
      ASSERT_EQ(sc.size(), stat.size());
      for (std::size_t i = 0; i < sc.size(); ++i) EXPECT_EQ(stat[i], sc[i]);
    }
    ASSERT_NE(f, nullptr);
    EXPECT_EQ(f->F, f->F.transpose());
    EXPECT_LT(f->asymmetry, 1e-8);
    ++checked;
  };
  Rng rng(2);
  const auto res = run_saem(s.model, s.grid, s.y, s.model.make_parameters({2.0, 2.0}), sched, spec, rng, &obs);
  EXPECT_EQ(checked, 60u);
  EXPECT_EQ(res.trace.size(), 60u);
  EXPECT_EQ(res.se_natural.size(), 2u);
}

TEST(RunSaem, BootstrapTraceRecordsNanDelta) {
  NlgSetup s;
  Rng rng(3);
  const auto res = run_saem(s.model, s.grid, s.y, s.model.make_parameters({2.0, 2.0}), StepSizeSchedule(5, 3),
                            BootstrapFilterSpec{{100, 20}}, rng);
  for (const auto& row : res.trace) EXPECT_TRUE(std::isnan(row.delta));
}

TEST(RunSaem, FilterSwapOnlyChangesTheWeighting) {
  // A custom weighter that reuses the observation density reproduces the bootstrap run exactly.
  NlgSetup s;
  const auto th0 = s.model.make_parameters({2.0, 2.5});
  const StepSizeSchedule sched(30, 20);
  std::size_t factory_calls = 0;
  CustomFilterSpec custom{[&](const ParameterVector& theta, std::size_t) {
                            ++factory_calls;
                            return std::make_unique<ObservationDensityWeighter>(s.model, theta);
                          },
                          {150, 30},
                          {}};
  Rng a(4), b(4);
  const auto rc = run_saem(s.model, s.grid, s.y, th0, sched, custom, a);
  const auto rb = run_saem(s.model, s.grid, s.y, th0, sched, BootstrapFilterSpec{{150, 30}}, b);
  EXPECT_EQ(factory_calls, 30u);
  ASSERT_EQ(rc.trace.size(), rb.trace.size());
  for (std::size_t k = 0; k < rc.trace.size(); ++k) EXPECT_EQ(rc.trace[k].natural, rb.trace[k].natural);
}

TEST(RunSaem, NoiseFreeSelfConsistency) {
  const NonlinearGaussianModel m;
  const TimeGrid g(0.0, 1.0, 30, 1);
  const auto truth = m.make_parameters({1e-6, 1e-6});
  Rng data(6);
  const auto y = simulate_dataset(m, g, truth, data).observations;
  Rng rng(7);
  const auto res = run_saem(m, g, y, truth, StepSizeSchedule(40, 20), BootstrapFilterSpec{{200, 40}}, rng);
  for (std::size_t k = 20; k < res.trace.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) EXPECT_LT(std::abs(res.trace[k].natural[i] - truth[i]), 1e-3);
}

TEST(RunSaem, DegenerateFilterCarriesIterationAndTime) {
  NlgSetup s;
  const AbcFilterSpec spec{KernelSpec::uniform(), ThresholdSchedule::constant(1e-9, 5), {10, 2}};
  Rng rng(8);
  try {
    (void)run_saem(s.model, s.grid, s.y, s.model.make_parameters({1.0, 1.0}), StepSizeSchedule(5, 3), spec, rng);
    FAIL();
  } catch (const SaemError& e) {
    EXPECT_EQ(e.iteration(), 1u);
    EXPECT_EQ(e.time_index(), 1u);
  }
}

TEST(RunSaem, StepNormShrinksAfterWarmup) {
  NlgSetup s;
  const AbcFilterSpec spec{KernelSpec::gaussian(), ThresholdSchedule({{2.0, 80}, {1.7, 70}, {1.3, 50}, {1.0, 200}}),
                           {1000, 200}};
  Rng rng(9);
  const auto res = run_saem(s.model, s.grid, s.y, s.model.make_parameters({3.0, 3.0}), StepSizeSchedule(400, 300),
                            spec, rng);
  auto step = [&](std::size_t k) {
    double d = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const double e = res.trace[k].natural[i] - res.trace[k - 1].natural[i];
      d += e * e;
    }
    return std::sqrt(d);
  };
  // trace[k] holds iteration k + 1; step(k) is the move into iteration k + 1.
  double early = 0.0, late = 0.0;
  for (std::size_t k = 299; k <= 349; ++k) early += step(k) / 51.0;
  for (std::size_t k = 350; k <= 399; ++k) late += step(k) / 50.0;
  EXPECT_LT(late, 0.1 * early);
}

TEST(RunSaem, LinearGaussianEstimatesAreSensible) {
  const LinearGaussianModel m;
  const TimeGrid g(0.0, 1.0, 200, 1);
  Rng data(10);
  const auto y = simulate_dataset(m, g, m.default_parameters(), data).observations;
  Rng rng(11);
  const auto res = run_saem(m, g, y, m.make_parameters({0.3, 2.0, 2.0}), StepSizeSchedule(200, 150),
                            BootstrapFilterSpec{{500, 100}}, rng);
  EXPECT_NEAR(res.theta[0], 0.8, 0.15);
  EXPECT_TRUE(res.se.valid) << res.se.warning;
}
