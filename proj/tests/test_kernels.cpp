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
#include <numeric>
#include <vector>

#include "saemabc/errors.hpp"
#include "saemabc/kernels.hpp"
#include "saemabc/resampling.hpp"
#include "saemabc/simd.hpp"

using namespace saemabc;

TEST(Kernel, GaussianExactMatch) {
  const std::vector<double> y = {1.3};
  EXPECT_NEAR(kernel_log_weight(KernelSpec::gaussian(), y, y, 0.5), std::log(2.0), 1e-15);
}

TEST(Kernel, GaussianOneDeltaAway) {
  const double delta = 0.7;
  const std::vector<double> y = {0.2};
  const std::vector<double> ys = {0.2 + delta};
  EXPECT_NEAR(kernel_log_weight(KernelSpec::gaussian(), y, ys, delta), -std::log(delta) - 0.5, 1e-14);
}

TEST(Kernel, UniformOutsideBallIsImpossible) {
  const std::vector<double> y = {0.0};
  const std::vector<double> ys = {1.1};
  EXPECT_EQ(kernel_log_weight(KernelSpec::uniform(), y, ys, 1.0), -std::numeric_limits<double>::infinity());
  const std::vector<double> inside = {0.9};
  EXPECT_TRUE(std::isfinite(kernel_log_weight(KernelSpec::uniform(), y, inside, 1.0)));
}

TEST(Kernel, NonPositiveDeltaIsADomainError) {
  const std::vector<double> y = {0.0};
  EXPECT_THROW((void)kernel_log_weight(KernelSpec::gaussian(), y, y, 0.0), std::domain_error);
  EXPECT_THROW((void)kernel_log_weight(KernelSpec::uniform(), y, y, -1.0), std::domain_error);
}

TEST(Kernel, BatchMatchesSingleEvaluation) {
  Rng rng(3);
  std::vector<double> ys(101);
  for (double& v : ys) v = rng.normal();
  std::vector<double> out(ys.size());
  kernel_log_weights(KernelSpec::gaussian(), 0.4, ys, 0.3, out);
  const std::vector<double> y = {0.4};
  for (std::size_t m = 0; m < ys.size(); ++m) {
    const std::vector<double> one = {ys[m]};
    EXPECT_NEAR(out[m], kernel_log_weight(KernelSpec::gaussian(), y, one, 0.3), 1e-12);
  }
}

TEST(Kernel, ScaleFactorCancelsUnderNormalization) {
  // Normalized weights depend only on the distances, not on the delta^-d factor.
  Rng rng(8);
  std::vector<double> ys(50);
  for (double& v : ys) v = rng.normal();
  const double delta = 0.37;
  std::vector<double> lw(ys.size()), w(ys.size());
  kernel_log_weights(KernelSpec::gaussian(), 0.1, ys, delta, lw);
  normalize_log_weights(lw, w);
  std::vector<double> ref(ys.size());
  double total = 0.0;
  for (std::size_t m = 0; m < ys.size(); ++m) {
    ref[m] = std::exp(-(ys[m] - 0.1) * (ys[m] - 0.1) / (2.0 * delta * delta));
    total += ref[m];
  }
  for (std::size_t m = 0; m < ys.size(); ++m) EXPECT_NEAR(w[m], ref[m] / total, 1e-14);
}

TEST(Kernel, CustomDistanceAndSummary) {
  const auto l1 = [](std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d;
  };
  const auto first = [](std::span<const double> v) { return std::vector<double>{v[0]}; };
  const std::vector<double> y = {0.0, 0.0};
  const std::vector<double> ys = {0.5, 100.0};
  EXPECT_TRUE(std::isfinite(kernel_log_weight(KernelSpec::uniform(l1, first), y, ys, 1.0)));
  EXPECT_FALSE(std::isfinite(kernel_log_weight(KernelSpec::uniform(l1), y, ys, 1.0)));
}

TEST(Schedule, PiecewiseConstantLevels) {
  const ThresholdSchedule s({{2.0, 80}, {1.7, 70}, {1.3, 50}, {1.0, 200}});
  EXPECT_EQ(s.total_iterations(), 400u);
  EXPECT_EQ(schedule_delta(s, 1), 2.0);
  EXPECT_EQ(schedule_delta(s, 80), 2.0);
  EXPECT_EQ(schedule_delta(s, 81), 1.7);
  EXPECT_EQ(schedule_delta(s, 200), 1.3);
  EXPECT_EQ(schedule_delta(s, 201), 1.0);
  EXPECT_EQ(schedule_delta(s, 400), 1.0);
  EXPECT_THROW((void)schedule_delta(s, 0), ContractViolation);
  EXPECT_THROW((void)schedule_delta(s, 401), ContractViolation);
}

TEST(Schedule, ConstantAndFinalLevel) {
  const auto c = ThresholdSchedule::constant(1.0, 300);
  for (std::size_t k : {1u, 150u, 300u}) EXPECT_EQ(schedule_delta(c, k), 1.0);
  const ThresholdSchedule t({{0.5, 80}, {0.2, 50}, {0.1, 50}, {0.03, 120}});
  EXPECT_EQ(schedule_delta(t, 300), 0.03);
}

TEST(Schedule, RejectsInvalidLevels) {
  EXPECT_THROW(ThresholdSchedule({}), ContractViolation);
  EXPECT_THROW(ThresholdSchedule({{1.0, 10}, {1.0, 10}}), ContractViolation);
  EXPECT_THROW(ThresholdSchedule({{1.0, 10}, {2.0, 10}}), ContractViolation);
  EXPECT_THROW(ThresholdSchedule({{-1.0, 10}}), ContractViolation);
  EXPECT_THROW(ThresholdSchedule({{1.0, 0}}), ContractViolation);
}

TEST(Ess, KnownValues) {
  EXPECT_NEAR(ess(std::vector<double>(1000, 1e-3)), 1000.0, 1e-9);
  std::vector<double> one(10, 0.0);
  one[4] = 1.0;
  EXPECT_DOUBLE_EQ(ess(one), 1.0);
  EXPECT_DOUBLE_EQ(ess(std::vector<double>{0.5, 0.5, 0.0, 0.0}), 2.0);
  EXPECT_THROW((void)ess(std::vector<double>{0.5, 0.6}), ContractViolation);
}

TEST(Ess, BoundedByOneAndM) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> lw(37), w(37);
    for (double& v : lw) v = 5.0 * rng.normal();
    normalize_log_weights(lw, w);
    const double e = ess(w);
    EXPECT_GE(e, 1.0 - 1e-12);
    EXPECT_LE(e, 37.0 + 1e-9);
  }
}

TEST(NormalizeLogWeights, SumsToOneAndReturnsLogTotal) {
  const std::vector<double> lw = {-1000.0, -1001.0, -1002.0};
  std::vector<double> w(3);
  const double lt = normalize_log_weights(lw, w);
  EXPECT_NEAR(w[0] + w[1] + w[2], 1.0, 1e-15);
  EXPECT_NEAR(lt, -1000.0 + std::log(1.0 + std::exp(-1.0) + std::exp(-2.0)), 1e-12);
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> w2(2);
  EXPECT_EQ(normalize_log_weights(std::vector<double>{ninf, ninf}, w2), ninf);
}

TEST(StratifiedResample, PointMass) {
  Rng rng(1);
  const auto idx = stratified_resample(std::vector<double>{0.0, 0.0, 0.0, 1.0}, rng);
  EXPECT_EQ(idx, (std::vector<std::size_t>{3, 3, 3, 3}));
}

TEST(StratifiedResample, UniformWeightsKeepEveryParticleOnce) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto idx = stratified_resample(std::vector<double>(17, 1.0 / 17.0), rng);
    std::vector<std::size_t> expect(17);
    std::iota(expect.begin(), expect.end(), std::size_t{0});
    EXPECT_EQ(idx, expect);
  }
}

TEST(StratifiedResample, TwoParticleMeanCount) {
  Rng rng(3);
  const std::vector<double> w = {0.7, 0.3};
  double count = 0.0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r)
    for (auto i : stratified_resample(w, rng)) count += i == 0 ? 1.0 : 0.0;
  EXPECT_NEAR(count / reps, 1.4, 0.01);
}

TEST(StratifiedResample, UnbiasedForArbitraryWeights) {
  Rng rng(4);
  std::vector<double> lw(9), w(9);
  for (double& v : lw) v = rng.normal();
  normalize_log_weights(lw, w);
  const int reps = 100000;
  std::vector<double> sum(9, 0.0), sumsq(9, 0.0);
  for (int r = 0; r < reps; ++r) {
    std::vector<double> c(9, 0.0);
    for (auto i : stratified_resample(w, rng)) c[i] += 1.0;
    for (std::size_t m = 0; m < 9; ++m) {
      sum[m] += c[m];
      sumsq[m] += c[m] * c[m];
    }
  }
  for (std::size_t m = 0; m < 9; ++m) {
    const double mean = sum[m] / reps;
    const double var = sumsq[m] / reps - mean * mean;
    const double se = std::sqrt(std::max(var, 1e-12) / reps);
    EXPECT_LT(std::abs(mean - 9.0 * w[m]), 3.0 * se + 1e-12) << "particle " << m;
  }
}

TEST(SampleIndex, FollowsWeights) {
  Rng rng(6);
  const std::vector<double> w = {0.1, 0.6, 0.3};
  std::vector<int> c(3, 0);
  for (int r = 0; r < 60000; ++r) ++c[sample_index(w, rng)];
  EXPECT_NEAR(c[1] / 60000.0, 0.6, 0.01);
  EXPECT_NEAR(c[2] / 60000.0, 0.3, 0.01);
}

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (simd::avx2_kernels() == nullptr) GTEST_SKIP() << "AVX2 variant unavailable on this machine";
  }
};

TEST_F(SimdEquivalence, AllKernelsMatchTheScalarReference) {
  const auto& s = simd::scalar_kernels();
  const auto& v = *simd::avx2_kernels();
  Rng rng(12);
  for (std::size_t n = 0; n <= 67; ++n) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 3.0 * rng.normal();
      y[i] = rng.normal();
    }
    std::vector<double> a(n), b(n);
    s.gaussian_log_kernel(x.data(), n, 0.3, 1.7, -0.2, a.data());
    v.gaussian_log_kernel(x.data(), n, 0.3, 1.7, -0.2, b.data());
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-13 * std::max(1.0, std::abs(a[i])));

    a = x;
    b = x;
    s.add_inplace(a.data(), y.data(), n);
    v.add_inplace(b.data(), y.data(), n);
    EXPECT_EQ(a, b);
    s.scale_inplace(a.data(), n, 1.3);
    v.scale_inplace(b.data(), n, 1.3);
    EXPECT_EQ(a, b);

    if (n > 0) {
      EXPECT_EQ(s.max_value(x.data(), n), v.max_value(x.data(), n));
    }
    EXPECT_NEAR(s.sum(x.data(), n), v.sum(x.data(), n), 1e-12 * (1.0 + static_cast<double>(n)));
    EXPECT_NEAR(s.sum_squares(x.data(), n), v.sum_squares(x.data(), n), 1e-12 * (1.0 + 9.0 * static_cast<double>(n)));
  }
}

TEST(SimdDispatch, ActiveTableIsOneOfTheVariants) {
  const auto& a = simd::active();
  EXPECT_TRUE(&a == &simd::scalar_kernels() || &a == simd::avx2_kernels());
  EXPECT_FALSE(a.name.empty());
}
