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

#include "saemabc/saem.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "saemabc/errors.hpp"
#include "saemabc/rejection_abc.hpp"

namespace saemabc {

StepSizeSchedule::StepSizeSchedule(std::size_t total, std::size_t warmup) : total_(total), warmup_(warmup) {
  if (total == 0) throw ContractViolation("StepSizeSchedule: K must be positive");
  if (warmup >= total) throw ContractViolation("StepSizeSchedule: K1 must be smaller than K");
}

double StepSizeSchedule::gamma(std::size_t k) const {
  if (k == 0 || k > total_)
    throw ContractViolation("gamma: iteration " + std::to_string(k) + " outside [1, " + std::to_string(total_) + "]");
  return k <= warmup_ ? 1.0 : 1.0 / static_cast<double>(k - warmup_);
}

std::vector<double> sa_update(std::span<const double> s_prev, std::span<const double> s_c, double gamma) {
  if (s_prev.size() != s_c.size()) throw ContractViolation("sa_update: dimension mismatch");
  std::vector<double> out(s_prev.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s_prev[i] + gamma * (s_c[i] - s_prev[i]);
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Simulation {
  LatentPath path;
  double delta = kNaN;
  double ess_mean = kNaN;
  double distinct_mean = kNaN;
};

struct Simulator {
  const StateSpaceModel& model;
  const TimeGrid& grid;
  const ObservationSeries& y;
  const SaemObserver* observer;
  std::size_t k;
  const ParameterVector& theta;
  Rng& rng;

  Simulation filtered(const IncrementalWeighter& weighter, const FilterSettings& settings, double delta) const {
    const FilterResult fr = run_particle_filter(model, grid, y, theta, settings, weighter, rng);
    if (observer != nullptr && observer->on_filter) observer->on_filter(k, fr.diagnostics);
    return {sample_genealogy_path(fr.system, rng), delta, fr.diagnostics.mean_ess(), fr.diagnostics.mean_distinct()};
  }

  Simulation operator()(const AbcFilterSpec& spec) const {
    const double delta = spec.schedule.delta_at(k);
    AbcKernelWeighter weighter(spec.kernel, delta, model.obs_dim());
    return filtered(weighter, spec.settings, delta);
  }
  Simulation operator()(const BootstrapFilterSpec& spec) const {
    ObservationDensityWeighter weighter(model, theta);
    return filtered(weighter, spec.settings, kNaN);
  }
  Simulation operator()(const CustomFilterSpec& spec) const {
    const auto weighter = spec.weighter(theta, k);
    return filtered(*weighter, spec.settings, spec.delta ? spec.delta(k) : kNaN);
  }
  Simulation operator()(const RejectionFilterSpec& spec) const {
    const double delta = spec.schedule.delta_at(k);
    auto r = rejection_abc_path(model, grid, y, theta, delta, spec.distance, spec.summary, spec.max_attempts, rng);
    return {std::move(r.path), delta, kNaN, kNaN};
  }
};

std::size_t schedule_length(const FilterSpec& filter) {
  if (const auto* a = std::get_if<AbcFilterSpec>(&filter)) return a->schedule.total_iterations();
  if (const auto* r = std::get_if<RejectionFilterSpec>(&filter)) return r->schedule.total_iterations();
  return 0;
}

}  // namespace

SaemResult run_saem(const StateSpaceModel& model, const TimeGrid& grid, const ObservationSeries& y,
                    const ParameterVector& theta0, const StepSizeSchedule& sched, const FilterSpec& filter, Rng& rng,
                    const SaemObserver* observer) {
  const std::size_t K = sched.total();
  const std::size_t sched_len = schedule_length(filter);
  if (sched_len != 0 && sched_len != K)
    throw ContractViolation("run_saem: threshold schedule covers " + std::to_string(sched_len) +
                            " iterations but K = " + std::to_string(K));
  if (theta0.size() != model.parameter_specs().size())
    throw ContractViolation("run_saem: starting value has the wrong number of parameters");

  SaemResult result;
  result.theta = theta0;
  const bool fisher = model.has_derivatives();
  if (fisher) {
    result.fisher_coordinates = model.fisher_coordinates();
    result.fisher = FisherState::zero(static_cast<Eigen::Index>(theta0.size()));
  }
  result.trace.reserve(K);

  for (std::size_t k = 1; k <= K; ++k) {
    const double g = sched.gamma(k);
    try {
      Simulator sim{model, grid, y, observer, k, result.theta, rng};
      Simulation draw = std::visit(sim, filter);
      const auto s_c = model.sufficient_stats(y, draw.path, grid);
      result.statistics = result.statistics.empty() ? sa_update(std::vector<double>(s_c.size(), 0.0), s_c, g)
                                                    : sa_update(result.statistics, s_c, g);
      MStepResult m = model.mstep(result.statistics, grid, result.theta);
      for (auto& w : m.warnings) result.warnings.push_back("iteration " + std::to_string(k) + ": " + w);
      result.theta = std::move(m.theta);
      if (fisher) {
        const Derivatives d = model.complete_derivatives(y, draw.path, grid, result.theta);
        result.fisher = fisher_update(result.fisher, d.gradient, d.hessian, g);
      }
      result.trace.push_back(
          {k, g, draw.delta, result.theta.values(), result.theta.to_working(), draw.ess_mean, draw.distinct_mean});
      if (observer != nullptr && observer->on_iteration)
        observer->on_iteration(k, draw.path, result.statistics, fisher ? &result.fisher : nullptr);
    } catch (const DegenerateFilterError& e) {
      throw SaemError(std::string("SAEM iteration ") + std::to_string(k) + ": " + e.what(), k, e.time_index());
    } catch (const SaemError&) {
      throw;
    } catch (const AcceptanceFailure& e) {
      throw SaemError(std::string("SAEM iteration ") + std::to_string(k) + ": " + e.what(), k);
    } catch (const SingularRegressionError& e) {
      throw SaemError(std::string("SAEM iteration ") + std::to_string(k) + ": " + e.what(), k);
    } catch (const std::domain_error& e) {
      throw SaemError(std::string("SAEM iteration ") + std::to_string(k) + ": " + e.what(), k);
    }
  }

  if (fisher) {
    result.se = standard_errors(result.fisher.F);
    if (!result.se.valid) result.warnings.push_back("standard errors unavailable: " + result.se.warning);
    result.se_natural = convert_standard_errors(result.se.values, model.fisher_jacobian(result.theta));
    result.se_working = working_scale_standard_errors(result.se_natural, result.theta);
  }
  return result;
}

void write_trace_csv(std::ostream& os, const std::vector<std::string>& names, const std::vector<TraceRow>& trace) {
  os << "iteration,gamma,delta";
  for (const auto& n : names) os << ',' << n;
  os << ",ess_mean,distinct_mean\n";
  const auto old = os.precision(17);
  for (const auto& row : trace) {
    os << row.iteration << ',' << row.gamma << ',' << row.delta;
    for (double v : row.natural) os << ',' << v;
    os << ',' << row.ess_mean << ',' << row.distinct_mean << '\n';
  }
  os.precision(old);
}

}  // namespace saemabc
