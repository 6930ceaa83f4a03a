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

#ifndef SAEMABC_MCMC_HPP
#define SAEMABC_MCMC_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace saemabc {

/// Stored output of one MCMC chain.
struct ChainRecord {
  std::vector<std::string> parameter_names;
  /// Natural-scale draws, one row per iteration.
  std::vector<std::vector<double>> draws;
  /// Log-posterior (Gibbs) or log-likelihood estimate (PMM) per iteration.
  std::string target_name;
  std::vector<double> target;
  /// Acceptance flag per named sub-step per iteration.
  std::vector<std::string> step_names;
  std::vector<std::vector<bool>> accepted;

  [[nodiscard]] std::size_t size() const noexcept { return draws.size(); }
  /// Fraction of accepted moves of sub-step `step`.
  [[nodiscard]] double acceptance_rate(std::size_t step) const;
  /// Draws of parameter i after discarding the first `burn` iterations.
  [[nodiscard]] std::vector<double> column(std::size_t i, std::size_t burn = 0) const;
  [[nodiscard]] double mean(std::size_t i, std::size_t burn = 0) const;
};

/// CSV: iteration,<parameters>,<target_name>,accepted_<step>...
void write_chain_csv(std::ostream& os, const ChainRecord& chain);

/// Potential scale reduction factor (Gelman-Rubin R-hat) for equal-length chains.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

/// Robbins-Monro adaptation of a log proposal scale toward a target acceptance
/// probability, frozen after a fixed iteration.
class ScaleAdapter {
 public:
  ScaleAdapter(double initial_scale, double target, std::size_t freeze_after);

  [[nodiscard]] double scale() const noexcept;
  /// Record the acceptance probability of the move made at iteration b (1-based).
  void update(std::size_t b, double acceptance_probability);

 private:
  double log_scale_;
  double target_;
  std::size_t freeze_after_;
};

}  // namespace saemabc

#endif  // SAEMABC_MCMC_HPP
