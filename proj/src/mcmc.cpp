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

#include "saemabc/mcmc.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "saemabc/errors.hpp"

namespace saemabc {

double ChainRecord::acceptance_rate(std::size_t step) const {
  if (accepted.empty()) return 0.0;
  double count = 0.0;
  for (const auto& row : accepted) count += row.at(step) ? 1.0 : 0.0;
  return count / static_cast<double>(accepted.size());
}

std::vector<double> ChainRecord::column(std::size_t i, std::size_t burn) const {
  std::vector<double> out;
  for (std::size_t b = burn; b < draws.size(); ++b) out.push_back(draws[b].at(i));
  return out;
}

double ChainRecord::mean(std::size_t i, std::size_t burn) const {
  const auto c = column(i, burn);
  if (c.empty()) throw ContractViolation("ChainRecord::mean: no draws after burn-in");
  return std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
}

void write_chain_csv(std::ostream& os, const ChainRecord& chain) {
  os << "iteration";
  for (const auto& n : chain.parameter_names) os << ',' << n;
  os << ',' << chain.target_name;
  for (const auto& s : chain.step_names) os << ",accepted_" << s;
  os << '\n';
  const auto old = os.precision(17);
  for (std::size_t b = 0; b < chain.draws.size(); ++b) {
    os << (b + 1);
    for (double v : chain.draws[b]) os << ',' << v;
    os << ',' << chain.target[b];
    for (bool a : chain.accepted[b]) os << ',' << (a ? 1 : 0);
    os << '\n';
  }
  os.precision(old);
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw ContractViolation("gelman_rubin: need at least two chains");
  const std::size_t n = chains.front().size();
  if (n < 2) throw ContractViolation("gelman_rubin: chains need at least two draws");
  for (const auto& c : chains)
    if (c.size() != n) throw ContractViolation("gelman_rubin: chains must have equal length");
  const double m = static_cast<double>(chains.size());
  const double nn = static_cast<double>(n);
  std::vector<double> means;
  double within = 0.0;
  for (const auto& c : chains) {
    const double mu = std::accumulate(c.begin(), c.end(), 0.0) / nn;
    double ss = 0.0;
    for (double v : c) ss += (v - mu) * (v - mu);
    within += ss / (nn - 1.0);
    means.push_back(mu);
  }
  within /= m;
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / m;
  double between = 0.0;
  for (double mu : means) between += (mu - grand) * (mu - grand);
  between *= nn / (m - 1.0);
  const double var_hat = (nn - 1.0) / nn * within + between / nn;
  return std::sqrt(var_hat / within);
}

ScaleAdapter::ScaleAdapter(double initial_scale, double target, std::size_t freeze_after)
    : log_scale_(std::log(initial_scale)), target_(target), freeze_after_(freeze_after) {
  if (!(initial_scale > 0.0)) throw ContractViolation("ScaleAdapter: initial scale must be positive");
  if (!(target > 0.0 && target < 1.0)) throw ContractViolation("ScaleAdapter: target acceptance must be in (0, 1)");
}

double ScaleAdapter::scale() const noexcept { return std::exp(log_scale_); }

void ScaleAdapter::update(std::size_t b, double acceptance_probability) {
  if (b > freeze_after_ || b == 0) return;
  log_scale_ += (acceptance_probability - target_) / std::pow(static_cast<double>(b), 0.6);
}

}  // namespace saemabc
