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

#ifndef SAEMABC_PRIORS_HPP
#define SAEMABC_PRIORS_HPP

#include <string>
#include <vector>

#include "saemabc/parameters.hpp"

namespace saemabc {

/// Independent prior for one natural-scale component.
struct Prior {
  enum class Kind { uniform, flat_log };
  Kind kind = Kind::flat_log;
  double lo = 0.0;
  double hi = 0.0;

  /// Uniform on [lo, hi]; throws ContractViolation unless lo < hi.
  static Prior uniform(double lo, double hi);
  /// Improper prior flat in log(theta), density proportional to 1/theta.
  static Prior flat_log() { return {}; }

  /// Log-density up to a constant; -inf outside the support.
  [[nodiscard]] double logpdf(double x) const;
  [[nodiscard]] std::string describe() const;
};

using PriorSpec = std::vector<Prior>;

/// Sum of component log-densities. Throws ContractViolation on size mismatch.
double prior_logpdf(const PriorSpec& priors, const ParameterVector& theta);

}  // namespace saemabc

#endif  // SAEMABC_PRIORS_HPP
