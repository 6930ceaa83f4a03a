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

#include "saemabc/priors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "saemabc/errors.hpp"

namespace saemabc {

Prior Prior::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ContractViolation("uniform prior needs finite lo < hi");
  return {Kind::uniform, lo, hi};
}

double Prior::logpdf(double x) const {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (kind == Kind::uniform) return (x >= lo && x <= hi) ? -std::log(hi - lo) : neg_inf;
  return x > 0.0 ? -std::log(x) : neg_inf;
}

std::string Prior::describe() const {
  if (kind == Kind::flat_log) return "flat-log";
  std::ostringstream os;
  os << "uniform(" << lo << ", " << hi << ")";
  return os.str();
}

double prior_logpdf(const PriorSpec& priors, const ParameterVector& theta) {
  if (priors.size() != theta.size()) throw ContractViolation("prior_logpdf: one prior per parameter is required");
  double total = 0.0;
  for (std::size_t i = 0; i < priors.size(); ++i) total += priors[i].logpdf(theta[i]);
  return total;
}

}  // namespace saemabc
