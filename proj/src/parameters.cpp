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

#include "saemabc/parameters.hpp"

#include <cmath>

#include "saemabc/errors.hpp"

namespace saemabc {

double to_working(Domain d, double natural) { return d == Domain::positive ? std::log(natural) : natural; }

double to_natural(Domain d, double working) { return d == Domain::positive ? std::exp(working) : working; }

ParameterVector::ParameterVector(std::vector<ParameterSpec> specs, std::vector<double> values)
    : specs_(std::make_shared<const std::vector<ParameterSpec>>(std::move(specs))), values_(std::move(values)) {
  if (specs_->size() != values_.size()) throw ContractViolation("ParameterVector: names and values differ in length");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const auto& spec = (*specs_)[i];
    if (!std::isfinite(values_[i])) throw std::domain_error("parameter '" + spec.name + "' is not finite");
    if (spec.domain == Domain::positive && !(values_[i] > 0.0))
      throw std::domain_error("parameter '" + spec.name + "' must be strictly positive");
  }
}

ParameterVector ParameterVector::from_working(std::vector<ParameterSpec> specs, std::span<const double> working) {
  if (specs.size() != working.size()) throw ContractViolation("ParameterVector: working vector has wrong length");
  std::vector<double> natural(working.size());
  for (std::size_t i = 0; i < working.size(); ++i) natural[i] = to_natural(specs[i].domain, working[i]);
  return ParameterVector(std::move(specs), std::move(natural));
}

std::size_t ParameterVector::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < specs_->size(); ++i)
    if ((*specs_)[i].name == name) return i;
  throw ContractViolation("unknown parameter '" + std::string(name) + "'");
}

double ParameterVector::value(std::string_view name) const { return values_[index_of(name)]; }

std::vector<std::string> ParameterVector::names() const {
  std::vector<std::string> out;
  out.reserve(specs_->size());
  for (const auto& s : *specs_) out.push_back(s.name);
  return out;
}

std::vector<double> ParameterVector::to_working() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = saemabc::to_working((*specs_)[i].domain, values_[i]);
  return out;
}

ParameterVector ParameterVector::with(std::size_t i, double value) const {
  if (i >= values_.size()) throw ContractViolation("ParameterVector::with: index out of range");
  auto v = values_;
  v[i] = value;
  return ParameterVector(*specs_, std::move(v));
}

}  // namespace saemabc
