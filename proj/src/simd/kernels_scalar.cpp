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

#include <algorithm>
#include <limits>

#include "saemabc/simd.hpp"

namespace saemabc::simd {
namespace {

void gaussian_log_kernel_scalar(const double* x, std::size_t n, double center, double inv_two_var, double log_norm,
                                double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - center;
    out[i] = log_norm - d * d * inv_two_var;
  }
}

void add_inplace_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

double max_value_scalar(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sum_squares_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void scale_inplace_scalar(double* x, std::size_t n, double c) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= c;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static constexpr KernelTable table{"scalar",         gaussian_log_kernel_scalar, add_inplace_scalar, max_value_scalar,
                                     sum_scalar,       sum_squares_scalar,         scale_inplace_scalar};
  return table;
}

}  // namespace saemabc::simd
