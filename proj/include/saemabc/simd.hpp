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

#ifndef SAEMABC_SIMD_HPP
#define SAEMABC_SIMD_HPP

#include <cstddef>
#include <span>
#include <string_view>

/**
 * \file
 * \brief Data-parallel kernels for the per-particle loops.
 *
 * Each kernel has a scalar reference implementation and, on x86-64, an AVX2
 * variant. The variant is chosen once at first use from CPU support; setting
 * the environment variable SAEMABC_SIMD to "scalar" forces the reference path.
 */

namespace saemabc::simd {

struct KernelTable {
  std::string_view name;
  /// out[i] = log_norm - (x[i] - center)^2 * inv_two_var
  void (*gaussian_log_kernel)(const double* x, std::size_t n, double center, double inv_two_var, double log_norm,
                              double* out);
  /// dst[i] += src[i]
  void (*add_inplace)(double* dst, const double* src, std::size_t n);
  /// max over x; -inf for n == 0
  double (*max_value)(const double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  /// x[i] *= c
  void (*scale_inplace)(double* x, std::size_t n, double c);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;
/// The table selected for this process.
const KernelTable& active() noexcept;

inline void gaussian_log_kernel(std::span<const double> x, double center, double inv_two_var, double log_norm,
                                std::span<double> out) {
  active().gaussian_log_kernel(x.data(), x.size(), center, inv_two_var, log_norm, out.data());
}
inline void add_inplace(std::span<double> dst, std::span<const double> src) {
  active().add_inplace(dst.data(), src.data(), dst.size());
}
inline double max_value(std::span<const double> x) { return active().max_value(x.data(), x.size()); }
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }
inline void scale_inplace(std::span<double> x, double c) { active().scale_inplace(x.data(), x.size(), c); }

}  // namespace saemabc::simd

#endif  // SAEMABC_SIMD_HPP
