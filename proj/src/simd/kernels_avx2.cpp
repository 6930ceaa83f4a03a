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

#include <immintrin.h>

#include <limits>

#include "saemabc/simd.hpp"

// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check, so keep
// this file free of inline templates shared with other translation units.

namespace saemabc::simd {
namespace {

constexpr std::size_t kLanes = 4;

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

void gaussian_log_kernel_avx2(const double* x, std::size_t n, double center, double inv_two_var, double log_norm,
                              double* out) {
  const __m256d c = _mm256_set1_pd(center);
  const __m256d k = _mm256_set1_pd(-inv_two_var);
  const __m256d b = _mm256_set1_pd(log_norm);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(_mm256_mul_pd(d, d), k, b));
  }
  for (; i < n; ++i) {
    const double d = x[i] - center;
    out[i] = log_norm - d * d * inv_two_var;
  }
}

void add_inplace_avx2(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
  for (; i < n; ++i) dst[i] += src[i];
}

double max_value_avx2(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= kLanes) {
    __m256d acc = _mm256_set1_pd(m);
    for (; i + kLanes <= n; i += kLanes) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    m = hmax(acc);
  }
  for (; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double sum_squares_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

void scale_inplace_avx2(double* x, std::size_t n, double c) {
  const __m256d k = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), k));
  for (; i < n; ++i) x[i] *= c;
}

}  // namespace

const KernelTable& avx2_kernel_table() noexcept {
  static constexpr KernelTable table{"avx2",   gaussian_log_kernel_avx2, add_inplace_avx2,  max_value_avx2,
                                     sum_avx2, sum_squares_avx2,         scale_inplace_avx2};
  return table;
}

}  // namespace saemabc::simd
