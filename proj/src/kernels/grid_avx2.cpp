// Copyright 2026 The narrative_eq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <immintrin.h>

#include <cmath>

#include "narrative_eq/kernels/grid.hpp"

namespace narrative_eq::kernels {
namespace {

// Grid points j..j+3, formed exactly as Grid::at does.
inline __m256d points(const Grid& g, std::size_t j) {
  const double base = static_cast<double>(j);
  __m256d idx = _mm256_add_pd(_mm256_set1_pd(base), _mm256_set_pd(3.0, 2.0, 1.0, 0.0));
  return _mm256_add_pd(_mm256_set1_pd(g.lo), _mm256_mul_pd(idx, _mm256_set1_pd(g.step)));
}

inline __m256d negate(__m256d x) { return _mm256_xor_pd(x, _mm256_set1_pd(-0.0)); }

// Lane-wise best so far; ties keep the earlier index.
struct LaneBest {
  __m256d value = _mm256_set1_pd(-INFINITY);
  __m256d index = _mm256_setzero_pd();

  void update(__m256d v, std::size_t j) {
    __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(j)),
                                _mm256_set_pd(3.0, 2.0, 1.0, 0.0));
    __m256d gt = _mm256_cmp_pd(v, value, _CMP_GT_OQ);
    value = _mm256_blendv_pd(value, v, gt);
    index = _mm256_blendv_pd(index, idx, gt);
  }

  ArgMax reduce() const {
    alignas(32) double v[4], ix[4];
    _mm256_store_pd(v, value);
    _mm256_store_pd(ix, index);
    ArgMax best{0, -INFINITY};
    bool any = false;
    for (int l = 0; l < 4; ++l) {
      const auto j = static_cast<std::size_t>(ix[l]);
      if (!(v[l] > -INFINITY)) continue;
      if (!any || v[l] > best.value || (v[l] == best.value && j < best.index)) {
        best = {j, v[l]};
        any = true;
      }
    }
    return best;
  }
};

}  // namespace

ArgMax envelope_argmax_avx2(const double* mean, const double* var, std::size_t n, Grid g) {
  LaneBest lanes;
  std::size_t j = 0;
  for (; j + 4 <= g.count; j += 4) {
    const __m256d a = points(g, j);
    __m256d m = _mm256_set1_pd(INFINITY);
    for (std::size_t i = 0; i < n; ++i) {
      const __m256d d = _mm256_sub_pd(_mm256_set1_pd(mean[i]), a);
      const __m256d u = negate(_mm256_add_pd(_mm256_set1_pd(var[i]), _mm256_mul_pd(d, d)));
      m = _mm256_min_pd(u, m);
    }
    lanes.update(m, j);
  }
  ArgMax best = lanes.reduce();
  for (; j < g.count; ++j) {
    const double a = g.at(j);
    double m = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = mean[i] - a;
      const double u = -(var[i] + d * d);
      if (u < m) m = u;
    }
    if (m > best.value) best = {j, m};
  }
  return best;
}

ArgMax weighted_argmax_avx2(const double* mean, const double* var, const double* w,
                            std::size_t n, Grid g) {
  LaneBest lanes;
  std::size_t j = 0;
  for (; j + 4 <= g.count; j += 4) {
    const __m256d a = points(g, j);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n; ++i) {
      const __m256d d = _mm256_sub_pd(_mm256_set1_pd(mean[i]), a);
      const __m256d u = negate(_mm256_add_pd(_mm256_set1_pd(var[i]), _mm256_mul_pd(d, d)));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(w[i]), u));
    }
    lanes.update(acc, j);
  }
  ArgMax best = lanes.reduce();
  for (; j < g.count; ++j) {
    const double a = g.at(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = mean[i] - a;
      acc = acc + w[i] * -(var[i] + d * d);
    }
    if (acc > best.value) best = {j, acc};
  }
  return best;
}

}  // namespace narrative_eq::kernels
