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


#ifndef NARRATIVE_EQ_KERNELS_GRID_HPP_
#define NARRATIVE_EQ_KERNELS_GRID_HPP_

#include <cstddef>

namespace narrative_eq::kernels {

// Points lo + j * step for j in [0, count).
struct Grid {
  double lo = 0.0;
  double step = 0.0;
  std::size_t count = 0;

  double at(std::size_t j) const { return lo + static_cast<double>(j) * step; }
};

// First grid index attaining the maximum.
struct ArgMax {
  std::size_t index = 0;
  double value = 0.0;
};

enum class Isa { kScalar, kAvx2 };

// a -> min_i -(var_i + (mean_i - a)^2)
ArgMax envelope_argmax_scalar(const double* mean, const double* var, std::size_t n, Grid g);
ArgMax envelope_argmax_avx2(const double* mean, const double* var, std::size_t n, Grid g);

// a -> sum_i w_i * -(var_i + (mean_i - a)^2), summed in index order
ArgMax weighted_argmax_scalar(const double* mean, const double* var, const double* w,
                              std::size_t n, Grid g);
ArgMax weighted_argmax_avx2(const double* mean, const double* var, const double* w,
                            std::size_t n, Grid g);

bool avx2_available();
// AVX2 when the CPU has it, unless NARRATIVE_EQ_SIMD=scalar.
Isa active_isa();
const char* isa_name(Isa isa);

ArgMax envelope_argmax(const double* mean, const double* var, std::size_t n, Grid g);
ArgMax weighted_argmax(const double* mean, const double* var, const double* w, std::size_t n,
                       Grid g);

}  // namespace narrative_eq::kernels

#endif  // NARRATIVE_EQ_KERNELS_GRID_HPP_
