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


#include <cmath>

#include "narrative_eq/kernels/grid.hpp"

namespace narrative_eq::kernels {

ArgMax envelope_argmax_scalar(const double* mean, const double* var, std::size_t n, Grid g) {
  ArgMax best{0, -INFINITY};
  for (std::size_t j = 0; j < g.count; ++j) {
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

ArgMax weighted_argmax_scalar(const double* mean, const double* var, const double* w,
                              std::size_t n, Grid g) {
  ArgMax best{0, -INFINITY};
  for (std::size_t j = 0; j < g.count; ++j) {
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
