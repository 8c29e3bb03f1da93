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


#include <cstdlib>
#include <cstring>

#include "narrative_eq/kernels/grid.hpp"

namespace narrative_eq::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("NARRATIVE_EQ_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::kScalar;
    return avx2_available() ? Isa::kAvx2 : Isa::kScalar;
  }();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

ArgMax envelope_argmax(const double* mean, const double* var, std::size_t n, Grid g) {
  return active_isa() == Isa::kAvx2 ? envelope_argmax_avx2(mean, var, n, g)
                                    : envelope_argmax_scalar(mean, var, n, g);
}

ArgMax weighted_argmax(const double* mean, const double* var, const double* w, std::size_t n,
                       Grid g) {
  return active_isa() == Isa::kAvx2 ? weighted_argmax_avx2(mean, var, w, n, g)
                                    : weighted_argmax_scalar(mean, var, w, n, g);
}

}  // namespace narrative_eq::kernels
