// Copyright 2026 The fanns Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fanns::simd {

/// Inner-loop kernels. Every variant accumulates in double precision with
/// the same association order as the scalar reference, so all variants
/// return bit-identical results:
///
///   coordinate i feeds partial sum i % kLanes; partial sums are combined
///   as ((p0 + p4) + (p1 + p5)) + ((p2 + p6) + (p3 + p7)).
///
/// That fixed order is what keeps tie-breaking identical across machines.
inline constexpr std::size_t kLanes = 8;

struct Kernels {
    std::string_view name;
    /// Sum of squared coordinate differences.
    double (*l2_sqr)(const float* a, const float* b, std::size_t d);
    double (*dot)(const float* a, const float* b, std::size_t d);
    /// Asymmetric distance scan: for each of `count` codes of `subspaces`
    /// bytes, out[c] = sum over m (in order m = 0..subspaces-1) of
    /// table[m * ksub + codes[c * subspaces + m]].
    void (*adc_scan)(const double* table, std::size_t subspaces, std::size_t ksub, const std::uint8_t* codes,
                     std::size_t count, double* out);
};

const Kernels& scalar_kernels();
/// nullptr when the variant was not compiled in or the CPU lacks it.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

/// Best available variant, chosen on first use.
const Kernels& active_kernels();

enum class Preference { Auto, Scalar };
/// Selects which variant active_kernels() returns from now on.
void set_preference(Preference pref);

inline double reduce_lanes(const double p[kLanes]) {
    return ((p[0] + p[4]) + (p[1] + p[5])) + ((p[2] + p[6]) + (p[3] + p[7]));
}

}  // namespace fanns::simd
