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

#include <arm_neon.h>

#include "fanns/simd/kernels.hpp"

namespace fanns::simd {

namespace {

// Four float64x2 accumulators cover partial sums {0,1} {2,3} {4,5} {6,7}.

double l2_sqr_neon(const float* a, const float* b, std::size_t d) {
    float64x2_t acc[4] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0)};
    std::size_t i = 0;
    for (; i + kLanes <= d; i += kLanes) {
        for (int j = 0; j < 2; ++j) {
            const float32x4_t va = vld1q_f32(a + i + 4 * j);
            const float32x4_t vb = vld1q_f32(b + i + 4 * j);
            const float64x2_t dlo = vsubq_f64(vcvt_f64_f32(vget_low_f32(va)), vcvt_f64_f32(vget_low_f32(vb)));
            const float64x2_t dhi = vsubq_f64(vcvt_high_f64_f32(va), vcvt_high_f64_f32(vb));
            acc[2 * j] = vaddq_f64(acc[2 * j], vmulq_f64(dlo, dlo));
            acc[2 * j + 1] = vaddq_f64(acc[2 * j + 1], vmulq_f64(dhi, dhi));
        }
    }
    double p[kLanes];
    for (int j = 0; j < 4; ++j) vst1q_f64(p + 2 * j, acc[j]);
    for (; i < d; ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        p[i % kLanes] += diff * diff;
    }
    return reduce_lanes(p);
}

double dot_neon(const float* a, const float* b, std::size_t d) {
    float64x2_t acc[4] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0)};
    std::size_t i = 0;
    for (; i + kLanes <= d; i += kLanes) {
        for (int j = 0; j < 2; ++j) {
            const float32x4_t va = vld1q_f32(a + i + 4 * j);
            const float32x4_t vb = vld1q_f32(b + i + 4 * j);
            acc[2 * j] = vaddq_f64(acc[2 * j], vmulq_f64(vcvt_f64_f32(vget_low_f32(va)), vcvt_f64_f32(vget_low_f32(vb))));
            acc[2 * j + 1] = vaddq_f64(acc[2 * j + 1], vmulq_f64(vcvt_high_f64_f32(va), vcvt_high_f64_f32(vb)));
        }
    }
    double p[kLanes];
    for (int j = 0; j < 4; ++j) vst1q_f64(p + 2 * j, acc[j]);
    for (; i < d; ++i) p[i % kLanes] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return reduce_lanes(p);
}

void adc_scan_neon(const double* table, std::size_t subspaces, std::size_t ksub, const std::uint8_t* codes,
                   std::size_t count, double* out) {
    // No gather on NEON; two codes per step keeps the pairwise lane layout.
    std::size_t c = 0;
    for (; c + 2 <= count; c += 2) {
        const std::uint8_t* c0 = codes + c * subspaces;
        const std::uint8_t* c1 = c0 + subspaces;
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::size_t m = 0; m < subspaces; ++m) {
            const double pair[2] = {table[m * ksub + c0[m]], table[m * ksub + c1[m]]};
            acc = vaddq_f64(acc, vld1q_f64(pair));
        }
        vst1q_f64(out + c, acc);
    }
    for (; c < count; ++c) {
        const std::uint8_t* code = codes + c * subspaces;
        double acc = 0.0;
        for (std::size_t m = 0; m < subspaces; ++m) acc += table[m * ksub + code[m]];
        out[c] = acc;
    }
}

}  // namespace

const Kernels* neon_kernels() {
    static const Kernels k{"neon", l2_sqr_neon, dot_neon, adc_scan_neon};
    return &k;
}

}  // namespace fanns::simd
