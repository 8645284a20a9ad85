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

#include <immintrin.h>

#include "fanns/simd/kernels.hpp"

namespace fanns::simd {

namespace {

// Two 4-lane double accumulators hold partial sums 0..3 and 4..7, so each
// lane sees exactly the coordinates the scalar reference assigns to it.
// mul and add stay separate instructions (no FMA) to match its rounding.

inline void spill(__m256d lo, __m256d hi, double p[kLanes]) {
    _mm256_storeu_pd(p, lo);
    _mm256_storeu_pd(p + 4, hi);
}

double l2_sqr_avx2(const float* a, const float* b, std::size_t d) {
    __m256d acc_lo = _mm256_setzero_pd();
    __m256d acc_hi = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= d; i += kLanes) {
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256 vb = _mm256_loadu_ps(b + i);
        const __m256d dlo = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                                          _mm256_cvtps_pd(_mm256_castps256_ps128(vb)));
        const __m256d dhi = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                                          _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)));
        acc_lo = _mm256_add_pd(acc_lo, _mm256_mul_pd(dlo, dlo));
        acc_hi = _mm256_add_pd(acc_hi, _mm256_mul_pd(dhi, dhi));
    }
    double p[kLanes];
    spill(acc_lo, acc_hi, p);
    for (; i < d; ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        p[i % kLanes] += diff * diff;
    }
    return reduce_lanes(p);
}

double dot_avx2(const float* a, const float* b, std::size_t d) {
    __m256d acc_lo = _mm256_setzero_pd();
    __m256d acc_hi = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= d; i += kLanes) {
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256 vb = _mm256_loadu_ps(b + i);
        const __m256d plo =
            _mm256_mul_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)), _mm256_cvtps_pd(_mm256_castps256_ps128(vb)));
        const __m256d phi =
            _mm256_mul_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)), _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)));
        acc_lo = _mm256_add_pd(acc_lo, plo);
        acc_hi = _mm256_add_pd(acc_hi, phi);
    }
    double p[kLanes];
    spill(acc_lo, acc_hi, p);
    for (; i < d; ++i) p[i % kLanes] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return reduce_lanes(p);
}

// Four codes per step; each lane sums its own code's table entries in
// subspace order, which is the scalar order.
void adc_scan_avx2(const double* table, std::size_t subspaces, std::size_t ksub, const std::uint8_t* codes,
                   std::size_t count, double* out) {
    std::size_t c = 0;
    const int stride = static_cast<int>(subspaces);
    for (; c + 4 <= count; c += 4) {
        const std::uint8_t* base = codes + c * subspaces;
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t m = 0; m < subspaces; ++m) {
            const int row = static_cast<int>(m * ksub);
            const __m128i idx = _mm_setr_epi32(row + base[m], row + base[stride + m], row + base[2 * stride + m],
                                               row + base[3 * stride + m]);
            acc = _mm256_add_pd(acc, _mm256_i32gather_pd(table, idx, 8));
        }
        _mm256_storeu_pd(out + c, acc);
    }
    for (; c < count; ++c) {
        const std::uint8_t* code = codes + c * subspaces;
        double acc = 0.0;
        for (std::size_t m = 0; m < subspaces; ++m) acc += table[m * ksub + code[m]];
        out[c] = acc;
    }
}

}  // namespace

const Kernels* avx2_kernels() {
    static const Kernels k{"avx2", l2_sqr_avx2, dot_avx2, adc_scan_avx2};
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &k : nullptr;
}

}  // namespace fanns::simd
