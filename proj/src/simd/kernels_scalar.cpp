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

#include "fanns/simd/kernels.hpp"

namespace fanns::simd {

namespace {

double l2_sqr_scalar(const float* a, const float* b, std::size_t d) {
    double p[kLanes] = {};
    for (std::size_t i = 0; i < d; ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        p[i % kLanes] += diff * diff;
    }
    return reduce_lanes(p);
}

double dot_scalar(const float* a, const float* b, std::size_t d) {
    double p[kLanes] = {};
    for (std::size_t i = 0; i < d; ++i) {
        p[i % kLanes] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return reduce_lanes(p);
}

void adc_scan_scalar(const double* table, std::size_t subspaces, std::size_t ksub, const std::uint8_t* codes,
                     std::size_t count, double* out) {
    for (std::size_t c = 0; c < count; ++c) {
        const std::uint8_t* code = codes + c * subspaces;
        double acc = 0.0;
        for (std::size_t m = 0; m < subspaces; ++m) acc += table[m * ksub + code[m]];
        out[c] = acc;
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{"scalar", l2_sqr_scalar, dot_scalar, adc_scan_scalar};
    return k;
}

}  // namespace fanns::simd
