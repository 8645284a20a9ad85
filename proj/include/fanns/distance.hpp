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

#include <cmath>
#include <span>

#include "fanns/simd/kernels.hpp"

namespace fanns {

/// Squared Euclidean distance on raw pointers; callers guarantee length d.
inline double l2_sqr(const float* a, const float* b, std::size_t d) {
    return simd::active_kernels().l2_sqr(a, b, d);
}

/// Euclidean distance. This is the value every index ranks by, so results
/// from different indexes compare exactly.
inline double l2(const float* a, const float* b, std::size_t d) { return std::sqrt(l2_sqr(a, b, d)); }

/// Throws std::invalid_argument on length mismatch.
double distance_euclidean(std::span<const float> u, std::span<const float> v);

/// 1 - cos(u, v). Throws std::invalid_argument on length mismatch or a zero vector.
double distance_cosine(std::span<const float> u, std::span<const float> v);

/// Scales to unit length in place; leaves zero vectors untouched.
void normalize(std::span<float> v);

}  // namespace fanns
