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

#include "fanns/distance.hpp"

#include <algorithm>
#include <stdexcept>

namespace fanns {

double distance_euclidean(std::span<const float> u, std::span<const float> v) {
    if (u.size() != v.size()) throw std::invalid_argument("distance_euclidean: length mismatch");
    return l2(u.data(), v.data(), u.size());
}

double distance_cosine(std::span<const float> u, std::span<const float> v) {
    if (u.size() != v.size()) throw std::invalid_argument("distance_cosine: length mismatch");
    const auto& k = simd::active_kernels();
    const double uu = k.dot(u.data(), u.data(), u.size());
    const double vv = k.dot(v.data(), v.data(), v.size());
    if (uu == 0.0 || vv == 0.0) throw std::invalid_argument("distance_cosine: zero-norm input");
    const double cos = k.dot(u.data(), v.data(), u.size()) / (std::sqrt(uu) * std::sqrt(vv));
    return 1.0 - std::clamp(cos, -1.0, 1.0);
}

void normalize(std::span<float> v) {
    const double norm = std::sqrt(simd::active_kernels().dot(v.data(), v.data(), v.size()));
    if (norm == 0.0) return;
    for (auto& x : v) x = static_cast<float>(x / norm);
}

}  // namespace fanns
