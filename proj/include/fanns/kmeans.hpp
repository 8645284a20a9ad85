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

#include <cstdint>
#include <span>
#include <vector>

namespace fanns {

/// Centroids from Lloyd iterations seeded with k-means++.
struct KMeansModel {
    std::size_t c = 0;
    std::size_t d = 0;
    std::vector<float> centroids;  ///< c * d, row-major
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    /// Objective (sum of squared distances to the assigned centroid)
    /// measured at each assignment step.
    std::vector<double> objective;

    const float* centroid(std::size_t i) const { return centroids.data() + i * d; }
    /// Index of the closest centroid, ties to the lower index.
    std::uint32_t assign(const float* x) const;
    /// The w closest centroids ordered by (distance, index).
    std::vector<std::uint32_t> nearest(const float* x, std::size_t w) const;
};

/// Trains on `vectors` (n rows of d floats). Throws std::invalid_argument
/// when c is 0 or exceeds the number of rows, or d is 0.
KMeansModel kmeans_train(std::span<const float> vectors, std::size_t d, std::size_t c, std::size_t iters,
                         std::uint64_t seed);

/// Rows of `vectors` picked by a seeded uniform sample of size at most
/// `limit` (all rows when limit is 0 or not smaller than n), in row order.
std::vector<float> sample_rows(std::span<const float> vectors, std::size_t d, std::size_t limit, std::uint64_t seed);

}  // namespace fanns
