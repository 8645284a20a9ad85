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
#include <iosfwd>
#include <span>
#include <vector>

namespace fanns {

/// Product quantizer: d dimensions split into s contiguous subspaces of
/// d/s each, every subspace quantized to one of ksub codewords (one byte).
struct PqCodebook {
    std::size_t d = 0;
    std::size_t s = 0;
    std::size_t ksub = 0;
    std::uint64_t seed = 0;
    std::vector<float> codewords;  ///< s * ksub * (d/s)

    std::size_t dsub() const { return d / s; }
    const float* codeword(std::size_t m, std::size_t j) const { return codewords.data() + (m * ksub + j) * dsub(); }

    void encode(const float* x, std::uint8_t* code) const;
    std::vector<std::uint8_t> encode(std::span<const float> x) const;
    std::vector<float> decode(std::span<const std::uint8_t> code) const;

    /// Squared partial distances, table[m * ksub + j] = |q_m - codeword(m, j)|^2.
    std::vector<double> distance_table(std::span<const float> q) const;
    /// Euclidean distance from the table's query to the decoded code.
    double adc_distance(std::span<const double> table, const std::uint8_t* code) const;

    void save(std::ostream& out) const;
    static PqCodebook load(std::istream& in);
};

/// Per-subspace k-means. Throws std::invalid_argument when s does not
/// divide d, ksub is outside [1, 256] or exceeds the number of rows.
PqCodebook pq_train(std::span<const float> vectors, std::size_t d, std::size_t s, std::size_t ksub, std::size_t iters,
                    std::uint64_t seed);

}  // namespace fanns
