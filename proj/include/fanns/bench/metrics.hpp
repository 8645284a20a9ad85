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
#include <span>

#include "fanns/common.hpp"

namespace fanns::bench {

/// |ids(result[..k]) ∩ ids(truth[..k])| / min(k, |truth|). A query whose
/// truth is empty scores 1.
double recall_at_k(const KnnResult& result, const KnnResult& truth, std::size_t k);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  ///< population standard deviation
};

/// Throws std::invalid_argument on an empty sample.
MeanStd mean_std(std::span<const double> xs);

/// Peak resident set size of this process so far (0 when unavailable).
std::size_t peak_rss_bytes();

}  // namespace fanns::bench
