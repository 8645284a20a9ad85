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

#include "fanns/bench/metrics.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace fanns::bench {

double recall_at_k(const KnnResult& result, const KnnResult& truth, std::size_t k) {
    const std::size_t denom = std::min(k, truth.size());
    if (denom == 0) return 1.0;
    std::unordered_set<ItemId> want;
    for (std::size_t i = 0; i < denom; ++i) want.insert(truth[i].id);
    std::size_t hits = 0;
    const std::size_t top = std::min(k, result.size());
    for (std::size_t i = 0; i < top; ++i) hits += want.erase(result[i].id);
    return double(hits) / double(denom);
}

MeanStd mean_std(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean_std: empty sample");
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / double(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return {mean, std::sqrt(sq / double(xs.size()))};
}

std::size_t peak_rss_bytes() {
    rusage ru{};
    if (getrusage(RUSAGE_SELF, &ru) != 0) return 0;
    return static_cast<std::size_t>(ru.ru_maxrss) * 1024;  // Linux reports KiB
}

}  // namespace fanns::bench
