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

#include "fanns/oracle.hpp"

#include "fanns/distance.hpp"
#include "fanns/parallel.hpp"

namespace fanns {

KnnResult exact_filtered_knn(const Dataset& dataset, const Query& query) {
    check_query(query, dataset);
    const auto l2sq = simd::active_kernels().l2_sqr;
    const std::size_t d = dataset.dim();
    KnnResult all;
    auto consider = [&](ItemId i) {
        all.push_back({i, std::sqrt(l2sq(query.vector.data(), dataset.vector_ptr(i), d))});
    };
    if (query.filter) {
        BoundFilter pred(*query.filter, dataset);
        for (ItemId i = 0; i < dataset.size(); ++i) {
            if (pred(i)) consider(i);
        }
    } else {
        all.reserve(dataset.size());
        for (ItemId i = 0; i < dataset.size(); ++i) consider(i);
    }
    finalize_top_k(all, query.k);
    return all;
}

KnnResult exact_knn_over(const Dataset& dataset, std::span<const float> q, std::size_t k,
                         std::span<const ItemId> candidates) {
    const auto l2sq = simd::active_kernels().l2_sqr;
    KnnResult all;
    all.reserve(candidates.size());
    for (auto i : candidates) all.push_back({i, std::sqrt(l2sq(q.data(), dataset.vector_ptr(i), dataset.dim()))});
    finalize_top_k(all, k);
    return all;
}

std::vector<KnnResult> batch_ground_truth(const Dataset& dataset, std::span<const Query> queries, std::size_t k) {
    std::vector<KnnResult> out(queries.size());
    parallel_for(queries.size(), [&](std::size_t j) {
        Query q = queries[j];
        q.k = k;
        out[j] = exact_filtered_knn(dataset, q);
    });
    return out;
}

}  // namespace fanns
