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

#include <span>
#include <vector>

#include "fanns/dataset.hpp"
#include "fanns/filter.hpp"

namespace fanns {

/// Exact filtered k-NN by linear scan: the min(k, #matching) matching items
/// nearest to the query, ordered by (distance, id).
KnnResult exact_filtered_knn(const Dataset& dataset, const Query& query);

/// Exact k-NN restricted to the given candidate ids (any order, no repeats).
KnnResult exact_knn_over(const Dataset& dataset, std::span<const float> q, std::size_t k,
                         std::span<const ItemId> candidates);

/// One exact result per query with k overridden. Queries without a filter
/// get unfiltered ground truth. Work is split across workers; output order
/// follows the input.
std::vector<KnnResult> batch_ground_truth(const Dataset& dataset, std::span<const Query> queries, std::size_t k);

}  // namespace fanns
