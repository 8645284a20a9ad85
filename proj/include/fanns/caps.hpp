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
#include <string>
#include <vector>

#include "fanns/dataset.hpp"
#include "fanns/filter.hpp"
#include "fanns/kmeans.hpp"

namespace fanns {

/// Chain of buckets over one cluster. Level i holds every remaining item
/// whose token is the most frequent among the remaining items (ties go to
/// the lexicographically smallest token); whatever is left after
/// max_depth levels forms the terminal bucket.
struct AttributeFrequencyTree {
    struct Level {
        std::int32_t code = -1;
        std::vector<ItemId> ids;  ///< sorted
    };
    std::vector<Level> levels;
    std::vector<ItemId> remainder;  ///< sorted

    /// `ids` must be sorted.
    static AttributeFrequencyTree build(std::span<const ItemId> ids, const UnorderedColumn& column, std::size_t max_depth);

    /// Ids carrying `code`: a level bucket when one is keyed by it,
    /// otherwise the matching part of the terminal bucket.
    template <class Pred>
    std::vector<ItemId> extract(std::int32_t code, Pred&& in_remainder) const {
        for (const auto& lvl : levels) {
            if (lvl.code == code) return lvl.ids;
        }
        std::vector<ItemId> out;
        for (auto i : remainder) {
            if (in_remainder(i)) out.push_back(i);
        }
        return out;
    }

    std::size_t item_count() const;
};

struct CapsParams {
    std::size_t B = 1;
    std::size_t max_depth = 8;
    std::size_t iters = 25;
    std::uint64_t seed = 42;
    std::size_t max_training_points = 0;
};

class CapsIndex {
 public:
    /// Throws SchemaError unless `column` names an unordered column, and
    /// std::invalid_argument when B is 0 or exceeds the dataset size.
    static CapsIndex build(const Dataset& dataset, const std::string& column, const CapsParams& params);

    /// The query filter must be a single EM leaf on the indexed column.
    /// Exact top-k over matching items of the w clusters nearest to the
    /// query vector. `candidates`, when given, receives the union size.
    KnnResult query(const Query& query, std::size_t w, std::size_t* candidates = nullptr) const;

    std::size_t cluster_count() const { return model_.c; }
    const KMeansModel& model() const { return model_; }
    const std::vector<ItemId>& cluster(std::size_t b) const { return clusters_[b]; }
    const AttributeFrequencyTree& tree(std::size_t b) const { return trees_[b]; }
    std::size_t column() const { return column_; }
    const CapsParams& params() const { return params_; }
    std::size_t memory_bytes() const;

 private:
    const Dataset* dataset_ = nullptr;
    CapsParams params_;
    std::size_t column_ = 0;
    KMeansModel model_;
    std::vector<std::vector<ItemId>> clusters_;
    std::vector<AttributeFrequencyTree> trees_;
};

}  // namespace fanns
