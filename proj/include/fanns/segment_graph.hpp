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

#include <iosfwd>
#include <string>
#include <vector>

#include "fanns/hnsw.hpp"
#include "fanns/ranked_column.hpp"

namespace fanns {

/// HNSW built by inserting items in ascending order of one ordered column,
/// keeping every edge ever created together with its validity interval
/// [birth, death) in 1-based insertion ranks. Restricting the graph to the
/// edges alive at rank b reproduces the HNSW built over the first b items.
///
/// Internal node u is the item of rank u + 1.
class SegmentGraphIndex {
 public:
    struct Edge {
        std::uint32_t target;
        std::uint32_t birth;
        std::uint32_t death;  ///< size() + 1 when never pruned
    };

    /// Throws SchemaError for a non-ordered column, std::invalid_argument on an empty dataset.
    static SegmentGraphIndex build(const Dataset& dataset, const std::string& column, const HnswParams& params);

    /// k-NN among items whose value is <= upper_value. Throws
    /// std::invalid_argument when ef < k.
    KnnResult query_leq(std::span<const float> q, std::size_t k, std::size_t ef, const OrderedValue& upper_value,
                        detail::SearchStats* stats = nullptr) const;

    /// Search over the first `prefix` items in rank order.
    KnnResult query_prefix(std::span<const float> q, std::size_t k, std::size_t ef, std::size_t prefix,
                           detail::SearchStats* stats = nullptr) const;

    /// Range-filtered k-NN. Half-bounded ranges (no lower limit, or a lower
    /// limit at or below the minimum value) go through the graph; two-sided
    /// ranges fall back to an exact scan of the rank slice.
    KnnResult query(const Query& query, std::size_t ef, detail::SearchStats* stats = nullptr) const;

    /// Neighbor ids of node u on `layer` among edges alive at `prefix`, in
    /// stored order.
    std::vector<std::uint32_t> neighbors_at(std::uint32_t u, int layer, std::size_t prefix) const;
    std::span<const Edge> edges(std::uint32_t u, int layer) const;

    /// Entry point and top layer of the prefix graph over the first `prefix` items.
    std::pair<std::uint32_t, int> entry_at(std::size_t prefix) const;

    std::size_t size() const { return ranks_.size(); }
    std::size_t dim() const { return dataset_->dim(); }
    int level(std::uint32_t u) const { return levels_[u]; }
    const RankedColumn& ranks() const { return ranks_; }
    const HnswParams& params() const { return params_; }
    std::size_t edge_count() const;
    std::size_t memory_bytes() const;

    void save(std::ostream& out) const;
    /// Throws Error on a malformed stream or a dataset that does not fit.
    static SegmentGraphIndex load(std::istream& in, const Dataset& dataset, const std::string& column);

 private:
    struct EntryChange {
        std::uint32_t rank;
        std::uint32_t entry;
        int max_level;
    };
    struct Layer {
        std::vector<std::uint32_t> offsets;  ///< size() + 1 entries
        std::vector<Edge> edges;
    };
    struct PrefixView;

    const Dataset* dataset_ = nullptr;
    HnswParams params_;
    RankedColumn ranks_;
    std::vector<int> levels_;
    std::vector<Layer> layers_;
    std::vector<EntryChange> entries_;
};

}  // namespace fanns
