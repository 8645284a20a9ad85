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

#include <optional>
#include <string>
#include <vector>

#include "fanns/hnsw.hpp"
#include "fanns/ranked_column.hpp"

namespace fanns {

struct SegmentTreeParams {
    std::size_t beta = 2;
    HnswParams hnsw;
    /// Nodes holding fewer items than this keep no graph and are scanned
    /// exactly at query time.
    std::size_t scan_below = 32;
};

/// β-ary tree over the rank order of one ordered column; each node owns the
/// items of a contiguous rank interval and an HNSW over them.
class SegmentTreeIndex {
 public:
    struct Node {
        std::size_t lo = 0;  ///< first rank
        std::size_t hi = 0;  ///< one past the last rank
        std::size_t depth = 0;
        std::size_t first_child = 0;
        std::size_t child_count = 0;
        std::optional<HnswIndex> graph;
        std::size_t size() const { return hi - lo; }
    };

    /// Throws SchemaError for a non-ordered column, std::invalid_argument
    /// for beta < 2 or an empty dataset.
    static SegmentTreeIndex build(const Dataset& dataset, const std::string& column, const SegmentTreeParams& params);

    /// Node ids whose intervals exactly tile ranks [lo_rank, hi_rank]
    /// (inclusive), each as high in the tree as possible. Throws
    /// std::out_of_range on bad ranks.
    std::vector<std::size_t> minimal_cover(std::size_t lo_rank, std::size_t hi_rank) const;

    /// Range-filtered k-NN: searches every cover node and merges. Throws
    /// std::invalid_argument unless the filter is one range leaf on this
    /// column, or when ef < k.
    KnnResult query(const Query& query, std::size_t ef, detail::SearchStats* stats = nullptr) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& root() const { return nodes_.front(); }
    std::size_t depth() const { return depth_; }
    const RankedColumn& ranks() const { return ranks_; }
    const SegmentTreeParams& params() const { return params_; }
    std::size_t memory_bytes() const;

 private:
    void cover(std::size_t node, std::size_t lo, std::size_t hi, std::vector<std::size_t>& out) const;

    const Dataset* dataset_ = nullptr;
    SegmentTreeParams params_;
    RankedColumn ranks_;
    std::vector<Node> nodes_;  ///< breadth-first; node 0 is the root
    std::size_t depth_ = 0;
};

}  // namespace fanns
