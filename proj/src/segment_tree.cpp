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

#include "fanns/segment_tree.hpp"

#include <deque>
#include <stdexcept>

#include "fanns/oracle.hpp"

namespace fanns {

SegmentTreeIndex SegmentTreeIndex::build(const Dataset& dataset, const std::string& column,
                                         const SegmentTreeParams& params) {
    if (params.beta < 2) throw std::invalid_argument("segment tree: beta must be at least 2");
    if (dataset.empty()) throw std::invalid_argument("segment tree: cannot build over an empty dataset");
    params.hnsw.validate();

    SegmentTreeIndex t;
    t.dataset_ = &dataset;
    t.params_ = params;
    t.ranks_ = RankedColumn::build(dataset, column);

    t.nodes_.push_back(Node{0, dataset.size(), 0, 0, 0, std::nullopt});
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
        const std::size_t size = t.nodes_[i].size();
        t.depth_ = std::max(t.depth_, t.nodes_[i].depth);
        if (size <= 1) continue;
        const std::size_t parts = std::min(params.beta, size);
        const std::size_t base = size / parts, extra = size % parts;
        t.nodes_[i].first_child = t.nodes_.size();
        t.nodes_[i].child_count = parts;
        std::size_t lo = t.nodes_[i].lo;
        const std::size_t depth = t.nodes_[i].depth + 1;
        for (std::size_t p = 0; p < parts; ++p) {
            const std::size_t len = base + (p < extra ? 1 : 0);
            t.nodes_.push_back(Node{lo, lo + len, depth, 0, 0, std::nullopt});
            lo += len;
        }
    }

    for (auto& node : t.nodes_) {
        if (node.size() < params.scan_below) continue;
        std::vector<ItemId> order(t.ranks_.ids.begin() + static_cast<std::ptrdiff_t>(node.lo),
                                  t.ranks_.ids.begin() + static_cast<std::ptrdiff_t>(node.hi));
        node.graph = HnswIndex::build(dataset, params.hnsw, std::move(order));
    }
    return t;
}

void SegmentTreeIndex::cover(std::size_t id, std::size_t lo, std::size_t hi, std::vector<std::size_t>& out) const {
    const Node& node = nodes_[id];
    if (node.hi <= lo || hi <= node.lo) return;
    if (lo <= node.lo && node.hi <= hi) {
        out.push_back(id);
        return;
    }
    for (std::size_t c = 0; c < node.child_count; ++c) cover(node.first_child + c, lo, hi, out);
}

std::vector<std::size_t> SegmentTreeIndex::minimal_cover(std::size_t lo_rank, std::size_t hi_rank) const {
    if (lo_rank > hi_rank || hi_rank >= ranks_.size()) throw std::out_of_range("segment tree: rank range out of bounds");
    std::vector<std::size_t> out;
    cover(0, lo_rank, hi_rank + 1, out);
    return out;
}

KnnResult SegmentTreeIndex::query(const Query& query, std::size_t ef, detail::SearchStats* stats) const {
    check_query(query, *dataset_);
    if (!query.filter) throw std::invalid_argument("segment tree query needs a range filter");
    if (ef < query.k) throw std::invalid_argument("search width ef must be >= k");
    const auto [low, high] = ranks_.bounds_of(*query.filter);
    const auto [first, last] = ranks_.rank_range(low, high);
    if (first == last) return {};

    KnnResult merged;
    for (auto id : minimal_cover(first, last - 1)) {
        const Node& node = nodes_[id];
        KnnResult part;
        if (node.graph) {
            part = node.graph->search(query.vector, query.k, ef, stats);
        } else {
            const std::span<const ItemId> slice(ranks_.ids.data() + node.lo, node.size());
            part = exact_knn_over(*dataset_, query.vector, query.k, slice);
            if (stats) stats->distance_computations += node.size();
        }
        merged.insert(merged.end(), part.begin(), part.end());
    }
    finalize_top_k(merged, query.k);
    return merged;
}

std::size_t SegmentTreeIndex::memory_bytes() const {
    std::size_t bytes = ranks_.ids.size() * (sizeof(ItemId) + sizeof(OrderedValue)) + nodes_.size() * sizeof(Node);
    for (const auto& node : nodes_) {
        if (node.graph) bytes += node.graph->memory_bytes();
    }
    return bytes;
}

}  // namespace fanns
