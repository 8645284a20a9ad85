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
#include <string_view>
#include <variant>
#include <vector>

#include "fanns/dataset.hpp"
#include "fanns/filter.hpp"
#include "fanns/hnsw.hpp"

namespace fanns {

/// Attribute-only indexes used to resolve a filter to its match set without
/// touching vectors.
class AttributeIndexes {
 public:
    /// Posting list per dictionary code (unordered and set columns).
    struct Postings {
        std::vector<std::vector<ItemId>> by_code;
    };
    /// Ids sorted by (value, id), with the values in the same order.
    struct SortedColumn {
        std::vector<ItemId> ids;
        std::vector<OrderedValue> values;
    };
    using ColumnIndex = std::variant<Postings, SortedColumn>;

    static AttributeIndexes build(const Dataset& dataset);

    const Dataset& dataset() const { return *dataset_; }
    const ColumnIndex& column(std::size_t c) const { return columns_[c]; }

    /// Posting list of `token` in an unordered or set column; empty if unseen.
    std::span<const ItemId> postings(std::size_t column, std::string_view token) const;

    /// Sorted ids of items whose value lies in [low, high], by binary search.
    std::vector<ItemId> range_ids(std::size_t column, const OrderedValue& low, const OrderedValue& high) const;

    /// Ascending ids of all matching items. Throws SchemaError on a mismatch.
    std::vector<ItemId> matching_ids(const Filter& filter) const;

    std::size_t memory_bytes() const;

 private:
    std::vector<ItemId> resolve(const Filter& filter) const;

    const Dataset* dataset_ = nullptr;
    std::vector<ColumnIndex> columns_;
};

/// Exact answer computed over the match set only. Throws
/// std::invalid_argument when the query has no filter.
KnnResult pre_filter_query(const Dataset& dataset, const AttributeIndexes& indexes, const Query& query);

/// Unfiltered search for k' = initial_multiplier * k candidates (width
/// raised to at least k'), then filtering; k' doubles until k matches are
/// found or k' reaches the index size.
KnnResult post_filter_query(const HnswIndex& index, const Query& query, std::size_t ef,
                            std::size_t initial_multiplier = 1, detail::SearchStats* stats = nullptr);

enum class Strategy { Pre, In, Post };

/// "pre", "in" or "post".
std::string_view strategy_tag(Strategy s);

struct RouterConfig {
    double low_threshold = 0.01;
    double high_threshold = 0.5;
    std::size_t post_multiplier = 1;

    /// Throws std::invalid_argument unless 0 <= low <= high <= 1.
    void validate() const;
};

/// Band membership: below low -> Pre, above high -> Post, otherwise In.
Strategy choose_strategy(double selectivity, const RouterConfig& config);

struct RoutedResult {
    KnnResult result;
    Strategy strategy = Strategy::Pre;
    double selectivity = 0.0;
};

/// Computes the selectivity from the match set and dispatches to
/// pre-filtering, induced in-filtering or post-filtering.
RoutedResult route_and_query(const Dataset& dataset, const AttributeIndexes& indexes, const HnswIndex& index,
                             const Query& query, std::size_t ef, const RouterConfig& config = {});

/// Euclidean distance plus weight times the fraction of attribute positions
/// whose values differ. Throws std::invalid_argument when the attribute
/// lists differ in length or the vectors in dimension.
double fused_distance(std::span<const float> u, std::span<const float> v, std::span<const AttributeValue> attr_a,
                      std::span<const AttributeValue> attr_b, double weight);

/// Approximately-filtered brute force: top-k under the fused distance,
/// where the query's attribute targets are the values of its EM leaves and
/// columns it does not mention count as equal. Results may violate the
/// filter. Throws std::invalid_argument unless the filter is one EM leaf or
/// an AND of EM leaves on distinct columns.
KnnResult afanns_query_fused(const Dataset& dataset, const Query& query, std::size_t k, double weight);

}  // namespace fanns
