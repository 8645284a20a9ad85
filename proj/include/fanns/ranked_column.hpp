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

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fanns/dataset.hpp"
#include "fanns/filter.hpp"

namespace fanns {

/// Items of one ordered column sorted by (value, id). Position in this
/// order is the item's rank (0-based here; the segment graph reports the
/// 1-based insertion rank).
struct RankedColumn {
    std::string name;
    std::size_t column = 0;
    std::vector<ItemId> ids;
    std::vector<OrderedValue> values;

    /// Throws SchemaError when the column is unknown or not ordered.
    static RankedColumn build(const Dataset& dataset, const std::string& column_name) {
        RankedColumn r;
        r.name = column_name;
        r.column = dataset.schema().require(column_name);
        if (dataset.schema()[r.column].kind != AttributeKind::Ordered) {
            throw SchemaError("column '" + column_name + "' is not ordered");
        }
        const auto& vals = dataset.ordered_column(r.column).values;
        r.ids.resize(dataset.size());
        std::iota(r.ids.begin(), r.ids.end(), ItemId{0});
        std::stable_sort(r.ids.begin(), r.ids.end(), [&](ItemId a, ItemId b) { return vals[a] < vals[b]; });
        r.values.reserve(r.ids.size());
        for (auto id : r.ids) r.values.push_back(vals[id]);
        return r;
    }

    std::size_t size() const { return ids.size(); }

    /// Half-open rank interval [first, last) of values within [low, high].
    std::pair<std::size_t, std::size_t> rank_range(const OrderedValue& low, const OrderedValue& high) const {
        const auto first = std::lower_bound(values.begin(), values.end(), low) - values.begin();
        const auto last = std::upper_bound(values.begin(), values.end(), high) - values.begin();
        if (first >= last) return {0, 0};
        return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
    }

    /// Bounds of a single R leaf (or EM on this column) as [low, high].
    /// Throws std::invalid_argument for any other filter shape.
    std::pair<OrderedValue, OrderedValue> bounds_of(const Filter& filter) const {
        if (filter.op() == Filter::Op::Range) {
            const auto& leaf = std::get<RangeLeaf>(filter.node().body);
            if (leaf.column == name) return {leaf.low, leaf.high};
        } else if (filter.op() == Filter::Op::Em) {
            const auto& leaf = std::get<EmLeaf>(filter.node().body);
            if (const auto* v = std::get_if<OrderedValue>(&leaf.value); v && leaf.column == name) return {*v, *v};
        }
        throw std::invalid_argument("range index on '" + name + "' needs a single range filter on that column");
    }
};

}  // namespace fanns
