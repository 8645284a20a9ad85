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

#include "fanns/caps.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "fanns/oracle.hpp"

namespace fanns {

AttributeFrequencyTree AttributeFrequencyTree::build(std::span<const ItemId> ids, const UnorderedColumn& column,
                                                     std::size_t max_depth) {
    AttributeFrequencyTree t;
    std::vector<ItemId> rest(ids.begin(), ids.end());
    while (!rest.empty() && t.levels.size() < max_depth) {
        std::unordered_map<std::int32_t, std::size_t> freq;
        for (auto i : rest) ++freq[column.codes[i]];
        std::int32_t best = -1;
        std::size_t best_n = 0;
        for (const auto& [code, cnt] : freq) {
            if (cnt > best_n || (cnt == best_n && column.dict.token(code) < column.dict.token(best))) {
                best = code;
                best_n = cnt;
            }
        }
        Level lvl;
        lvl.code = best;
        std::vector<ItemId> keep;
        for (auto i : rest) (column.codes[i] == best ? lvl.ids : keep).push_back(i);
        t.levels.push_back(std::move(lvl));
        rest.swap(keep);
    }
    t.remainder = std::move(rest);
    return t;
}

std::size_t AttributeFrequencyTree::item_count() const {
    std::size_t n = remainder.size();
    for (const auto& l : levels) n += l.ids.size();
    return n;
}

CapsIndex CapsIndex::build(const Dataset& dataset, const std::string& column, const CapsParams& params) {
    const std::size_t col = dataset.schema().require(column);
    if (dataset.schema().columns()[col].kind != AttributeKind::Unordered) {
        throw SchemaError("caps: column '" + column + "' is not unordered");
    }
    if (params.B == 0 || params.B > dataset.size()) throw std::invalid_argument("caps: need 1 <= B <= n");
    CapsIndex idx;
    idx.dataset_ = &dataset;
    idx.params_ = params;
    idx.column_ = col;
    const auto train = sample_rows(dataset.vectors(), dataset.dim(), params.max_training_points, params.seed);
    idx.model_ = kmeans_train(train, dataset.dim(), params.B, params.iters, params.seed);
    idx.clusters_.assign(params.B, {});
    for (ItemId i = 0; i < dataset.size(); ++i) idx.clusters_[idx.model_.assign(dataset.vector_ptr(i))].push_back(i);
    const auto& uc = dataset.unordered_column(col);
    idx.trees_.reserve(params.B);
    for (const auto& members : idx.clusters_) idx.trees_.push_back(AttributeFrequencyTree::build(members, uc, params.max_depth));
    return idx;
}

KnnResult CapsIndex::query(const Query& query, std::size_t w, std::size_t* candidates) const {
    check_query(query, *dataset_);
    if (w == 0 || w > model_.c) throw std::invalid_argument("caps: w must be in [1, B]");
    const auto* leaf = query.filter ? std::get_if<EmLeaf>(&query.filter->node().body) : nullptr;
    const std::string& name = dataset_->schema().columns()[column_].name;
    if (leaf == nullptr || leaf->column != name || !std::holds_alternative<std::string>(leaf->value)) {
        throw std::invalid_argument("caps: filter must be a single EM leaf on column '" + name + "'");
    }
    const std::int32_t code = dataset_->unordered_column(column_).dict.find(std::get<std::string>(leaf->value));
    std::vector<ItemId> ids;
    if (code >= 0) {
        const BoundFilter pred(*query.filter, *dataset_);
        for (auto b : model_.nearest(query.vector.data(), w)) {
            auto part = trees_[b].extract(code, pred);
            ids.insert(ids.end(), part.begin(), part.end());
        }
    }
    if (candidates) *candidates = ids.size();
    std::sort(ids.begin(), ids.end());
    return exact_knn_over(*dataset_, query.vector, query.k, ids);
}

std::size_t CapsIndex::memory_bytes() const {
    std::size_t bytes = model_.centroids.size() * sizeof(float);
    for (const auto& c : clusters_) bytes += c.size() * sizeof(ItemId);
    for (const auto& t : trees_) bytes += t.item_count() * sizeof(ItemId) + t.levels.size() * sizeof(AttributeFrequencyTree::Level);
    return bytes;
}

}  // namespace fanns
