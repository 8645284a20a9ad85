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
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fanns/dataset.hpp"
#include "fanns/detail/graph_search.hpp"
#include "fanns/filter.hpp"

namespace fanns {

struct LabelGraphParams {
    std::size_t R = 32;        ///< out-degree cap
    std::size_t L_build = 64;  ///< beam width during construction
    double alpha = 1.2;        ///< distance-ratio pruning factor
    std::uint64_t seed = 42;
    /// Labels with more members than this get a sampled medoid.
    std::size_t exact_medoid_limit = 4096;

    /// Throws std::invalid_argument when R < 4, L_build < 1 or alpha < 1.
    void validate() const;
};

/// Per-label connectivity of the label-restricted subgraph.
struct ReachabilityReport {
    std::size_t labels_checked = 0;
    std::size_t labels_with_gaps = 0;
    std::size_t unreachable_items = 0;  ///< summed over labels
};

/// Single-layer proximity graph over all items of one set column (or an
/// unordered column, whose tokens act as singleton labels), with one entry
/// point per label and label-restricted beam search.
class LabelGraphIndex {
 public:
    /// Throws SchemaError when the column is missing or ordered,
    /// std::invalid_argument on bad parameters or an empty dataset.
    static LabelGraphIndex build(const Dataset& dataset, const std::string& column, const LabelGraphParams& params);

    /// Nearest items carrying `label`; empty for an unknown label.
    KnnResult label_query(std::span<const float> q, std::size_t k, std::size_t ef, std::string_view label,
                          detail::SearchStats* stats = nullptr) const;

    /// Nearest items carrying at least one of `labels`.
    KnnResult label_multi_query(std::span<const float> q, std::size_t k, std::size_t ef,
                                const std::vector<std::string>& labels, detail::SearchStats* stats = nullptr) const;

    /// Accepts EMIS / EM leaves on this column and ORs of them.
    KnnResult query(const Query& query, std::size_t ef, detail::SearchStats* stats = nullptr) const;

    /// Labels named by a filter the index can serve; throws
    /// std::invalid_argument for anything else.
    std::vector<std::string> labels_of(const Filter& filter) const;

    std::size_t size() const { return offsets_.size() - 1; }
    std::size_t dim() const { return dataset_->dim(); }
    const float* vec(std::uint32_t u) const { return dataset_->vector_ptr(u); }
    template <class F>
    void for_each_neighbor(std::uint32_t u, int /*layer*/, F&& f) const {
        for (auto v : neighbors(u)) f(v);
    }
    std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
        return {links_.data() + offsets_[u], links_.data() + offsets_[u + 1]};
    }

    std::size_t label_count() const { return entry_.size(); }
    /// -1 when the label is unknown.
    std::int32_t label_code(std::string_view label) const;
    ItemId entry_point(std::int32_t code) const { return entry_[code]; }
    std::span<const std::int32_t> labels(ItemId i) const {
        return {item_labels_.data() + label_offsets_[i], item_labels_.data() + label_offsets_[i + 1]};
    }
    bool has_label(ItemId i, std::int32_t code) const;

    /// Breadth-first check from every label's entry point through vertices
    /// carrying that label.
    ReachabilityReport reachability() const;
    /// Edges added after construction to reconnect label subgraphs.
    std::size_t repair_edges() const { return repair_edges_; }

    const LabelGraphParams& params() const { return params_; }
    const std::string& column() const { return column_; }
    std::size_t memory_bytes() const;

    void save(std::ostream& out) const;
    /// Throws Error on a malformed stream or a dataset that does not fit.
    static LabelGraphIndex load(std::istream& in, const Dataset& dataset);

 private:
    struct Builder;

    void index_names();

    KnnResult search_codes(std::span<const float> q, std::size_t k, std::size_t ef,
                           const std::vector<std::int32_t>& codes, detail::SearchStats* stats) const;

    const Dataset* dataset_ = nullptr;
    LabelGraphParams params_;
    std::string column_;
    std::vector<std::string> label_names_;
    std::unordered_map<std::string, std::int32_t> codes_;
    std::vector<std::uint32_t> label_offsets_;
    std::vector<std::int32_t> item_labels_;  ///< ascending per item
    std::vector<ItemId> entry_;             ///< per label
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> links_;
    std::size_t repair_edges_ = 0;
};

}  // namespace fanns
