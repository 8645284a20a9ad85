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
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "fanns/dataset.hpp"
#include "fanns/detail/graph_search.hpp"
#include "fanns/filter.hpp"

namespace fanns {

/// HNSW construction parameters.
///
/// Upper layers keep at most M * gamma neighbors. Layer 0 keeps at most
/// 2M * gamma, or m_beta clamped to [M * gamma, 2M * gamma] when m_beta is
/// set. gamma > 1 gives the densified graph used
/// for predicate-subgraph (ACORN-style) traversal: neighbor lists are topped
/// up with candidates the pruning heuristic discarded.
struct HnswParams {
    std::size_t M = 16;
    std::size_t ef_construction = 200;
    std::size_t gamma = 1;
    std::size_t m_beta = 0;
    std::uint64_t seed = 42;

    std::size_t upper_cap() const { return M * gamma; }
    std::size_t base_cap() const {
        if (m_beta == 0) return 2 * M * gamma;
        return std::clamp(m_beta, M * gamma, 2 * M * gamma);
    }
    std::size_t cap(int layer) const { return layer == 0 ? base_cap() : upper_cap(); }
    /// Throws std::invalid_argument when M < 2, ef_construction < M or gamma < 1.
    void validate() const;
};

namespace detail {

struct Link {
    std::uint32_t node;
    double dist;
};

inline bool link_less(const Link& a, const Link& b) {
    return a.dist < b.dist || (a.dist == b.dist && a.node < b.node);
}

/// Receives every neighbor-list replacement made during construction.
class HnswBuildObserver {
 public:
    virtual ~HnswBuildObserver() = default;
    /// `rank` is the 1-based insertion count of the node being inserted.
    virtual void on_replace(std::uint32_t owner, int layer, const std::vector<Link>& before,
                            const std::vector<Link>& after, std::uint32_t rank) = 0;
};

/// Incremental HNSW construction over a fixed insertion order. Node u is the
/// u-th item of that order; levels are drawn up front, one draw per node in
/// order, so any prefix of the order reproduces the same levels.
///
/// Neighbor lists are kept sorted by (distance to owner, node).
class HnswBuilder {
 public:
    HnswBuilder(const Dataset& dataset, const HnswParams& params, std::vector<ItemId> order);

    void insert_next(HnswBuildObserver* observer = nullptr);
    void insert_all(HnswBuildObserver* observer = nullptr);

    std::size_t inserted() const { return inserted_; }
    std::size_t size() const { return order_.size(); }
    std::size_t dim() const { return dataset_->dim(); }
    const float* vec(std::uint32_t u) const { return dataset_->vector_ptr(order_[u]); }
    template <class F>
    void for_each_neighbor(std::uint32_t u, int layer, F&& f) const {
        for (const auto& l : links_[u][layer]) f(l.node);
    }

    const Dataset& dataset() const { return *dataset_; }
    const HnswParams& params() const { return params_; }
    const std::vector<ItemId>& order() const { return order_; }
    const std::vector<int>& levels() const { return levels_; }
    const std::vector<std::vector<std::vector<Link>>>& links() const { return links_; }
    std::uint32_t entry_point() const { return entry_; }
    int max_level() const { return max_level_; }

 private:
    std::vector<Link> select_neighbors(std::uint32_t owner, const std::vector<Link>& sorted_candidates,
                                       std::size_t max_count) const;
    void connect(std::uint32_t owner, std::uint32_t added, double dist, int layer, HnswBuildObserver* observer);
    double pair_distance(std::uint32_t a, std::uint32_t b) const;

    const Dataset* dataset_;
    HnswParams params_;
    std::vector<ItemId> order_;
    std::vector<int> levels_;
    std::vector<std::vector<std::vector<Link>>> links_;  // [node][layer]
    std::size_t inserted_ = 0;
    std::uint32_t entry_ = 0;
    int max_level_ = -1;
};

/// Level for one uniform draw; shared so tests can reproduce the sequence.
int draw_level(std::mt19937_64& rng, double level_mult);

}  // namespace detail

/// Immutable layered proximity graph over a dataset (or an ordered subset of
/// it). Holds a reference to the dataset, which must outlive the index.
class HnswIndex {
 public:
    HnswIndex() = default;

    /// Index over every item, inserted in id order. Throws std::invalid_argument on an empty dataset.
    static HnswIndex build(const Dataset& dataset, const HnswParams& params);
    /// Index over the given items, inserted in the given order.
    static HnswIndex build(const Dataset& dataset, const HnswParams& params, std::vector<ItemId> order);
    static HnswIndex from_builder(const detail::HnswBuilder& builder);

    /// Unfiltered approximate k-NN. Throws std::invalid_argument when ef < k.
    KnnResult search(std::span<const float> q, std::size_t k, std::size_t ef,
                     detail::SearchStats* stats = nullptr) const;

    /// Traverses the whole graph; only items passing the filter are returned.
    KnnResult search_visit_all(const Query& query, std::size_t ef, detail::SearchStats* stats = nullptr) const;

    /// Traverses only the subgraph induced by matching items, with two-hop
    /// compensation when filtering leaves fewer than M neighbors.
    KnnResult search_induced(const Query& query, std::size_t ef, detail::SearchStats* stats = nullptr) const;

    /// Predicate forms; pred(ItemId) -> bool over external ids.
    template <class Pred>
    KnnResult search_visit_all_with(std::span<const float> q, std::size_t k, std::size_t ef, const Pred& pred,
                                    detail::SearchStats* stats = nullptr) const;
    template <class Pred>
    KnnResult search_induced_with(std::span<const float> q, std::size_t k, std::size_t ef, const Pred& pred,
                                  detail::SearchStats* stats = nullptr) const;

    std::size_t size() const { return ext_.size(); }
    std::size_t dim() const { return dataset_->dim(); }
    const float* vec(std::uint32_t u) const { return dataset_->vector_ptr(ext_[u]); }
    template <class F>
    void for_each_neighbor(std::uint32_t u, int layer, F&& f) const {
        for (auto v : neighbors(u, layer)) f(v);
    }

    std::span<const std::uint32_t> neighbors(std::uint32_t u, int layer) const {
        if (layer == 0) return {base_links_.data() + base_offsets_[u], base_links_.data() + base_offsets_[u + 1]};
        return upper_[u][layer - 1];
    }
    int level(std::uint32_t u) const { return levels_[u]; }
    std::uint32_t entry_point() const { return entry_; }
    int max_level() const { return max_level_; }
    ItemId external_id(std::uint32_t u) const { return ext_[u]; }
    const std::vector<ItemId>& external_ids() const { return ext_; }
    const HnswParams& params() const { return params_; }
    const Dataset& dataset() const { return *dataset_; }

    std::size_t memory_bytes() const;

    void save(std::ostream& out) const;
    /// Throws Error on a malformed stream or a dataset that does not fit.
    static HnswIndex load(std::istream& in, const Dataset& dataset);

 private:
    template <class Pred>
    struct InternalPred {
        const Pred& pred;
        const std::vector<ItemId>& ext;
        bool operator()(std::uint32_t u) const { return pred(ext[u]); }
    };

    KnnResult to_result(const std::vector<detail::Candidate>& found, std::size_t k) const;
    static void check_width(std::size_t k, std::size_t ef);

    const Dataset* dataset_ = nullptr;
    HnswParams params_;
    std::vector<ItemId> ext_;
    std::vector<int> levels_;
    std::vector<std::uint32_t> base_offsets_;
    std::vector<std::uint32_t> base_links_;
    std::vector<std::vector<std::vector<std::uint32_t>>> upper_;  // [node][layer - 1]
    std::uint32_t entry_ = 0;
    int max_level_ = -1;
};

template <class Pred>
KnnResult HnswIndex::search_visit_all_with(std::span<const float> q, std::size_t k, std::size_t ef, const Pred& pred,
                                           detail::SearchStats* stats) const {
    using namespace detail;
    check_width(k, ef);
    if (ext_.empty()) return {};
    const InternalPred<Pred> ipred{pred, ext_};
    const QueryDistance<HnswIndex> dist(*this, q.data(), stats);
    Candidate cur{dist(entry_), entry_};
    cur = greedy_descend(*this, PlainPolicy<HnswIndex>{*this}, dist, cur, max_level_, 0);
    auto found = search_layer(*this, VisitAllPolicy<HnswIndex, InternalPred<Pred>>{*this, ipred}, dist, {cur}, ef,
                              0, thread_visited(0), stats);
    return to_result(found, k);
}

template <class Pred>
KnnResult HnswIndex::search_induced_with(std::span<const float> q, std::size_t k, std::size_t ef, const Pred& pred,
                                         detail::SearchStats* stats) const {
    using namespace detail;
    check_width(k, ef);
    if (ext_.empty()) return {};
    if constexpr (requires { pred.never_matches(); }) {
        if (pred.never_matches()) return {};
    }
    const InternalPred<Pred> ipred{pred, ext_};
    const InducedPolicy<HnswIndex, InternalPred<Pred>> induced{*this, ipred, params_.M};
    const QueryDistance<HnswIndex> dist(*this, q.data(), stats);

    std::vector<Candidate> seeds;
    Candidate cur{dist(entry_), entry_};
    if (ipred(entry_)) {
        seeds.push_back(greedy_descend(*this, induced, dist, cur, max_level_, 0));
    } else {
        // Entry fails the filter: descend unfiltered, then walk layer 0 until
        // the nearest matching vertex turns up and start from there.
        cur = greedy_descend(*this, PlainPolicy<HnswIndex>{*this}, dist, cur, max_level_, 0);
        seeds = search_layer(*this, VisitAllPolicy<HnswIndex, InternalPred<Pred>>{*this, ipred}, dist, {cur}, 1, 0,
                             thread_visited(0), stats);
        if (seeds.empty()) return {};
    }
    auto found = search_layer(*this, induced, dist, seeds, ef, 0, thread_visited(0), stats);
    return to_result(found, k);
}

}  // namespace fanns
