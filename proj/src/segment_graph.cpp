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

#include "fanns/segment_graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "fanns/oracle.hpp"
#include "fanns/serialize.hpp"

namespace fanns {

namespace {

constexpr std::uint32_t kOpen = std::numeric_limits<std::uint32_t>::max();

struct Record {
    std::uint32_t target;
    double dist;
    std::uint32_t birth;
    std::uint32_t death;
};

// Turns neighbor-list replacements into edge lifetimes.
class LifetimeRecorder : public detail::HnswBuildObserver {
 public:
    explicit LifetimeRecorder(std::size_t n) : records_(n) {}

    void on_replace(std::uint32_t owner, int layer, const std::vector<detail::Link>& before,
                    const std::vector<detail::Link>& after, std::uint32_t rank) override {
        auto& per_layer = records_[owner];
        if (per_layer.size() <= static_cast<std::size_t>(layer)) per_layer.resize(layer + 1);
        auto& recs = per_layer[layer];
        auto contains = [](const std::vector<detail::Link>& list, std::uint32_t node) {
            return std::any_of(list.begin(), list.end(), [&](const detail::Link& l) { return l.node == node; });
        };
        for (const auto& l : before) {
            if (contains(after, l.node)) continue;
            for (auto& r : recs) {
                if (r.target == l.node && r.death == kOpen) r.death = rank;
            }
        }
        for (const auto& l : after) {
            if (!contains(before, l.node)) recs.push_back({l.node, l.dist, rank, kOpen});
        }
    }

    std::vector<std::vector<std::vector<Record>>> records_;  // [owner][layer]
};

}  // namespace

struct SegmentGraphIndex::PrefixView {
    const SegmentGraphIndex& g;
    std::uint32_t prefix;

    std::size_t size() const { return g.size(); }
    std::size_t dim() const { return g.dim(); }
    const float* vec(std::uint32_t u) const { return g.dataset_->vector_ptr(g.ranks_.ids[u]); }
    template <class F>
    void for_each_neighbor(std::uint32_t u, int layer, F&& f) const {
        for (const auto& e : g.edges(u, layer)) {
            if (e.birth <= prefix && prefix < e.death) f(e.target);
        }
    }
};

SegmentGraphIndex SegmentGraphIndex::build(const Dataset& dataset, const std::string& column,
                                           const HnswParams& params) {
    if (dataset.empty()) throw std::invalid_argument("segment graph: cannot build over an empty dataset");
    SegmentGraphIndex g;
    g.dataset_ = &dataset;
    g.params_ = params;
    g.ranks_ = RankedColumn::build(dataset, column);
    const std::size_t n = g.ranks_.size();
    if (n + 1 >= kOpen) throw std::invalid_argument("segment graph: too many items");

    detail::HnswBuilder builder(dataset, params, g.ranks_.ids);
    LifetimeRecorder recorder(n);
    while (builder.inserted() < n) {
        builder.insert_next(&recorder);
        const auto rank = static_cast<std::uint32_t>(builder.inserted());
        if (g.entries_.empty() || g.entries_.back().entry != builder.entry_point() ||
            g.entries_.back().max_level != builder.max_level()) {
            g.entries_.push_back({rank, builder.entry_point(), builder.max_level()});
        }
    }
    g.levels_ = builder.levels();

    const int top = builder.max_level();
    const auto never = static_cast<std::uint32_t>(n + 1);
    g.layers_.resize(top + 1);
    for (int layer = 0; layer <= top; ++layer) {
        auto& L = g.layers_[layer];
        L.offsets.reserve(n + 1);
        L.offsets.push_back(0);
        for (std::size_t u = 0; u < n; ++u) {
            auto& per_layer = recorder.records_[u];
            if (static_cast<std::size_t>(layer) < per_layer.size()) {
                auto& recs = per_layer[layer];
                std::sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) {
                    if (a.dist != b.dist) return a.dist < b.dist;
                    if (a.target != b.target) return a.target < b.target;
                    return a.birth < b.birth;
                });
                for (const auto& r : recs) L.edges.push_back({r.target, r.birth, r.death == kOpen ? never : r.death});
                recs = {};
            }
            L.offsets.push_back(static_cast<std::uint32_t>(L.edges.size()));
        }
    }
    return g;
}

std::span<const SegmentGraphIndex::Edge> SegmentGraphIndex::edges(std::uint32_t u, int layer) const {
    const auto& L = layers_[layer];
    return {L.edges.data() + L.offsets[u], L.edges.data() + L.offsets[u + 1]};
}

std::vector<std::uint32_t> SegmentGraphIndex::neighbors_at(std::uint32_t u, int layer, std::size_t prefix) const {
    std::vector<std::uint32_t> out;
    if (layer >= static_cast<int>(layers_.size())) return out;
    PrefixView{*this, static_cast<std::uint32_t>(prefix)}.for_each_neighbor(u, layer,
                                                                         [&](std::uint32_t v) { out.push_back(v); });
    return out;
}

std::pair<std::uint32_t, int> SegmentGraphIndex::entry_at(std::size_t prefix) const {
    if (prefix == 0 || entries_.empty()) return {0, -1};
    auto it = std::upper_bound(entries_.begin(), entries_.end(), prefix,
                               [](std::size_t p, const EntryChange& e) { return p < e.rank; });
    --it;
    return {it->entry, it->max_level};
}

KnnResult SegmentGraphIndex::query_prefix(std::span<const float> q, std::size_t k, std::size_t ef,
                                          std::size_t prefix, detail::SearchStats* stats) const {
    using namespace detail;
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (ef < k) throw std::invalid_argument("search width ef must be >= k");
    if (q.size() != dim()) throw std::invalid_argument("query dimensionality does not match the index");
    prefix = std::min(prefix, size());
    if (prefix == 0) return {};
    const PrefixView view{*this, static_cast<std::uint32_t>(prefix)};
    const auto [entry, top] = entry_at(prefix);
    const QueryDistance<PrefixView> dist(view, q.data(), stats);
    const PlainPolicy<PrefixView> plain{view};
    Candidate cur{dist(entry), entry};
    cur = greedy_descend(view, plain, dist, cur, top, 0);
    const auto found = search_layer(view, plain, dist, {cur}, ef, 0, thread_visited(0), stats);
    KnnResult out;
    out.reserve(found.size());
    for (const auto& c : found) out.push_back({ranks_.ids[c.node], c.dist});
    finalize_top_k(out, k);
    return out;
}

KnnResult SegmentGraphIndex::query_leq(std::span<const float> q, std::size_t k, std::size_t ef,
                                       const OrderedValue& upper_value, detail::SearchStats* stats) const {
    const auto b = std::upper_bound(ranks_.values.begin(), ranks_.values.end(), upper_value) - ranks_.values.begin();
    return query_prefix(q, k, ef, static_cast<std::size_t>(b), stats);
}

KnnResult SegmentGraphIndex::query(const Query& query, std::size_t ef, detail::SearchStats* stats) const {
    check_query(query, *dataset_);
    if (!query.filter) throw std::invalid_argument("segment graph query needs a range filter");
    if (ef < query.k) throw std::invalid_argument("search width ef must be >= k");
    const auto [low, high] = ranks_.bounds_of(*query.filter);
    if (ranks_.values.empty() || low <= ranks_.values.front()) {
        return query_leq(query.vector, query.k, ef, high, stats);
    }
    const auto [first, last] = ranks_.rank_range(low, high);
    if (stats) stats->distance_computations += last - first;
    return exact_knn_over(*dataset_, query.vector, query.k,
                          std::span<const ItemId>(ranks_.ids.data() + first, last - first));
}

std::size_t SegmentGraphIndex::edge_count() const {
    std::size_t total = 0;
    for (const auto& L : layers_) total += L.edges.size();
    return total;
}

std::size_t SegmentGraphIndex::memory_bytes() const {
    std::size_t bytes = ranks_.size() * (sizeof(ItemId) + sizeof(OrderedValue) + sizeof(int));
    for (const auto& L : layers_) bytes += L.offsets.size() * sizeof(std::uint32_t) + L.edges.size() * sizeof(Edge);
    return bytes + entries_.size() * sizeof(EntryChange);
}

namespace {
constexpr std::string_view kSegMagic = "FANNSSEG";
constexpr std::uint32_t kSegVersion = 1;
}  // namespace

void SegmentGraphIndex::save(std::ostream& out) const {
    io::BinaryWriter w(out);
    w.header(kSegMagic, kSegVersion);
    w.put<std::uint64_t>(params_.M);
    w.put<std::uint64_t>(params_.ef_construction);
    w.put<std::uint64_t>(params_.gamma);
    w.put<std::uint64_t>(params_.m_beta);
    w.put<std::uint64_t>(params_.seed);
    w.put<std::uint64_t>(size());
    w.put<std::uint64_t>(dim());
    std::vector<std::int32_t> levels(levels_.begin(), levels_.end());
    w.put_array(levels);
    std::vector<std::uint32_t> er, ee;
    std::vector<std::int32_t> el;
    for (const auto& e : entries_) {
        er.push_back(e.rank);
        ee.push_back(e.entry);
        el.push_back(e.max_level);
    }
    w.put_array(er);
    w.put_array(ee);
    w.put_array(el);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(layers_.size()));
    for (const auto& L : layers_) {
        w.put_array(L.offsets);
        std::vector<std::uint32_t> targets, births, deaths;
        for (const auto& e : L.edges) {
            targets.push_back(e.target);
            births.push_back(e.birth);
            deaths.push_back(e.death);
        }
        w.put_array(targets);
        w.put_array(births);
        w.put_array(deaths);
    }
}

SegmentGraphIndex SegmentGraphIndex::load(std::istream& in, const Dataset& dataset, const std::string& column) {
    io::BinaryReader r(in);
    r.header(kSegMagic, kSegVersion);
    SegmentGraphIndex g;
    g.dataset_ = &dataset;
    g.params_.M = r.get<std::uint64_t>();
    g.params_.ef_construction = r.get<std::uint64_t>();
    g.params_.gamma = r.get<std::uint64_t>();
    g.params_.m_beta = r.get<std::uint64_t>();
    g.params_.seed = r.get<std::uint64_t>();
    const auto n = r.get<std::uint64_t>();
    const auto d = r.get<std::uint64_t>();
    if (n != dataset.size() || d != dataset.dim()) throw Error("segment graph snapshot was built for a different dataset");
    g.ranks_ = RankedColumn::build(dataset, column);
    const auto levels = r.get_array<std::int32_t>();
    g.levels_.assign(levels.begin(), levels.end());
    const auto er = r.get_array<std::uint32_t>();
    const auto ee = r.get_array<std::uint32_t>();
    const auto el = r.get_array<std::int32_t>();
    if (levels.size() != n || er.size() != ee.size() || er.size() != el.size()) throw Error("segment graph snapshot is inconsistent");
    for (std::size_t i = 0; i < er.size(); ++i) {
        if (ee[i] >= n) throw Error("segment graph snapshot has a bad entry point");
        g.entries_.push_back({er[i], ee[i], el[i]});
    }
    const auto layers = r.get<std::uint32_t>();
    if (layers > 64) throw Error("segment graph snapshot is inconsistent");
    g.layers_.resize(layers);
    for (auto& L : g.layers_) {
        L.offsets = r.get_array<std::uint32_t>();
        const auto targets = r.get_array<std::uint32_t>();
        const auto births = r.get_array<std::uint32_t>();
        const auto deaths = r.get_array<std::uint32_t>();
        if (L.offsets.size() != n + 1 || L.offsets.back() != targets.size() || births.size() != targets.size() ||
            deaths.size() != targets.size()) {
            throw Error("segment graph snapshot is inconsistent");
        }
        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (targets[i] >= n || births[i] >= deaths[i]) throw Error("segment graph snapshot has a bad edge");
            L.edges.push_back({targets[i], births[i], deaths[i]});
        }
    }
    return g;
}

}  // namespace fanns
