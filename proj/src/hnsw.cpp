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

#include "fanns/hnsw.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fanns/serialize.hpp"

namespace fanns {

void HnswParams::validate() const {
    if (M < 2) throw std::invalid_argument("HNSW: M must be at least 2");
    if (ef_construction < M) throw std::invalid_argument("HNSW: ef_construction must be at least M");
    if (gamma < 1) throw std::invalid_argument("HNSW: gamma must be at least 1");
}

namespace detail {

int draw_level(std::mt19937_64& rng, double level_mult) {
    // Uniform in (0, 1]: 53 random mantissa bits, shifted off zero.
    const double u = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double level = std::floor(-std::log(u) * level_mult);
    return static_cast<int>(std::min(level, 30.0));
}

HnswBuilder::HnswBuilder(const Dataset& dataset, const HnswParams& params, std::vector<ItemId> order)
    : dataset_(&dataset), params_(params), order_(std::move(order)) {
    params_.validate();
    if (order_.empty()) throw std::invalid_argument("HNSW: cannot build over zero items");
    for (auto id : order_) {
        if (id >= dataset.size()) throw std::invalid_argument("HNSW: insertion order names an unknown item");
    }
    std::mt19937_64 rng(params_.seed);
    const double mult = 1.0 / std::log(static_cast<double>(params_.M));
    levels_.resize(order_.size());
    for (auto& l : levels_) l = draw_level(rng, mult);
    links_.resize(order_.size());
}

double HnswBuilder::pair_distance(std::uint32_t a, std::uint32_t b) const {
    return std::sqrt(simd::active_kernels().l2_sqr(vec(a), vec(b), dim()));
}

std::vector<Link> HnswBuilder::select_neighbors(std::uint32_t /*owner*/, const std::vector<Link>& candidates,
                                                std::size_t max_count) const {
    if (candidates.size() < max_count) return candidates;
    std::vector<Link> kept, pruned;
    kept.reserve(max_count);
    for (const auto& c : candidates) {
        if (kept.size() >= max_count) break;
        bool diverse = true;
        for (const auto& r : kept) {
            if (pair_distance(c.node, r.node) < c.dist) {
                diverse = false;
                break;
            }
        }
        (diverse ? kept : pruned).push_back(c);
    }
    if (params_.gamma > 1) {
        for (const auto& p : pruned) {
            if (kept.size() >= max_count) break;
            kept.push_back(p);
        }
        std::sort(kept.begin(), kept.end(), link_less);
    }
    return kept;
}

void HnswBuilder::connect(std::uint32_t owner, std::uint32_t added, double dist, int layer,
                          HnswBuildObserver* observer) {
    auto& list = links_[owner][layer];
    std::vector<Link> before;
    if (observer) before = list;
    const Link link{added, dist};
    if (list.size() < params_.cap(layer)) {
        list.insert(std::lower_bound(list.begin(), list.end(), link, link_less), link);
    } else {
        std::vector<Link> candidates = list;
        candidates.insert(std::lower_bound(candidates.begin(), candidates.end(), link, link_less), link);
        list = select_neighbors(owner, candidates, params_.cap(layer));
    }
    if (observer) observer->on_replace(owner, layer, before, list, static_cast<std::uint32_t>(inserted_));
}

void HnswBuilder::insert_next(HnswBuildObserver* observer) {
    if (inserted_ >= order_.size()) throw std::logic_error("HNSW: all items already inserted");
    const auto u = static_cast<std::uint32_t>(inserted_++);
    const int level = levels_[u];
    links_[u].resize(level + 1);
    if (u == 0) {
        entry_ = 0;
        max_level_ = level;
        return;
    }

    const QueryDistance<HnswBuilder> dist(*this, vec(u), nullptr);
    const PlainPolicy<HnswBuilder> plain{*this};
    Candidate cur{dist(entry_), entry_};
    if (level < max_level_) cur = greedy_descend(*this, plain, dist, cur, max_level_, level);

    std::vector<Candidate> entries{cur};
    auto& visited = thread_visited(1);
    for (int layer = std::min(level, max_level_); layer >= 0; --layer) {
        auto found = search_layer(*this, plain, dist, entries, params_.ef_construction, layer, visited);
        std::vector<Link> candidates;
        candidates.reserve(found.size());
        for (const auto& c : found) candidates.push_back({c.node, c.dist});
        const std::size_t want = std::min(params_.M * params_.gamma, params_.cap(layer));
        auto selected = select_neighbors(u, candidates, want);

        if (observer) observer->on_replace(u, layer, {}, selected, u + 1);
        links_[u][layer] = selected;
        for (const auto& s : selected) connect(s.node, u, s.dist, layer, observer);
        entries = std::move(found);
    }
    if (level > max_level_) {
        entry_ = u;
        max_level_ = level;
    }
}

void HnswBuilder::insert_all(HnswBuildObserver* observer) {
    while (inserted_ < order_.size()) insert_next(observer);
}

}  // namespace detail

HnswIndex HnswIndex::build(const Dataset& dataset, const HnswParams& params) {
    if (dataset.empty()) throw std::invalid_argument("HNSW: cannot build over an empty dataset");
    std::vector<ItemId> order(dataset.size());
    std::iota(order.begin(), order.end(), ItemId{0});
    return build(dataset, params, std::move(order));
}

HnswIndex HnswIndex::build(const Dataset& dataset, const HnswParams& params, std::vector<ItemId> order) {
    detail::HnswBuilder builder(dataset, params, std::move(order));
    builder.insert_all();
    return from_builder(builder);
}

HnswIndex HnswIndex::from_builder(const detail::HnswBuilder& builder) {
    HnswIndex idx;
    idx.dataset_ = &builder.dataset();
    idx.params_ = builder.params();
    const std::size_t n = builder.inserted();
    idx.ext_.assign(builder.order().begin(), builder.order().begin() + static_cast<std::ptrdiff_t>(n));
    idx.levels_.assign(builder.levels().begin(), builder.levels().begin() + static_cast<std::ptrdiff_t>(n));
    idx.entry_ = builder.entry_point();
    idx.max_level_ = builder.max_level();
    idx.base_offsets_.reserve(n + 1);
    idx.base_offsets_.push_back(0);
    idx.upper_.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        const auto& per_layer = builder.links()[u];
        for (const auto& l : per_layer[0]) idx.base_links_.push_back(l.node);
        idx.base_offsets_.push_back(static_cast<std::uint32_t>(idx.base_links_.size()));
        for (std::size_t layer = 1; layer < per_layer.size(); ++layer) {
            std::vector<std::uint32_t> ids;
            ids.reserve(per_layer[layer].size());
            for (const auto& l : per_layer[layer]) ids.push_back(l.node);
            idx.upper_[u].push_back(std::move(ids));
        }
    }
    return idx;
}

void HnswIndex::check_width(std::size_t k, std::size_t ef) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (ef < k) throw std::invalid_argument("search width ef must be >= k");
}

KnnResult HnswIndex::to_result(const std::vector<detail::Candidate>& found, std::size_t k) const {
    KnnResult out;
    out.reserve(found.size());
    for (const auto& c : found) out.push_back({ext_[c.node], c.dist});
    finalize_top_k(out, k);
    return out;
}

KnnResult HnswIndex::search(std::span<const float> q, std::size_t k, std::size_t ef,
                            detail::SearchStats* stats) const {
    using namespace detail;
    check_width(k, ef);
    if (q.size() != dim()) throw std::invalid_argument("query dimensionality does not match the index");
    if (ext_.empty()) return {};
    const QueryDistance<HnswIndex> dist(*this, q.data(), stats);
    const PlainPolicy<HnswIndex> plain{*this};
    Candidate cur{dist(entry_), entry_};
    cur = greedy_descend(*this, plain, dist, cur, max_level_, 0);
    return to_result(search_layer(*this, plain, dist, {cur}, ef, 0, thread_visited(0), stats), k);
}

KnnResult HnswIndex::search_visit_all(const Query& query, std::size_t ef, detail::SearchStats* stats) const {
    check_query(query, *dataset_);
    if (!query.filter) throw std::invalid_argument("search_visit_all needs a filter");
    const BoundFilter pred(*query.filter, *dataset_);
    return search_visit_all_with(query.vector, query.k, ef, pred, stats);
}

KnnResult HnswIndex::search_induced(const Query& query, std::size_t ef, detail::SearchStats* stats) const {
    check_query(query, *dataset_);
    if (!query.filter) throw std::invalid_argument("search_induced needs a filter");
    const BoundFilter pred(*query.filter, *dataset_);
    return search_induced_with(query.vector, query.k, ef, pred, stats);
}

std::size_t HnswIndex::memory_bytes() const {
    std::size_t bytes = ext_.size() * sizeof(ItemId) + levels_.size() * sizeof(int) +
                        base_offsets_.size() * sizeof(std::uint32_t) + base_links_.size() * sizeof(std::uint32_t);
    for (const auto& layers : upper_) {
        for (const auto& l : layers) bytes += l.size() * sizeof(std::uint32_t) + sizeof(l);
    }
    return bytes;
}

namespace {
constexpr std::string_view kHnswMagic = "FANNSHNW";
constexpr std::uint32_t kHnswVersion = 1;
}  // namespace

void HnswIndex::save(std::ostream& out) const {
    io::BinaryWriter w(out);
    w.header(kHnswMagic, kHnswVersion);
    w.put<std::uint64_t>(params_.M);
    w.put<std::uint64_t>(params_.ef_construction);
    w.put<std::uint64_t>(params_.gamma);
    w.put<std::uint64_t>(params_.m_beta);
    w.put<std::uint64_t>(params_.seed);
    w.put<std::uint64_t>(dataset_->size());
    w.put<std::uint64_t>(dataset_->dim());
    w.put<std::uint32_t>(entry_);
    w.put<std::int32_t>(max_level_);
    w.put_array(ext_);
    std::vector<std::int32_t> levels(levels_.begin(), levels_.end());
    w.put_array(levels);
    w.put_array(base_offsets_);
    w.put_array(base_links_);
    // Upper layers: for each layer, offsets over the nodes present on it
    // (ascending node order) and the concatenated neighbor ids.
    for (int layer = 1; layer <= max_level_; ++layer) {
        std::vector<std::uint32_t> offsets{0}, ids;
        for (std::size_t u = 0; u < ext_.size(); ++u) {
            if (levels_[u] < layer) continue;
            const auto& list = upper_[u][layer - 1];
            ids.insert(ids.end(), list.begin(), list.end());
            offsets.push_back(static_cast<std::uint32_t>(ids.size()));
        }
        w.put_array(offsets);
        w.put_array(ids);
    }
}

HnswIndex HnswIndex::load(std::istream& in, const Dataset& dataset) {
    io::BinaryReader r(in);
    r.header(kHnswMagic, kHnswVersion);
    HnswIndex idx;
    idx.dataset_ = &dataset;
    idx.params_.M = r.get<std::uint64_t>();
    idx.params_.ef_construction = r.get<std::uint64_t>();
    idx.params_.gamma = r.get<std::uint64_t>();
    idx.params_.m_beta = r.get<std::uint64_t>();
    idx.params_.seed = r.get<std::uint64_t>();
    const auto n = r.get<std::uint64_t>();
    const auto d = r.get<std::uint64_t>();
    if (n != dataset.size() || d != dataset.dim()) throw Error("HNSW snapshot was built for a different dataset");
    idx.entry_ = r.get<std::uint32_t>();
    idx.max_level_ = r.get<std::int32_t>();
    idx.ext_ = r.get_array<ItemId>();
    const auto levels = r.get_array<std::int32_t>();
    idx.levels_.assign(levels.begin(), levels.end());
    idx.base_offsets_ = r.get_array<std::uint32_t>();
    idx.base_links_ = r.get_array<std::uint32_t>();
    const std::size_t nodes = idx.ext_.size();
    if (idx.levels_.size() != nodes || idx.base_offsets_.size() != nodes + 1 ||
        idx.base_offsets_.back() != idx.base_links_.size() || (nodes > 0 && idx.entry_ >= nodes)) {
        throw Error("HNSW snapshot is inconsistent");
    }
    for (auto id : idx.ext_) {
        if (id >= dataset.size()) throw Error("HNSW snapshot references an unknown item");
    }
    for (auto v : idx.base_links_) {
        if (v >= nodes) throw Error("HNSW snapshot has a dangling edge");
    }
    idx.upper_.resize(nodes);
    for (int layer = 1; layer <= idx.max_level_; ++layer) {
        const auto offsets = r.get_array<std::uint32_t>();
        const auto ids = r.get_array<std::uint32_t>();
        std::size_t slot = 0;
        for (std::size_t u = 0; u < nodes; ++u) {
            if (idx.levels_[u] < layer) continue;
            if (slot + 1 >= offsets.size() || offsets[slot + 1] > ids.size()) throw Error("HNSW snapshot is inconsistent");
            std::vector<std::uint32_t> list(ids.begin() + offsets[slot], ids.begin() + offsets[slot + 1]);
            for (auto v : list) {
                if (v >= nodes) throw Error("HNSW snapshot has a dangling edge");
            }
            idx.upper_[u].push_back(std::move(list));
            ++slot;
        }
    }
    return idx;
}

}  // namespace fanns
