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

#include "fanns/filter_strategies.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "fanns/distance.hpp"
#include "fanns/oracle.hpp"

namespace fanns {

namespace {

std::vector<ItemId> intersect(const std::vector<ItemId>& a, const std::vector<ItemId>& b) {
    std::vector<ItemId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<ItemId> unite(const std::vector<ItemId>& a, const std::vector<ItemId>& b) {
    std::vector<ItemId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<ItemId> complement(const std::vector<ItemId>& a, std::size_t n) {
    std::vector<ItemId> out;
    out.reserve(n - a.size());
    auto it = a.begin();
    for (ItemId i = 0; i < n; ++i) {
        if (it != a.end() && *it == i) {
            ++it;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

const TokenDictionary& dictionary_of(const Dataset& ds, std::size_t c) {
    if (ds.schema()[c].kind == AttributeKind::Set) return ds.set_column(c).dict;
    return ds.unordered_column(c).dict;
}

}  // namespace

AttributeIndexes AttributeIndexes::build(const Dataset& dataset) {
    AttributeIndexes idx;
    idx.dataset_ = &dataset;
    const auto n = static_cast<ItemId>(dataset.size());
    for (std::size_t c = 0; c < dataset.schema().size(); ++c) {
        switch (dataset.schema()[c].kind) {
            case AttributeKind::Unordered: {
                const auto& col = dataset.unordered_column(c);
                Postings p;
                p.by_code.resize(col.dict.size());
                for (ItemId i = 0; i < n; ++i) p.by_code[col.codes[i]].push_back(i);
                idx.columns_.emplace_back(std::move(p));
                break;
            }
            case AttributeKind::Set: {
                const auto& col = dataset.set_column(c);
                Postings p;
                p.by_code.resize(col.dict.size());
                for (ItemId i = 0; i < n; ++i) {
                    for (auto code : col.labels(i)) p.by_code[code].push_back(i);
                }
                idx.columns_.emplace_back(std::move(p));
                break;
            }
            case AttributeKind::Ordered: {
                const auto& values = dataset.ordered_column(c).values;
                SortedColumn s;
                s.ids.resize(n);
                std::iota(s.ids.begin(), s.ids.end(), ItemId{0});
                std::stable_sort(s.ids.begin(), s.ids.end(),
                                 [&](ItemId a, ItemId b) { return values[a] < values[b]; });
                s.values.reserve(n);
                for (auto id : s.ids) s.values.push_back(values[id]);
                idx.columns_.emplace_back(std::move(s));
                break;
            }
        }
    }
    return idx;
}

std::span<const ItemId> AttributeIndexes::postings(std::size_t column, std::string_view token) const {
    const auto& p = std::get<Postings>(columns_.at(column));
    const auto code = dictionary_of(*dataset_, column).find(token);
    if (code < 0) return {};
    return p.by_code[code];
}

std::vector<ItemId> AttributeIndexes::range_ids(std::size_t column, const OrderedValue& low,
                                                const OrderedValue& high) const {
    const auto& s = std::get<SortedColumn>(columns_.at(column));
    const auto first = std::lower_bound(s.values.begin(), s.values.end(), low);
    const auto last = std::upper_bound(s.values.begin(), s.values.end(), high);
    if (first >= last) return {};
    std::vector<ItemId> out(s.ids.begin() + (first - s.values.begin()), s.ids.begin() + (last - s.values.begin()));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ItemId> AttributeIndexes::matching_ids(const Filter& filter) const {
    check_filter(filter, dataset_->schema());
    return resolve(filter);
}

std::vector<ItemId> AttributeIndexes::resolve(const Filter& filter) const {
    const auto& schema = dataset_->schema();
    const auto& body = filter.node().body;
    switch (filter.op()) {
        case Filter::Op::Em: {
            const auto& leaf = std::get<EmLeaf>(body);
            const auto c = schema.require(leaf.column);
            if (const auto* tok = std::get_if<std::string>(&leaf.value)) {
                const auto ids = postings(c, *tok);
                return {ids.begin(), ids.end()};
            }
            const auto& v = std::get<OrderedValue>(leaf.value);
            return range_ids(c, v, v);
        }
        case Filter::Op::Range: {
            const auto& leaf = std::get<RangeLeaf>(body);
            return range_ids(schema.require(leaf.column), leaf.low, leaf.high);
        }
        case Filter::Op::Emis: {
            const auto& leaf = std::get<EmisLeaf>(body);
            const auto ids = postings(schema.require(leaf.column), leaf.token);
            return {ids.begin(), ids.end()};
        }
        case Filter::Op::And: {
            const auto& children = std::get<AndNode>(body).children;
            auto acc = resolve(children.front());
            for (std::size_t i = 1; i < children.size() && !acc.empty(); ++i) acc = intersect(acc, resolve(children[i]));
            return acc;
        }
        case Filter::Op::Or: {
            std::vector<ItemId> acc;
            for (const auto& c : std::get<OrNode>(body).children) acc = unite(acc, resolve(c));
            return acc;
        }
        case Filter::Op::Not:
            return complement(resolve(std::get<NotNode>(body).child), dataset_->size());
    }
    return {};
}

std::size_t AttributeIndexes::memory_bytes() const {
    std::size_t bytes = 0;
    for (const auto& col : columns_) {
        if (const auto* p = std::get_if<Postings>(&col)) {
            for (const auto& list : p->by_code) bytes += list.size() * sizeof(ItemId) + sizeof(list);
        } else {
            const auto& s = std::get<SortedColumn>(col);
            bytes += s.ids.size() * sizeof(ItemId) + s.values.size() * sizeof(OrderedValue);
        }
    }
    return bytes;
}

KnnResult pre_filter_query(const Dataset& dataset, const AttributeIndexes& indexes, const Query& query) {
    check_query(query, dataset);
    if (!query.filter) throw std::invalid_argument("pre-filtering needs a filter");
    const auto ids = indexes.matching_ids(*query.filter);
    return exact_knn_over(dataset, query.vector, query.k, ids);
}

KnnResult post_filter_query(const HnswIndex& index, const Query& query, std::size_t ef,
                            std::size_t initial_multiplier, detail::SearchStats* stats) {
    check_query(query, index.dataset());
    if (!query.filter) throw std::invalid_argument("post-filtering needs a filter");
    if (ef < query.k) throw std::invalid_argument("search width ef must be >= k");
    if (initial_multiplier == 0) throw std::invalid_argument("post-filter multiplier must be at least 1");
    const BoundFilter pred(*query.filter, index.dataset());
    const std::size_t n = index.size();
    std::size_t kp = std::min(initial_multiplier * query.k, std::max<std::size_t>(n, 1));
    KnnResult kept;
    for (;;) {
        const auto found = index.search(query.vector, kp, std::max(ef, kp), stats);
        kept.clear();
        for (const auto& e : found) {
            if (pred(e.id)) kept.push_back(e);
            if (kept.size() == query.k) break;
        }
        if (kept.size() >= query.k || kp >= n) break;
        kp = std::min(2 * kp, n);
    }
    return kept;
}

std::string_view strategy_tag(Strategy s) {
    switch (s) {
        case Strategy::Pre:
            return "pre";
        case Strategy::In:
            return "in";
        case Strategy::Post:
            return "post";
    }
    return "?";
}

void RouterConfig::validate() const {
    if (!(0.0 <= low_threshold && low_threshold <= high_threshold && high_threshold <= 1.0)) {
        throw std::invalid_argument("router thresholds must satisfy 0 <= low <= high <= 1");
    }
    if (post_multiplier == 0) throw std::invalid_argument("post-filter multiplier must be at least 1");
}

Strategy choose_strategy(double selectivity, const RouterConfig& config) {
    if (selectivity < config.low_threshold) return Strategy::Pre;
    if (selectivity > config.high_threshold) return Strategy::Post;
    return Strategy::In;
}

namespace {

struct IdMask {
    std::vector<std::uint8_t> bits;
    bool operator()(ItemId id) const { return bits[id] != 0; }
};

}  // namespace

RoutedResult route_and_query(const Dataset& dataset, const AttributeIndexes& indexes, const HnswIndex& index,
                             const Query& query, std::size_t ef, const RouterConfig& config) {
    config.validate();
    check_query(query, dataset);
    if (!query.filter) throw std::invalid_argument("routing needs a filter");
    if (dataset.empty()) return {};
    const auto ids = indexes.matching_ids(*query.filter);
    RoutedResult out;
    out.selectivity = static_cast<double>(ids.size()) / static_cast<double>(dataset.size());
    out.strategy = choose_strategy(out.selectivity, config);
    switch (out.strategy) {
        case Strategy::Pre:
            out.result = exact_knn_over(dataset, query.vector, query.k, ids);
            break;
        case Strategy::In: {
            if (ids.empty()) break;
            IdMask mask{std::vector<std::uint8_t>(dataset.size(), 0)};
            for (auto id : ids) mask.bits[id] = 1;
            out.result = index.search_induced_with(query.vector, query.k, ef, mask);
            break;
        }
        case Strategy::Post:
            out.result = post_filter_query(index, query, ef, config.post_multiplier);
            break;
    }
    return out;
}

double fused_distance(std::span<const float> u, std::span<const float> v, std::span<const AttributeValue> attr_a,
                      std::span<const AttributeValue> attr_b, double weight) {
    if (attr_a.size() != attr_b.size()) throw std::invalid_argument("attribute lists are misaligned");
    const double base = distance_euclidean(u, v);
    if (attr_a.empty()) return base;
    std::size_t differ = 0;
    for (std::size_t i = 0; i < attr_a.size(); ++i) differ += attr_a[i] == attr_b[i] ? 0 : 1;
    return base + weight * static_cast<double>(differ) / static_cast<double>(attr_a.size());
}

KnnResult afanns_query_fused(const Dataset& dataset, const Query& query, std::size_t k, double weight) {
    check_query(query, dataset);
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    const auto& schema = dataset.schema();
    const std::size_t m = schema.size();

    // Per column: nullopt when the query does not target it.
    std::vector<std::optional<EmLeaf>> targets(m);
    if (query.filter) {
        std::vector<Filter> leaves;
        if (query.filter->op() == Filter::Op::Em) {
            leaves.push_back(*query.filter);
        } else if (query.filter->op() == Filter::Op::And) {
            leaves = std::get<AndNode>(query.filter->node().body).children;
        } else {
            throw std::invalid_argument("fused mode supports only EM leaves joined by AND");
        }
        for (const auto& leaf : leaves) {
            if (leaf.op() != Filter::Op::Em) throw std::invalid_argument("fused mode supports only EM leaves joined by AND");
            const auto& em = std::get<EmLeaf>(leaf.node().body);
            const auto c = schema.require(em.column);
            if (targets[c]) throw std::invalid_argument("fused mode needs distinct columns");
            targets[c] = em;
        }
    }

    // Dictionary codes for the unordered targets; -1 never matches.
    std::vector<std::int32_t> codes(m, -1);
    for (std::size_t c = 0; c < m; ++c) {
        if (!targets[c]) continue;
        if (const auto* tok = std::get_if<std::string>(&targets[c]->value)) codes[c] = dataset.unordered_column(c).dict.find(*tok);
    }

    const double scale = m ? weight / static_cast<double>(m) : 0.0;
    KnnResult all;
    all.reserve(dataset.size());
    for (ItemId i = 0; i < dataset.size(); ++i) {
        std::size_t differ = 0;
        for (std::size_t c = 0; c < m; ++c) {
            if (!targets[c]) continue;
            if (const auto* v = std::get_if<OrderedValue>(&targets[c]->value)) {
                differ += dataset.ordered_column(c).values[i] == *v ? 0 : 1;
            } else {
                differ += dataset.unordered_column(c).codes[i] == codes[c] && codes[c] >= 0 ? 0 : 1;
            }
        }
        const double d = l2(query.vector.data(), dataset.vector_ptr(i), dataset.dim());
        all.push_back({i, d + scale * static_cast<double>(differ)});
    }
    finalize_top_k(all, k);
    return all;
}

}  // namespace fanns
