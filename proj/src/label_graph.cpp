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

#include "fanns/label_graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "fanns/distance.hpp"
#include "fanns/serialize.hpp"

namespace fanns {

void LabelGraphParams::validate() const {
    if (R < 4) throw std::invalid_argument("label graph: R must be at least 4");
    if (L_build < 1) throw std::invalid_argument("label graph: L_build must be at least 1");
    if (!(alpha >= 1.0)) throw std::invalid_argument("label graph: alpha must be at least 1");
    if (exact_medoid_limit < 1) throw std::invalid_argument("label graph: exact_medoid_limit must be positive");
}

namespace {

bool sorted_intersects(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

// Search policy: only vertices carrying one of the codes are stepped to or returned.
template <class Graph>
struct LabelPolicy {
    const Graph& g;
    std::span<const std::int32_t> codes;  // ascending
    bool admit(std::uint32_t u) const { return sorted_intersects(g.labels(u), codes); }
    template <class F>
    void expand(std::uint32_t u, int layer, F&& f) const {
        g.for_each_neighbor(u, layer, [&](std::uint32_t v) {
            if (admit(v)) f(v);
        });
    }
};

// Item minimizing the summed distance to the others; over a seeded sample
// when the group is larger than `limit`.
ItemId medoid_of(const Dataset& ds, std::vector<ItemId> members, std::size_t limit, std::uint64_t seed) {
    if (members.size() > limit) {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < limit; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, members.size() - 1);
            std::swap(members[i], members[pick(rng)]);
        }
        members.resize(limit);
        std::sort(members.begin(), members.end());
    }
    const std::size_t m = members.size();
    std::vector<double> sums(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = l2(ds.vector_ptr(members[i]), ds.vector_ptr(members[j]), ds.dim());
            sums[i] += d;
            sums[j] += d;
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i) {
        if (sums[i] < sums[best]) best = i;
    }
    return members[best];
}

}  // namespace

struct LabelGraphIndex::Builder {
    const LabelGraphIndex& idx;
    const Dataset& ds;
    const LabelGraphParams& p;
    std::vector<std::vector<std::uint32_t>> adj;

    // Graph interface over the adjacency under construction.
    std::size_t size() const { return adj.size(); }
    std::size_t dim() const { return ds.dim(); }
    const float* vec(std::uint32_t u) const { return ds.vector_ptr(u); }
    std::span<const std::int32_t> labels(std::uint32_t u) const { return idx.labels(u); }
    template <class F>
    void for_each_neighbor(std::uint32_t u, int, F&& f) const {
        for (auto v : adj[u]) f(v);
    }

    double dist(std::uint32_t a, std::uint32_t b) const { return l2(vec(a), vec(b), dim()); }

    // labels(p) ∩ labels(c) ⊆ labels(a)
    bool covers(std::uint32_t a, std::uint32_t p, std::uint32_t c) const {
        const auto lp = labels(p), lc = labels(c), la = labels(a);
        std::vector<std::int32_t> common;
        std::set_intersection(lp.begin(), lp.end(), lc.begin(), lc.end(), std::back_inserter(common));
        return std::includes(la.begin(), la.end(), common.begin(), common.end());
    }

    std::vector<std::uint32_t> prune(std::uint32_t node, std::vector<detail::Candidate> cands) const {
        std::sort(cands.begin(), cands.end(), detail::candidate_less);
        std::vector<detail::Candidate> kept, others;
        for (const auto& c : cands) {
            if (c.node == node) continue;
            (sorted_intersects(labels(node), labels(c.node)) ? kept : others).push_back(c);
        }
        for (const auto& o : others) {
            if (kept.size() >= p.R / 2) break;
            kept.push_back(o);
        }
        std::sort(kept.begin(), kept.end(), detail::candidate_less);
        std::vector<std::uint32_t> out;
        for (const auto& c : kept) {
            if (out.size() >= p.R) break;
            bool keep = true;
            for (auto a : out) {
                if (p.alpha * dist(a, c.node) <= c.dist && covers(a, node, c.node)) {
                    keep = false;
                    break;
                }
            }
            if (keep) out.push_back(c.node);
        }
        return out;
    }

    void insert(std::uint32_t node, std::uint32_t global_start, const std::vector<std::uint8_t>& inserted,
                const std::vector<ItemId>& label_entry) {
        using namespace detail;
        const QueryDistance<Builder> qd(*this, vec(node), nullptr);
        std::vector<Candidate> pool;
        auto merge = [&](const std::vector<Candidate>& found) {
            for (const auto& c : found) {
                if (std::none_of(pool.begin(), pool.end(), [&](const Candidate& x) { return x.node == c.node; })) {
                    pool.push_back(c);
                }
            }
        };
        auto& visited = thread_visited(1);
        if (inserted[global_start]) {
            merge(search_layer(*this, PlainPolicy<Builder>{*this}, qd, {{qd(global_start), global_start}}, p.L_build, 0,
                               visited));
        }
        for (auto code : labels(node)) {
            const auto e = label_entry[code];
            if (!inserted[e] || e == node) continue;
            const std::int32_t one[1] = {code};
            merge(search_layer(*this, LabelPolicy<Builder>{*this, one}, qd, {{qd(e), e}}, p.L_build, 0, visited));
        }
        adj[node] = prune(node, std::move(pool));
        for (auto n : adj[node]) {
            auto& list = adj[n];
            if (std::find(list.begin(), list.end(), node) != list.end()) continue;
            if (list.size() < p.R) {
                list.push_back(node);
                continue;
            }
            std::vector<Candidate> cands;
            cands.reserve(list.size() + 1);
            for (auto v : list) cands.push_back({dist(n, v), v});
            cands.push_back({dist(n, node), node});
            list = prune(n, std::move(cands));
        }
    }

    // Makes every label's members reachable from its entry point through
    // label-carrying vertices; returns the number of edges added.
    std::size_t repair(const std::vector<std::vector<ItemId>>& members, const std::vector<ItemId>& entry) {
        std::size_t added = 0;
        std::vector<std::uint8_t> reached(adj.size(), 0);
        for (std::size_t code = 0; code < members.size(); ++code) {
            const auto& group = members[code];
            if (group.size() < 2) continue;
            const std::int32_t one[1] = {static_cast<std::int32_t>(code)};
            auto carries = [&](std::uint32_t v) { return sorted_intersects(labels(v), one); };
            std::vector<std::uint32_t> frontier{static_cast<std::uint32_t>(entry[code])}, seen = frontier;
            reached[entry[code]] = 1;
            auto flood = [&] {
                while (!frontier.empty()) {
                    const auto u = frontier.back();
                    frontier.pop_back();
                    for (auto v : adj[u]) {
                        if (!reached[v] && carries(v)) {
                            reached[v] = 1;
                            seen.push_back(v);
                            frontier.push_back(v);
                        }
                    }
                }
            };
            flood();
            for (auto x : group) {
                if (reached[x]) continue;
                // Link from the nearest reached member, preferring one with spare degree.
                std::uint32_t best = entry[code], best_spare = std::numeric_limits<std::uint32_t>::max();
                double bd = std::numeric_limits<double>::infinity(), bsd = bd;
                for (auto y : seen) {
                    const double d = dist(x, y);
                    if (d < bd) {
                        bd = d;
                        best = y;
                    }
                    if (adj[y].size() < p.R && d < bsd) {
                        bsd = d;
                        best_spare = y;
                    }
                }
                if (best_spare != std::numeric_limits<std::uint32_t>::max()) {
                    adj[best_spare].push_back(x);
                } else {
                    // Full everywhere: replace best's farthest neighbor that does not carry the label.
                    auto& list = adj[best];
                    std::size_t slot = list.size();
                    double far = -1.0;
                    for (std::size_t i = 0; i < list.size(); ++i) {
                        const double d = dist(best, list[i]);
                        if (!carries(list[i]) && d > far) {
                            far = d;
                            slot = i;
                        }
                    }
                    if (slot == list.size()) continue;  // reported by the diagnostic
                    list[slot] = x;
                }
                ++added;
                reached[x] = 1;
                seen.push_back(x);
                frontier.push_back(x);
                flood();
            }
            for (auto v : seen) reached[v] = 0;
        }
        return added;
    }
};

LabelGraphIndex LabelGraphIndex::build(const Dataset& dataset, const std::string& column,
                                       const LabelGraphParams& params) {
    params.validate();
    if (dataset.empty()) throw std::invalid_argument("label graph: cannot build over an empty dataset");
    LabelGraphIndex g;
    g.dataset_ = &dataset;
    g.params_ = params;
    g.column_ = column;
    const auto c = dataset.schema().require(column);
    const auto n = dataset.size();
    g.label_offsets_.reserve(n + 1);
    g.label_offsets_.push_back(0);
    switch (dataset.schema()[c].kind) {
        case AttributeKind::Set: {
            const auto& col = dataset.set_column(c);
            g.label_names_ = col.dict.tokens();
            for (ItemId i = 0; i < n; ++i) {
                const auto l = col.labels(i);
                g.item_labels_.insert(g.item_labels_.end(), l.begin(), l.end());
                g.label_offsets_.push_back(static_cast<std::uint32_t>(g.item_labels_.size()));
            }
            break;
        }
        case AttributeKind::Unordered: {
            const auto& col = dataset.unordered_column(c);
            g.label_names_ = col.dict.tokens();
            for (ItemId i = 0; i < n; ++i) {
                g.item_labels_.push_back(col.codes[i]);
                g.label_offsets_.push_back(static_cast<std::uint32_t>(g.item_labels_.size()));
            }
            break;
        }
        case AttributeKind::Ordered:
            throw SchemaError("label graph needs a set or unordered column, '" + column + "' is ordered");
    }

    g.index_names();
    std::vector<std::vector<ItemId>> members(g.label_names_.size());
    for (ItemId i = 0; i < n; ++i) {
        for (auto code : g.labels(i)) members[code].push_back(i);
    }
    g.entry_.resize(members.size());
    for (std::size_t code = 0; code < members.size(); ++code) {
        g.entry_[code] = medoid_of(dataset, members[code], params.exact_medoid_limit, params.seed + code);
    }
    std::vector<ItemId> everyone(n);
    std::iota(everyone.begin(), everyone.end(), ItemId{0});
    const ItemId global_start = medoid_of(dataset, everyone, std::min<std::size_t>(params.exact_medoid_limit, 1024),
                                          params.seed);

    // Insertion order: global start, then label entry points, then the rest shuffled.
    std::vector<ItemId> order{global_start};
    std::vector<std::uint8_t> queued(n, 0);
    queued[global_start] = 1;
    std::vector<ItemId> entries = g.entry_;
    std::sort(entries.begin(), entries.end());
    for (auto e : entries) {
        if (!queued[e]) {
            queued[e] = 1;
            order.push_back(e);
        }
    }
    std::vector<ItemId> rest;
    for (ItemId i = 0; i < n; ++i) {
        if (!queued[i]) rest.push_back(i);
    }
    std::mt19937_64 rng(params.seed);
    std::shuffle(rest.begin(), rest.end(), rng);
    order.insert(order.end(), rest.begin(), rest.end());

    Builder b{g, dataset, params, std::vector<std::vector<std::uint32_t>>(n)};
    std::vector<std::uint8_t> inserted(n, 0);
    for (auto u : order) {
        b.insert(u, global_start, inserted, g.entry_);
        inserted[u] = 1;
    }
    g.repair_edges_ = b.repair(members, g.entry_);

    g.offsets_.reserve(n + 1);
    g.offsets_.push_back(0);
    for (const auto& list : b.adj) {
        g.links_.insert(g.links_.end(), list.begin(), list.end());
        g.offsets_.push_back(static_cast<std::uint32_t>(g.links_.size()));
    }
    return g;
}

void LabelGraphIndex::index_names() {
    codes_.clear();
    for (std::size_t i = 0; i < label_names_.size(); ++i) codes_.emplace(label_names_[i], static_cast<std::int32_t>(i));
}

std::int32_t LabelGraphIndex::label_code(std::string_view label) const {
    const auto it = codes_.find(std::string(label));
    return it == codes_.end() ? -1 : it->second;
}

bool LabelGraphIndex::has_label(ItemId i, std::int32_t code) const {
    const auto l = labels(i);
    return std::binary_search(l.begin(), l.end(), code);
}

KnnResult LabelGraphIndex::search_codes(std::span<const float> q, std::size_t k, std::size_t ef,
                                        const std::vector<std::int32_t>& codes, detail::SearchStats* stats) const {
    using namespace detail;
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (ef < k) throw std::invalid_argument("search width ef must be >= k");
    if (q.size() != dim()) throw std::invalid_argument("query dimensionality does not match the index");
    if (codes.empty()) return {};
    const QueryDistance<LabelGraphIndex> qd(*this, q.data(), stats);
    std::vector<Candidate> starts;
    for (auto code : codes) {
        const auto e = entry_[code];
        if (std::none_of(starts.begin(), starts.end(), [&](const Candidate& c) { return c.node == e; })) {
            starts.push_back({qd(e), e});
        }
    }
    const auto found = search_layer(*this, LabelPolicy<LabelGraphIndex>{*this, codes}, qd, starts, ef, 0,
                                    thread_visited(0), stats);
    KnnResult out;
    out.reserve(found.size());
    for (const auto& c : found) out.push_back({c.node, c.dist});
    finalize_top_k(out, k);
    return out;
}

KnnResult LabelGraphIndex::label_query(std::span<const float> q, std::size_t k, std::size_t ef,
                                       std::string_view label, detail::SearchStats* stats) const {
    const auto code = label_code(label);
    std::vector<std::int32_t> codes;
    if (code >= 0) codes.push_back(code);
    return search_codes(q, k, ef, codes, stats);
}

KnnResult LabelGraphIndex::label_multi_query(std::span<const float> q, std::size_t k, std::size_t ef,
                                             const std::vector<std::string>& labels,
                                             detail::SearchStats* stats) const {
    if (labels.empty()) throw std::invalid_argument("label list must not be empty");
    std::vector<std::int32_t> codes;
    for (const auto& l : labels) {
        const auto code = label_code(l);
        if (code >= 0) codes.push_back(code);
    }
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    return search_codes(q, k, ef, codes, stats);
}

std::vector<std::string> LabelGraphIndex::labels_of(const Filter& filter) const {
    const auto fail = [&]() -> std::vector<std::string> {
        throw std::invalid_argument("label graph on '" + column_ + "' serves only label filters on that column");
    };
    switch (filter.op()) {
        case Filter::Op::Emis: {
            const auto& leaf = std::get<EmisLeaf>(filter.node().body);
            if (leaf.column != column_) return fail();
            return {leaf.token};
        }
        case Filter::Op::Em: {
            const auto& leaf = std::get<EmLeaf>(filter.node().body);
            const auto* tok = std::get_if<std::string>(&leaf.value);
            if (leaf.column != column_ || !tok) return fail();
            return {*tok};
        }
        case Filter::Op::Or: {
            std::vector<std::string> out;
            for (const auto& c : std::get<OrNode>(filter.node().body).children) {
                const auto part = labels_of(c);
                out.insert(out.end(), part.begin(), part.end());
            }
            return out;
        }
        default:
            return fail();
    }
}

KnnResult LabelGraphIndex::query(const Query& query, std::size_t ef, detail::SearchStats* stats) const {
    check_query(query, *dataset_);
    if (!query.filter) throw std::invalid_argument("label graph query needs a label filter");
    return label_multi_query(query.vector, query.k, ef, labels_of(*query.filter), stats);
}

ReachabilityReport LabelGraphIndex::reachability() const {
    ReachabilityReport report;
    std::vector<std::size_t> counts(entry_.size(), 0);
    for (auto code : item_labels_) ++counts[code];
    std::vector<std::uint8_t> seen(size(), 0);
    for (std::size_t code = 0; code < entry_.size(); ++code) {
        if (counts[code] < 2) continue;
        ++report.labels_checked;
        const auto c = static_cast<std::int32_t>(code);
        std::vector<std::uint32_t> stack{entry_[code]}, touched{entry_[code]};
        seen[entry_[code]] = 1;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (auto v : neighbors(u)) {
                if (!seen[v] && has_label(v, c)) {
                    seen[v] = 1;
                    touched.push_back(v);
                    stack.push_back(v);
                }
            }
        }
        if (touched.size() < counts[code]) {
            ++report.labels_with_gaps;
            report.unreachable_items += counts[code] - touched.size();
        }
        for (auto v : touched) seen[v] = 0;
    }
    return report;
}

std::size_t LabelGraphIndex::memory_bytes() const {
    std::size_t bytes = (offsets_.size() + links_.size() + label_offsets_.size()) * sizeof(std::uint32_t) +
                        item_labels_.size() * sizeof(std::int32_t) + entry_.size() * sizeof(ItemId);
    for (const auto& s : label_names_) bytes += s.size() + sizeof(s);
    return bytes;
}

namespace {
constexpr std::string_view kLabelMagic = "FANNSLBL";
constexpr std::uint32_t kLabelVersion = 1;
}  // namespace

void LabelGraphIndex::save(std::ostream& out) const {
    io::BinaryWriter w(out);
    w.header(kLabelMagic, kLabelVersion);
    w.put<std::uint64_t>(params_.R);
    w.put<std::uint64_t>(params_.L_build);
    w.put<double>(params_.alpha);
    w.put<std::uint64_t>(params_.seed);
    w.put<std::uint64_t>(params_.exact_medoid_limit);
    w.put_string(column_);
    w.put<std::uint64_t>(size());
    w.put<std::uint32_t>(static_cast<std::uint32_t>(label_names_.size()));
    for (const auto& s : label_names_) w.put_string(s);
    w.put_array(label_offsets_);
    w.put_array(item_labels_);
    w.put_array(entry_);
    w.put_array(offsets_);
    w.put_array(links_);
    w.put<std::uint64_t>(repair_edges_);
}

LabelGraphIndex LabelGraphIndex::load(std::istream& in, const Dataset& dataset) {
    io::BinaryReader r(in);
    r.header(kLabelMagic, kLabelVersion);
    LabelGraphIndex g;
    g.dataset_ = &dataset;
    g.params_.R = r.get<std::uint64_t>();
    g.params_.L_build = r.get<std::uint64_t>();
    g.params_.alpha = r.get<double>();
    g.params_.seed = r.get<std::uint64_t>();
    g.params_.exact_medoid_limit = r.get<std::uint64_t>();
    g.column_ = r.get_string();
    const auto n = r.get<std::uint64_t>();
    if (n != dataset.size()) throw Error("label graph snapshot was built for a different dataset");
    const auto labels = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < labels; ++i) g.label_names_.push_back(r.get_string());
    g.index_names();
    g.label_offsets_ = r.get_array<std::uint32_t>();
    g.item_labels_ = r.get_array<std::int32_t>();
    g.entry_ = r.get_array<ItemId>();
    g.offsets_ = r.get_array<std::uint32_t>();
    g.links_ = r.get_array<std::uint32_t>();
    g.repair_edges_ = r.get<std::uint64_t>();
    if (g.label_offsets_.size() != n + 1 || g.label_offsets_.back() != g.item_labels_.size() ||
        g.offsets_.size() != n + 1 || g.offsets_.back() != g.links_.size() || g.entry_.size() != labels) {
        throw Error("label graph snapshot is inconsistent");
    }
    for (auto v : g.links_) {
        if (v >= n) throw Error("label graph snapshot has a dangling edge");
    }
    for (auto e : g.entry_) {
        if (e >= n) throw Error("label graph snapshot has a bad entry point");
    }
    for (auto code : g.item_labels_) {
        if (code < 0 || static_cast<std::uint32_t>(code) >= labels) throw Error("label graph snapshot has a bad label");
    }
    return g;
}

}  // namespace fanns
