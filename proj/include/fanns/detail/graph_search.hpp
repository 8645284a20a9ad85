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

// Beam-search machinery shared by every proximity-graph index.
//
// A Graph provides
//   std::size_t size() const;                     // internal node count
//   const float* vec(std::uint32_t u) const;
//   std::size_t dim() const;
//   template <class F> void for_each_neighbor(std::uint32_t u, int layer, F&& f) const;
//
// A Policy decides which nodes may enter the result set and which nodes the
// traversal is allowed to step to:
//   bool admit(std::uint32_t u) const;
//   template <class F> void expand(std::uint32_t u, int layer, F&& f) const;

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "fanns/simd/kernels.hpp"

namespace fanns::detail {

struct Candidate {
    double dist;
    std::uint32_t node;
};

struct CloserFirst {
    bool operator()(const Candidate& a, const Candidate& b) const {
        return a.dist > b.dist || (a.dist == b.dist && a.node > b.node);
    }
};

struct FartherFirst {
    bool operator()(const Candidate& a, const Candidate& b) const {
        return a.dist < b.dist || (a.dist == b.dist && a.node < b.node);
    }
};

inline bool candidate_less(const Candidate& a, const Candidate& b) { return FartherFirst{}(a, b); }

/// Epoch-tagged visited marks; clearing is O(1) amortized.
class VisitedSet {
 public:
    void reset(std::size_t n) {
        if (marks_.size() < n) marks_.resize(n, 0);
        if (++epoch_ == 0) {
            std::fill(marks_.begin(), marks_.end(), 0);
            epoch_ = 1;
        }
    }
    /// Marks u; returns false if it was already marked.
    bool insert(std::uint32_t u) {
        if (marks_[u] == epoch_) return false;
        marks_[u] = epoch_;
        return true;
    }
    bool contains(std::uint32_t u) const { return marks_[u] == epoch_; }

 private:
    std::vector<std::uint32_t> marks_;
    std::uint32_t epoch_ = 0;
};

/// Per-thread scratch sets; slot lets one search nest a second one.
inline VisitedSet& thread_visited(int slot = 0) {
    thread_local VisitedSet sets[2];
    return sets[slot];
}

struct SearchStats {
    std::size_t distance_computations = 0;
    std::size_t expanded = 0;
};

template <class Graph>
class QueryDistance {
 public:
    QueryDistance(const Graph& g, const float* q, SearchStats* stats)
        : g_(g), q_(q), l2sq_(simd::active_kernels().l2_sqr), stats_(stats) {}
    double operator()(std::uint32_t u) const {
        if (stats_) ++stats_->distance_computations;
        return std::sqrt(l2sq_(q_, g_.vec(u), g_.dim()));
    }

 private:
    const Graph& g_;
    const float* q_;
    double (*l2sq_)(const float*, const float*, std::size_t);
    SearchStats* stats_;
};

/// Every neighbor is admissible and every node may be returned.
template <class Graph>
struct PlainPolicy {
    const Graph& g;
    bool admit(std::uint32_t) const { return true; }
    template <class F>
    void expand(std::uint32_t u, int layer, F&& f) const {
        g.for_each_neighbor(u, layer, f);
    }
};

/// Traverses the full graph but only returns nodes passing the predicate.
template <class Graph, class Pred>
struct VisitAllPolicy {
    const Graph& g;
    const Pred& pred;
    bool admit(std::uint32_t u) const { return pred(u); }
    template <class F>
    void expand(std::uint32_t u, int layer, F&& f) const {
        g.for_each_neighbor(u, layer, f);
    }
};

/// Steps only to nodes passing the predicate. When filtering removed some
/// neighbors and fewer than `target` survive, neighbors of neighbors that
/// pass are appended until `target` is reached.
template <class Graph, class Pred>
struct InducedPolicy {
    const Graph& g;
    const Pred& pred;
    std::size_t target;

    bool admit(std::uint32_t u) const { return pred(u); }

    template <class F>
    void expand(std::uint32_t u, int layer, F&& f) const {
        std::size_t total = 0, kept = 0;
        g.for_each_neighbor(u, layer, [&](std::uint32_t v) {
            ++total;
            if (pred(v)) {
                ++kept;
                f(v);
            }
        });
        if (kept >= target || kept == total) return;
        thread_local std::vector<std::uint32_t> extra;
        extra.clear();
        bool done = false;
        g.for_each_neighbor(u, layer, [&](std::uint32_t v) {
            if (done) return;
            g.for_each_neighbor(v, layer, [&](std::uint32_t w) {
                if (done || w == u || !pred(w)) return;
                if (std::find(extra.begin(), extra.end(), w) != extra.end()) return;
                extra.push_back(w);
                if (kept + extra.size() >= target) done = true;
            });
        });
        for (auto w : extra) f(w);
    }
};

/// Best-first beam search on one layer. Returns up to ef admitted nodes,
/// ascending by (distance, node).
template <class Graph, class Policy>
std::vector<Candidate> search_layer(const Graph& g, const Policy& policy, const QueryDistance<Graph>& dist,
                                    const std::vector<Candidate>& entries, std::size_t ef, int layer,
                                    VisitedSet& visited, SearchStats* stats = nullptr) {
    std::priority_queue<Candidate, std::vector<Candidate>, CloserFirst> frontier;
    std::priority_queue<Candidate, std::vector<Candidate>, FartherFirst> best;

    visited.reset(g.size());
    for (const auto& e : entries) {
        if (!visited.insert(e.node)) continue;
        frontier.push(e);
        if (policy.admit(e.node)) {
            best.push(e);
            if (best.size() > ef) best.pop();
        }
    }

    while (!frontier.empty()) {
        const Candidate cur = frontier.top();
        if (best.size() >= ef && cur.dist > best.top().dist) break;
        frontier.pop();
        if (stats) ++stats->expanded;
        policy.expand(cur.node, layer, [&](std::uint32_t v) {
            if (!visited.insert(v)) return;
            const double d = dist(v);
            if (best.size() < ef || d < best.top().dist) {
                frontier.push({d, v});
                if (policy.admit(v)) {
                    best.push({d, v});
                    if (best.size() > ef) best.pop();
                }
            }
        });
    }

    std::vector<Candidate> out;
    out.reserve(best.size());
    while (!best.empty()) {
        out.push_back(best.top());
        best.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
}

/// Greedy single-candidate descent from `from` down to (not including) `to`.
template <class Graph, class Policy>
Candidate greedy_descend(const Graph& /*g*/, const Policy& policy, const QueryDistance<Graph>& dist, Candidate cur,
                         int from, int to) {
    for (int layer = from; layer > to; --layer) {
        bool moved = true;
        while (moved) {
            moved = false;
            const std::uint32_t at = cur.node;
            policy.expand(at, layer, [&](std::uint32_t v) {
                const double d = dist(v);
                if (d < cur.dist) {
                    cur = {d, v};
                    moved = true;
                }
            });
        }
    }
    return cur;
}

}  // namespace fanns::detail
