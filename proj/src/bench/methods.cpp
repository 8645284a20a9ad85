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

#include "fanns/bench/methods.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>

#include "fanns/caps.hpp"
#include "fanns/hnsw.hpp"
#include "fanns/ivf.hpp"
#include "fanns/label_graph.hpp"
#include "fanns/oracle.hpp"
#include "fanns/segment_graph.hpp"
#include "fanns/segment_tree.hpp"

namespace fanns::bench {

namespace {

using nlohmann::json;

void check_keys(const json& params, std::initializer_list<const char*> allowed) {
    if (params.is_null()) return;
    if (!params.is_object()) throw std::invalid_argument("method parameters must be a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : params.items()) {
        if (!ok.count(key)) throw std::invalid_argument("unknown parameter '" + key + "'");
    }
}

template <class T>
T get(const json& params, const char* key, T fallback) {
    if (params.is_null() || !params.contains(key)) return fallback;
    try {
        return params[key].get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(std::string("parameter '") + key + "' has the wrong type");
    }
}

HnswParams hnsw_params(const json& p) {
    HnswParams h;
    h.M = get<std::size_t>(p, "M", h.M);
    h.ef_construction = get<std::size_t>(p, "ef_construction", h.ef_construction);
    h.gamma = get<std::size_t>(p, "gamma", h.gamma);
    h.m_beta = get<std::size_t>(p, "m_beta", h.m_beta);
    h.seed = get<std::uint64_t>(p, "seed", h.seed);
    h.validate();
    return h;
}

std::string default_column(const Dataset& ds, AttributeKind kind) {
    for (const auto& c : ds.schema().columns()) {
        if (c.kind == kind) return c.name;
    }
    throw SchemaError("dataset has no " + std::string(to_string(kind)) + " column");
}

std::size_t default_clusters(std::size_t n) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(double(n)))));
}

class PreFilter final : public Method {
 public:
    std::string name() const override { return "pre-filter"; }
    WidthKind width_kind() const override { return WidthKind::None; }
    bool supports(FilterFamily) const override { return true; }
    void build(const Dataset& ds, const AttributeIndexes& idx, const json& p) override {
        check_keys(p, {});
        ds_ = &ds;
        idx_ = &idx;
    }
    KnnResult query(const Query& q, std::size_t) const override {
        return q.filter ? pre_filter_query(*ds_, *idx_, q) : exact_filtered_knn(*ds_, q);
    }
    std::size_t index_bytes() const override { return idx_->memory_bytes(); }
    std::size_t max_width() const override { return 1; }

 private:
    const Dataset* ds_ = nullptr;
    const AttributeIndexes* idx_ = nullptr;
};

// HNSW-backed methods differ only in how a filtered query is answered.
class HnswMethod final : public Method {
 public:
    enum class Mode { Post, VisitAll, Induced, Router };
    HnswMethod(std::string name, Mode mode) : name_(std::move(name)), mode_(mode) {}

    std::string name() const override { return name_; }
    WidthKind width_kind() const override { return WidthKind::Ef; }
    bool supports(FilterFamily) const override { return true; }
    void build(const Dataset& ds, const AttributeIndexes& idx, const json& p) override {
        check_keys(p, {"M", "ef_construction", "gamma", "m_beta", "seed", "multiplier", "low", "high"});
        ds_ = &ds;
        idx_ = &idx;
        multiplier_ = get<std::size_t>(p, "multiplier", 1);
        router_.low_threshold = get<double>(p, "low", router_.low_threshold);
        router_.high_threshold = get<double>(p, "high", router_.high_threshold);
        router_.post_multiplier = multiplier_;
        router_.validate();
        if (multiplier_ == 0) throw std::invalid_argument("multiplier must be positive");
        index_ = HnswIndex::build(ds, hnsw_params(p));
    }
    KnnResult query(const Query& q, std::size_t ef) const override {
        if (!q.filter) return index_.search(q.vector, q.k, ef);
        switch (mode_) {
            case Mode::Post:
                return post_filter_query(index_, q, ef, multiplier_);
            case Mode::VisitAll:
                return index_.search_visit_all(q, ef);
            case Mode::Induced:
                return index_.search_induced(q, ef);
            case Mode::Router:
                return route_and_query(*ds_, *idx_, index_, q, ef, router_).result;
        }
        return {};
    }
    std::size_t index_bytes() const override {
        return index_.memory_bytes() + (mode_ == Mode::Router ? idx_->memory_bytes() : 0);
    }
    std::size_t max_width() const override { return ds_->size(); }

 private:
    std::string name_;
    Mode mode_;
    const Dataset* ds_ = nullptr;
    const AttributeIndexes* idx_ = nullptr;
    std::size_t multiplier_ = 1;
    RouterConfig router_;
    HnswIndex index_;
};

class SegmentTreeMethod final : public Method {
 public:
    std::string name() const override { return "segment-tree"; }
    WidthKind width_kind() const override { return WidthKind::Ef; }
    bool supports(FilterFamily f) const override { return f == FilterFamily::Range; }
    void build(const Dataset& ds, const AttributeIndexes&, const json& p) override {
        check_keys(p, {"column", "beta", "scan_below", "M", "ef_construction", "gamma", "m_beta", "seed"});
        ds_ = &ds;
        SegmentTreeParams sp;
        sp.beta = get<std::size_t>(p, "beta", sp.beta);
        sp.scan_below = get<std::size_t>(p, "scan_below", sp.scan_below);
        sp.hnsw = hnsw_params(p);
        index_.emplace(SegmentTreeIndex::build(ds, get<std::string>(p, "column", default_column(ds, AttributeKind::Ordered)), sp));
    }
    KnnResult query(const Query& q, std::size_t ef) const override { return index_->query(q, ef); }
    std::size_t index_bytes() const override { return index_->memory_bytes(); }
    std::size_t max_width() const override { return ds_->size(); }

 private:
    const Dataset* ds_ = nullptr;
    std::optional<SegmentTreeIndex> index_;
};

class SegmentGraphMethod final : public Method {
 public:
    std::string name() const override { return "segment-graph"; }
    WidthKind width_kind() const override { return WidthKind::Ef; }
    bool supports(FilterFamily f) const override { return f == FilterFamily::Range; }
    void build(const Dataset& ds, const AttributeIndexes&, const json& p) override {
        check_keys(p, {"column", "index_k", "ef_construction", "ef_max", "seed"});
        ds_ = &ds;
        HnswParams h;
        h.M = get<std::size_t>(p, "index_k", h.M);
        h.ef_construction = get<std::size_t>(p, "ef_construction", h.ef_construction);
        h.m_beta = get<std::size_t>(p, "ef_max", h.m_beta);
        h.seed = get<std::uint64_t>(p, "seed", h.seed);
        h.validate();
        index_.emplace(SegmentGraphIndex::build(ds, get<std::string>(p, "column", default_column(ds, AttributeKind::Ordered)), h));
    }
    KnnResult query(const Query& q, std::size_t ef) const override { return index_->query(q, ef); }
    std::size_t index_bytes() const override { return index_->memory_bytes(); }
    std::size_t max_width() const override { return ds_->size(); }

 private:
    const Dataset* ds_ = nullptr;
    std::optional<SegmentGraphIndex> index_;
};

class LabelGraphMethod final : public Method {
 public:
    std::string name() const override { return "label-graph"; }
    WidthKind width_kind() const override { return WidthKind::Ef; }
    bool supports(FilterFamily f) const override { return f == FilterFamily::Emis || f == FilterFamily::Em; }
    void build(const Dataset& ds, const AttributeIndexes&, const json& p) override {
        check_keys(p, {"column", "R", "L", "alpha", "seed"});
        ds_ = &ds;
        LabelGraphParams lp;
        lp.R = get<std::size_t>(p, "R", lp.R);
        lp.L_build = get<std::size_t>(p, "L", lp.L_build);
        lp.alpha = get<double>(p, "alpha", lp.alpha);
        lp.seed = get<std::uint64_t>(p, "seed", lp.seed);
        index_.emplace(LabelGraphIndex::build(ds, get<std::string>(p, "column", default_column(ds, AttributeKind::Set)), lp));
    }
    KnnResult query(const Query& q, std::size_t ef) const override { return index_->query(q, ef); }
    std::size_t index_bytes() const override { return index_->memory_bytes(); }
    std::size_t max_width() const override { return ds_->size(); }

 private:
    const Dataset* ds_ = nullptr;
    std::optional<LabelGraphIndex> index_;
};

class IvfMethod final : public Method {
 public:
    explicit IvfMethod(bool rii) : rii_(rii) {}
    std::string name() const override { return rii_ ? "rii" : "ivf"; }
    WidthKind width_kind() const override { return WidthKind::Probes; }
    bool supports(FilterFamily) const override { return true; }
    void build(const Dataset& ds, const AttributeIndexes& idx, const json& p) override {
        if (rii_) {
            check_keys(p, {"c", "iters", "seed", "max_training_points", "s", "ksub", "threshold", "rerank"});
        } else {
            check_keys(p, {"c", "iters", "seed", "max_training_points"});
        }
        ds_ = &ds;
        idx_ = &idx;
        IvfParams ip;
        ip.c = get<std::size_t>(p, "c", default_clusters(ds.size()));
        ip.iters = get<std::size_t>(p, "iters", ip.iters);
        ip.seed = get<std::uint64_t>(p, "seed", ip.seed);
        ip.max_training_points = get<std::size_t>(p, "max_training_points", ip.max_training_points);
        if (rii_) {
            ip.with_pq = true;
            ip.pq_s = get<std::size_t>(p, "s", ip.pq_s);
            ip.pq_ksub = get<std::size_t>(p, "ksub", std::min<std::size_t>(ip.pq_ksub, ds.size()));
            rii_params_.threshold = get<double>(p, "threshold", rii_params_.threshold);
            if (!p.is_null() && p.contains("rerank") && p["rerank"].is_string()) {
                if (p["rerank"] != "all") throw std::invalid_argument("rerank must be a count or \"all\"");
                rii_params_.rerank = kRerankAll;
            } else {
                rii_params_.rerank = get<std::size_t>(p, "rerank", 0);
            }
        }
        index_.emplace(IvfIndex::build(ds, ip));
    }
    KnnResult query(const Query& q, std::size_t w) const override {
        if (rii_) {
            std::vector<ItemId> match;
            if (q.filter) {
                match = idx_->matching_ids(*q.filter);
            } else {
                match.resize(ds_->size());
                for (ItemId i = 0; i < match.size(); ++i) match[i] = i;
            }
            RiiParams rp = rii_params_;
            rp.w = w;
            return index_->rii_query(q.vector, q.k, match, rp).result;
        }
        if (!q.filter) return index_->query(q.vector, q.k, w);
        const BoundFilter pred(*q.filter, *ds_);
        return index_->query_if(q.vector, q.k, w, pred);
    }
    std::size_t index_bytes() const override { return index_->memory_bytes(); }
    std::size_t max_width() const override { return index_->cluster_count(); }

 private:
    bool rii_;
    const Dataset* ds_ = nullptr;
    const AttributeIndexes* idx_ = nullptr;
    RiiParams rii_params_;
    std::optional<IvfIndex> index_;
};

class CapsMethod final : public Method {
 public:
    std::string name() const override { return "caps"; }
    WidthKind width_kind() const override { return WidthKind::Probes; }
    bool supports(FilterFamily f) const override { return f == FilterFamily::Em; }
    void build(const Dataset& ds, const AttributeIndexes&, const json& p) override {
        check_keys(p, {"column", "B", "max_depth", "iters", "seed", "max_training_points"});
        CapsParams cp;
        cp.B = get<std::size_t>(p, "B", default_clusters(ds.size()));
        cp.max_depth = get<std::size_t>(p, "max_depth", cp.max_depth);
        cp.iters = get<std::size_t>(p, "iters", cp.iters);
        cp.seed = get<std::uint64_t>(p, "seed", cp.seed);
        cp.max_training_points = get<std::size_t>(p, "max_training_points", cp.max_training_points);
        index_.emplace(CapsIndex::build(ds, get<std::string>(p, "column", default_column(ds, AttributeKind::Unordered)), cp));
    }
    KnnResult query(const Query& q, std::size_t w) const override { return index_->query(q, w); }
    std::size_t index_bytes() const override { return index_->memory_bytes(); }
    std::size_t max_width() const override { return index_->cluster_count(); }

 private:
    std::optional<CapsIndex> index_;
};

class FusedMethod final : public Method {
 public:
    std::string name() const override { return "afanns-fused"; }
    WidthKind width_kind() const override { return WidthKind::None; }
    bool supports(FilterFamily f) const override { return f == FilterFamily::Em || f == FilterFamily::None; }
    bool respects_filter() const override { return false; }
    void build(const Dataset& ds, const AttributeIndexes&, const json& p) override {
        check_keys(p, {"weight"});
        ds_ = &ds;
        weight_ = get<double>(p, "weight", 1.0);
    }
    KnnResult query(const Query& q, std::size_t) const override { return afanns_query_fused(*ds_, q, q.k, weight_); }
    std::size_t index_bytes() const override { return 0; }
    std::size_t max_width() const override { return 1; }

 private:
    const Dataset* ds_ = nullptr;
    double weight_ = 1.0;
};

}  // namespace

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names = {"pre-filter",    "post-filter",   "router",      "hnsw-visit-all",
                                                   "hnsw-induced",  "segment-tree",  "segment-graph", "label-graph",
                                                   "ivf",           "rii",           "caps",        "afanns-fused"};
    return names;
}

std::unique_ptr<Method> make_method(const std::string& name) {
    if (name == "pre-filter") return std::make_unique<PreFilter>();
    if (name == "post-filter") return std::make_unique<HnswMethod>(name, HnswMethod::Mode::Post);
    if (name == "router") return std::make_unique<HnswMethod>(name, HnswMethod::Mode::Router);
    if (name == "hnsw-visit-all") return std::make_unique<HnswMethod>(name, HnswMethod::Mode::VisitAll);
    if (name == "hnsw-induced") return std::make_unique<HnswMethod>(name, HnswMethod::Mode::Induced);
    if (name == "segment-tree") return std::make_unique<SegmentTreeMethod>();
    if (name == "segment-graph") return std::make_unique<SegmentGraphMethod>();
    if (name == "label-graph") return std::make_unique<LabelGraphMethod>();
    if (name == "ivf") return std::make_unique<IvfMethod>(false);
    if (name == "rii") return std::make_unique<IvfMethod>(true);
    if (name == "caps") return std::make_unique<CapsMethod>();
    if (name == "afanns-fused") return std::make_unique<FusedMethod>();
    throw std::invalid_argument("unknown method '" + name + "'");
}

}  // namespace fanns::bench
