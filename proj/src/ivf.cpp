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

#include "fanns/ivf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fanns/oracle.hpp"
#include "fanns/serialize.hpp"
#include "fanns/simd/kernels.hpp"

namespace fanns {

void IvfParams::validate(std::size_t n, std::size_t d) const {
    if (c == 0 || c > n) throw std::invalid_argument("ivf: need 1 <= c <= n");
    if (with_pq) {
        if (pq_s == 0 || d % pq_s != 0) throw std::invalid_argument("ivf: pq_s must divide d");
        if (pq_ksub == 0 || pq_ksub > 256) throw std::invalid_argument("ivf: pq_ksub must be in [1, 256]");
    }
}

IvfIndex IvfIndex::build(const Dataset& dataset, const IvfParams& params) {
    const std::size_t n = dataset.size();
    const std::size_t d = dataset.dim();
    params.validate(n, d);
    IvfIndex idx;
    idx.dataset_ = &dataset;
    idx.params_ = params;
    const std::vector<float> train = sample_rows(dataset.vectors(), d, params.max_training_points, params.seed);
    idx.model_ = kmeans_train(train, d, params.c, params.iters, params.seed);
    idx.lists_.assign(params.c, {});
    idx.assignment_.resize(n);
    for (ItemId i = 0; i < n; ++i) {
        idx.assignment_[i] = idx.model_.assign(dataset.vector_ptr(i));
        idx.lists_[idx.assignment_[i]].push_back(i);
    }
    if (params.with_pq) {
        idx.codebook_ = pq_train(train, d, params.pq_s, params.pq_ksub, params.pq_iters, params.seed + 1);
        idx.codes_.resize(n * params.pq_s);
        for (ItemId i = 0; i < n; ++i) idx.codebook_->encode(dataset.vector_ptr(i), idx.codes_.data() + std::size_t(i) * params.pq_s);
    }
    return idx;
}

void IvfIndex::check_w(std::size_t w) const {
    if (w == 0 || w > model_.c) throw std::invalid_argument("ivf: w must be in [1, c]");
}

KnnResult IvfIndex::query(std::span<const float> q, std::size_t k, std::size_t w, bool adc) const {
    if (q.size() != dataset_->dim()) throw std::invalid_argument("ivf: query dimension mismatch");
    check_w(w);
    if (adc && !has_pq()) throw std::invalid_argument("ivf: ADC requested without PQ codes");
    std::vector<ItemId> members;
    for (auto cl : model_.nearest(q.data(), w)) members.insert(members.end(), lists_[cl].begin(), lists_[cl].end());
    if (!adc) return exact_knn_over(*dataset_, q, k, members);
    const auto table = codebook_->distance_table(q);
    KnnResult out;
    out.reserve(members.size());
    for (auto i : members) out.push_back({i, codebook_->adc_distance(table, code(i))});
    finalize_top_k(out, k);
    return out;
}

RiiResult IvfIndex::rii_query(std::span<const float> q, std::size_t k, std::span<const ItemId> matching,
                              const RiiParams& params) const {
    if (!has_pq()) throw std::invalid_argument("rii: index has no PQ codes");
    if (q.size() != dataset_->dim()) throw std::invalid_argument("rii: query dimension mismatch");
    check_w(params.w);
    const std::size_t n = size();
    for (std::size_t j = 0; j < matching.size(); ++j) {
        if (matching[j] >= n || (j > 0 && matching[j] <= matching[j - 1])) {
            throw std::invalid_argument("rii: matching ids must be sorted, unique and in range");
        }
    }
    RiiResult res;
    const double threshold = params.threshold < 0.0 ? 1.0 / static_cast<double>(model_.c) : params.threshold;
    const double frac = static_cast<double>(matching.size()) / static_cast<double>(n);
    res.branch = frac < threshold ? RiiBranch::Pre : RiiBranch::In;
    if (matching.empty() || k == 0) return res;

    const auto table = codebook_->distance_table(q);
    const auto& kern = simd::active_kernels();
    const std::size_t s = codebook_->s;
    const std::size_t ksub = codebook_->ksub;
    KnnResult cand;
    auto score = [&](ItemId i) {
        double sum = 0.0;
        kern.adc_scan(table.data(), s, ksub, code(i), 1, &sum);
        cand.push_back({i, std::sqrt(sum)});
    };
    if (res.branch == RiiBranch::Pre) {
        cand.reserve(matching.size());
        for (auto i : matching) score(i);
    } else {
        std::vector<std::uint8_t> mask(n, 0);
        for (auto i : matching) mask[i] = 1;
        for (auto cl : model_.nearest(q.data(), params.w)) {
            for (auto i : lists_[cl]) {
                if (mask[i]) score(i);
            }
        }
    }
    res.adc_evaluations = cand.size();
    if (params.rerank == 0) {
        finalize_top_k(cand, k);
        res.result = std::move(cand);
        return res;
    }
    finalize_top_k(cand, std::max(params.rerank, k));
    std::vector<ItemId> ids = ids_of(cand);
    std::sort(ids.begin(), ids.end());
    res.result = exact_knn_over(*dataset_, q, k, ids);
    return res;
}

std::size_t IvfIndex::memory_bytes() const {
    std::size_t bytes = model_.centroids.size() * sizeof(float) + assignment_.size() * sizeof(std::uint32_t);
    for (const auto& l : lists_) bytes += l.size() * sizeof(ItemId) + sizeof(l);
    if (codebook_) bytes += codebook_->codewords.size() * sizeof(float) + codes_.size();
    return bytes;
}

void IvfIndex::save(std::ostream& out) const {
    io::BinaryWriter w(out);
    w.header("FANNSIVF", 1);
    w.put<std::uint64_t>(size());
    w.put<std::uint64_t>(model_.d);
    w.put<std::uint64_t>(model_.c);
    w.put<std::uint64_t>(model_.iterations);
    w.put<std::uint64_t>(model_.seed);
    w.put<std::uint64_t>(params_.iters);
    w.put<std::uint64_t>(params_.max_training_points);
    w.put_array(model_.centroids);
    w.put_array(assignment_);
    w.put<std::uint8_t>(has_pq() ? 1 : 0);
    if (codebook_) {
        codebook_->save(out);
        w.put_array(codes_);
    }
}

IvfIndex IvfIndex::load(std::istream& in, const Dataset& dataset) {
    io::BinaryReader r(in);
    r.header("FANNSIVF", 1);
    IvfIndex idx;
    idx.dataset_ = &dataset;
    const auto n = r.get<std::uint64_t>();
    const auto d = r.get<std::uint64_t>();
    if (n != dataset.size() || d != dataset.dim()) throw Error("ivf snapshot: dataset shape mismatch");
    idx.model_.d = d;
    idx.model_.c = r.get<std::uint64_t>();
    idx.model_.iterations = r.get<std::uint64_t>();
    idx.model_.seed = r.get<std::uint64_t>();
    idx.params_.c = idx.model_.c;
    idx.params_.seed = idx.model_.seed;
    idx.params_.iters = r.get<std::uint64_t>();
    idx.params_.max_training_points = r.get<std::uint64_t>();
    idx.model_.centroids = r.get_array<float>();
    idx.assignment_ = r.get_array<std::uint32_t>();
    if (idx.model_.c == 0 || idx.model_.centroids.size() != idx.model_.c * d || idx.assignment_.size() != n) {
        throw Error("ivf snapshot: inconsistent shape");
    }
    idx.lists_.assign(idx.model_.c, {});
    for (ItemId i = 0; i < n; ++i) {
        if (idx.assignment_[i] >= idx.model_.c) throw Error("ivf snapshot: cluster id out of range");
        idx.lists_[idx.assignment_[i]].push_back(i);
    }
    if (r.get<std::uint8_t>()) {
        idx.codebook_ = PqCodebook::load(in);
        idx.codes_ = r.get_array<std::uint8_t>();
        if (idx.codebook_->d != d || idx.codes_.size() != n * idx.codebook_->s) throw Error("ivf snapshot: code shape mismatch");
        idx.params_.with_pq = true;
        idx.params_.pq_s = idx.codebook_->s;
        idx.params_.pq_ksub = idx.codebook_->ksub;
    }
    return idx;
}

}  // namespace fanns
