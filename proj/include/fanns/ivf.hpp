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

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fanns/dataset.hpp"
#include "fanns/kmeans.hpp"
#include "fanns/oracle.hpp"
#include "fanns/pq.hpp"

namespace fanns {

struct IvfParams {
    std::size_t c = 1;
    std::size_t iters = 25;
    std::uint64_t seed = 42;
    /// Train the coarse quantizer on at most this many rows (0 = all).
    std::size_t max_training_points = 0;
    bool with_pq = false;
    std::size_t pq_s = 8;
    std::size_t pq_ksub = 256;
    std::size_t pq_iters = 25;

    void validate(std::size_t n, std::size_t d) const;
};

inline constexpr std::size_t kRerankAll = std::numeric_limits<std::size_t>::max();

struct RiiParams {
    /// Pre-filter branch when |matching| / n < threshold. Negative selects 1/c.
    double threshold = -1.0;
    std::size_t w = 1;
    /// Number of best ADC candidates re-ranked by exact distance; 0 keeps
    /// ADC distances, kRerankAll re-ranks every candidate.
    std::size_t rerank = 0;
};

enum class RiiBranch { Pre, In };

struct RiiResult {
    KnnResult result;
    RiiBranch branch = RiiBranch::Pre;
    std::size_t adc_evaluations = 0;
};

/// Inverted file over a dataset, optionally with PQ codes for every item
/// stored contiguously in id order.
class IvfIndex {
 public:
    static IvfIndex build(const Dataset& dataset, const IvfParams& params);

    /// Top-k among members of the w clusters nearest to q. Exact distances
    /// unless `adc` is set (requires PQ). Throws std::invalid_argument when
    /// w is outside [1, c].
    KnnResult query(std::span<const float> q, std::size_t k, std::size_t w, bool adc = false) const;

    /// Exact top-k among members of the w nearest clusters that satisfy pred.
    template <class Pred>
    KnnResult query_if(std::span<const float> q, std::size_t k, std::size_t w, Pred&& pred) const {
        if (q.size() != dataset_->dim()) throw std::invalid_argument("ivf: query dimension mismatch");
        check_w(w);
        std::vector<ItemId> members;
        for (auto cl : model_.nearest(q.data(), w)) {
            for (auto i : lists_[cl]) {
                if (pred(i)) members.push_back(i);
            }
        }
        return exact_knn_over(*dataset_, q, k, members);
    }

    /// Selectivity-switched filtered search over a sorted, duplicate-free
    /// matching id list. Requires PQ.
    RiiResult rii_query(std::span<const float> q, std::size_t k, std::span<const ItemId> matching,
                        const RiiParams& params) const;

    std::size_t size() const { return assignment_.size(); }
    std::size_t cluster_count() const { return model_.c; }
    const KMeansModel& model() const { return model_; }
    const std::vector<ItemId>& list(std::size_t cluster) const { return lists_[cluster]; }
    std::uint32_t cluster_of(ItemId i) const { return assignment_[i]; }
    bool has_pq() const { return codebook_.has_value(); }
    const PqCodebook& codebook() const { return *codebook_; }
    const std::uint8_t* code(ItemId i) const { return codes_.data() + std::size_t(i) * codebook_->s; }
    const std::vector<std::uint8_t>& codes() const { return codes_; }
    const IvfParams& params() const { return params_; }
    const Dataset& dataset() const { return *dataset_; }

    std::size_t memory_bytes() const;

    void save(std::ostream& out) const;
    static IvfIndex load(std::istream& in, const Dataset& dataset);

 private:
    void check_w(std::size_t w) const;

    const Dataset* dataset_ = nullptr;
    IvfParams params_;
    KMeansModel model_;
    std::vector<std::vector<ItemId>> lists_;
    std::vector<std::uint32_t> assignment_;
    std::optional<PqCodebook> codebook_;
    std::vector<std::uint8_t> codes_;
};

}  // namespace fanns
