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

#include "fanns/bench/sweep.hpp"

#include <chrono>
#include <stdexcept>

#include "fanns/bench/metrics.hpp"

namespace fanns::bench {

std::vector<SweepPoint> run_sweep(const Method& method, std::span<const Query> queries, std::span<const KnnResult> truth,
                                  std::span<const std::size_t> widths, std::size_t runs) {
    if (queries.size() != truth.size()) throw std::invalid_argument("sweep: truth not aligned with queries");
    if (queries.empty()) throw std::invalid_argument("sweep: no queries");
    if (runs == 0) throw std::invalid_argument("sweep: runs must be positive");
    if (method.width_kind() == WidthKind::Ef) {
        for (auto w : widths) {
            for (const auto& q : queries) {
                if (w < q.k) throw std::invalid_argument("sweep: width " + std::to_string(w) + " below k");
            }
        }
    }
    using clock = std::chrono::steady_clock;
    std::vector<SweepPoint> out;
    std::vector<KnnResult> results(queries.size());
    for (auto w : widths) {
        SweepPoint pt;
        pt.width = w;
        pt.runs = runs;
        for (std::size_t r = 0; r < runs; ++r) {
            const auto t0 = clock::now();
            for (std::size_t i = 0; i < queries.size(); ++i) results[i] = method.query(queries[i], w);
            const double secs = std::chrono::duration<double>(clock::now() - t0).count();
            double recall = 0.0;
            for (std::size_t i = 0; i < queries.size(); ++i) recall += recall_at_k(results[i], truth[i], queries[i].k);
            pt.recall_runs.push_back(recall / double(queries.size()));
            // A clock that did not advance still reports a finite positive rate.
            pt.qps_runs.push_back(double(queries.size()) / std::max(secs, 1e-9));
        }
        const auto rs = mean_std(pt.recall_runs);
        const auto qs = mean_std(pt.qps_runs);
        pt.recall_mean = rs.mean;
        pt.recall_std = rs.std;
        pt.qps_mean = qs.mean;
        pt.qps_std = qs.std;
        out.push_back(std::move(pt));
    }
    return out;
}

std::vector<CurvePoint> to_curve(const std::vector<SweepPoint>& points) {
    std::vector<CurvePoint> c;
    c.reserve(points.size());
    for (const auto& p : points) c.push_back({p.recall_mean, p.qps_mean});
    return c;
}

}  // namespace fanns::bench
