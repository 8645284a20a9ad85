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

#include <span>
#include <vector>

#include "fanns/bench/methods.hpp"
#include "fanns/bench/tuner.hpp"

namespace fanns::bench {

struct SweepPoint {
    std::size_t width = 0;
    std::size_t runs = 0;
    double recall_mean = 0.0;
    double recall_std = 0.0;
    double qps_mean = 0.0;
    double qps_std = 0.0;
    std::vector<double> recall_runs;  ///< mean recall of each run
    std::vector<double> qps_runs;
};

/// For each width, runs every query in order on the calling thread `runs`
/// times (no warm-up) and records mean recall@k and QPS = p / elapsed.
/// Throws std::invalid_argument when truth is not aligned with queries,
/// runs is 0, or an ef-style width is below a query's k.
std::vector<SweepPoint> run_sweep(const Method& method, std::span<const Query> queries, std::span<const KnnResult> truth,
                                  std::span<const std::size_t> widths, std::size_t runs = 5);

std::vector<CurvePoint> to_curve(const std::vector<SweepPoint>& points);

}  // namespace fanns::bench
