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
#include <string>
#include <vector>

#include <json.hpp>

#include "fanns/bench/methods.hpp"
#include "fanns/bench/results_csv.hpp"
#include "fanns/bench/sweep.hpp"
#include "fanns/bench/tuner.hpp"

namespace fanns::bench {

/// Width list entry meaning "the method's exhaustive width".
inline constexpr std::size_t kMaxWidth = 0;

/// Replaces kMaxWidth entries by method.max_width().
std::vector<std::size_t> resolve_widths(const Method& method, const std::vector<std::size_t>& widths);

/// Parses "10,50,max" style lists.
std::vector<std::size_t> parse_widths(const std::string& text);

struct BenchOutcome {
    BuildInfo build;
    std::vector<SweepPoint> points;
    std::vector<ResultRow> rows;
};

/// Builds `method_name` with `params`, then sweeps. Index construction time
/// is measured separately from the query loop.
BenchOutcome run_bench(const Dataset& dataset, const AttributeIndexes& indexes, const std::string& method_name,
                       const nlohmann::json& params, const std::string& family, std::span<const Query> queries,
                       std::span<const KnnResult> truth, const std::vector<std::size_t>& widths, std::size_t runs);

/// Seed for tuning-query sampling, fixed per (method, filter family) pair.
std::uint64_t tuning_seed(const std::string& method, const std::string& family, std::uint64_t base);

/// `count` distinct positions in [0, p), ascending, drawn under `seed`.
std::vector<std::size_t> sample_positions(std::size_t p, std::size_t count, std::uint64_t seed);

/// Reward of one parameter assignment: `iterations` rounds of build plus a
/// single-run sweep over the given queries. Build errors give {false, 0}.
Reward tune_reward(const Dataset& dataset, const AttributeIndexes& indexes, const std::string& method_name,
                   const nlohmann::json& params, std::span<const Query> queries, std::span<const KnnResult> truth,
                   const std::vector<std::size_t>& widths, int iterations = 2);

}  // namespace fanns::bench
