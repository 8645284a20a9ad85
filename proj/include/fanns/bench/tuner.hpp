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

#include <compare>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fanns::bench {

/// Tuning reward. Configurations that reach the recall target beat those
/// that do not; within each group a larger value wins (QPS when reached,
/// best recall otherwise).
struct Reward {
    bool reached = false;
    double value = 0.0;

    friend auto operator<=>(const Reward&, const Reward&) = default;
};

/// The ">1% better" test used to decide whether another pass is needed.
/// Crossing from unreached to reached always counts.
bool improves_by_margin(const Reward& candidate, const Reward& best, double margin = 0.01);

struct CurvePoint {
    double recall = 0.0;
    double qps = 0.0;
};

/// Highest QPS among points with recall >= target; otherwise the highest recall.
Reward reward_from_curve(const std::vector<CurvePoint>& curve, double target = 0.95);

/// Runs `trial` `iterations` times, averages the curves point by point and
/// scores the average. Any exception from a trial yields {false, 0}.
Reward get_reward(const std::function<std::vector<CurvePoint>(int iteration)>& trial, int iterations = 2,
                  double target = 0.95);

struct TuneSpec {
    std::vector<std::string> params;
    std::vector<std::vector<nlohmann::json>> value_lists;
    std::vector<std::size_t> default_indices;

    /// Throws std::invalid_argument on mismatched sizes or a default index
    /// outside its list.
    void validate() const;
    nlohmann::json assignment(const std::vector<std::size_t>& indices) const;

    /// Parses [{"name": ..., "values": [...], "default": i}, ...]; the
    /// default index falls back to 0.
    static TuneSpec from_json(const nlohmann::json& j);
};

struct TuneResult {
    std::vector<std::size_t> indices;
    nlohmann::json assignment;
    Reward reward;
    /// Every index vector handed to the reward function, in call order.
    std::vector<std::vector<std::size_t>> evaluated;
};

/// Greedy coordinate search: start from the defaults, try index -1 and +1
/// for each parameter in turn, keep any strict improvement, and run another
/// pass while some accepted move improved by more than 1%. Moves that leave
/// a value list are skipped.
TuneResult greedy_parameter_search(const TuneSpec& spec, const std::function<Reward(const nlohmann::json&)>& reward);

}  // namespace fanns::bench
