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

#include "fanns/bench/tuner.hpp"

#include <algorithm>
#include <stdexcept>

namespace fanns::bench {

bool improves_by_margin(const Reward& candidate, const Reward& best, double margin) {
    if (candidate.reached != best.reached) return candidate.reached;
    return candidate.value > best.value * (1.0 + margin);
}

Reward reward_from_curve(const std::vector<CurvePoint>& curve, double target) {
    Reward r;
    for (const auto& p : curve) {
        if (p.recall >= target) {
            if (!r.reached || p.qps > r.value) r = {true, p.qps};
        } else if (!r.reached) {
            r.value = std::max(r.value, p.recall);
        }
    }
    return r;
}

Reward get_reward(const std::function<std::vector<CurvePoint>(int iteration)>& trial, int iterations, double target) {
    if (iterations < 1) throw std::invalid_argument("get_reward: need at least one iteration");
    std::vector<CurvePoint> avg;
    try {
        for (int it = 0; it < iterations; ++it) {
            const auto curve = trial(it);
            if (it == 0) {
                avg.assign(curve.size(), {});
            } else if (curve.size() != avg.size()) {
                return {};
            }
            for (std::size_t i = 0; i < curve.size(); ++i) {
                avg[i].recall += curve[i].recall / iterations;
                avg[i].qps += curve[i].qps / iterations;
            }
        }
    } catch (const std::exception&) {
        return {};
    }
    return reward_from_curve(avg, target);
}

void TuneSpec::validate() const {
    if (value_lists.size() != params.size() || default_indices.size() != params.size()) {
        throw std::invalid_argument("tune spec: params, value_lists and default_indices differ in length");
    }
    for (std::size_t p = 0; p < params.size(); ++p) {
        if (value_lists[p].empty()) throw std::invalid_argument("tune spec: empty value list for " + params[p]);
        if (default_indices[p] >= value_lists[p].size()) {
            throw std::invalid_argument("tune spec: default index out of range for " + params[p]);
        }
    }
}

nlohmann::json TuneSpec::assignment(const std::vector<std::size_t>& indices) const {
    nlohmann::json a = nlohmann::json::object();
    for (std::size_t p = 0; p < params.size(); ++p) a[params[p]] = value_lists[p][indices[p]];
    return a;
}

TuneSpec TuneSpec::from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("tune spec: expected a list of {name, values, default}");
    TuneSpec s;
    for (const auto& e : j) {
        s.params.push_back(e.at("name").get<std::string>());
        s.value_lists.push_back(e.at("values").get<std::vector<nlohmann::json>>());
        s.default_indices.push_back(e.value("default", std::size_t{0}));
    }
    s.validate();
    return s;
}

TuneResult greedy_parameter_search(const TuneSpec& spec, const std::function<Reward(const nlohmann::json&)>& reward) {
    spec.validate();
    TuneResult out;
    auto eval = [&](const std::vector<std::size_t>& idx) {
        out.evaluated.push_back(idx);
        return reward(spec.assignment(idx));
    };
    std::vector<std::size_t> indices = spec.default_indices;
    Reward best = eval(indices);
    bool repeat = true;
    while (repeat) {
        repeat = false;
        for (std::size_t p = 0; p < spec.params.size(); ++p) {
            for (int change : {-1, +1}) {
                if (change < 0 && indices[p] == 0) continue;
                if (change > 0 && indices[p] + 1 >= spec.value_lists[p].size()) continue;
                std::vector<std::size_t> cand = indices;
                cand[p] = change < 0 ? cand[p] - 1 : cand[p] + 1;
                const Reward r = eval(cand);
                if (r > best) {
                    if (improves_by_margin(r, best)) repeat = true;
                    best = r;
                    indices = cand;
                }
            }
        }
    }
    out.indices = indices;
    out.assignment = spec.assignment(indices);
    out.reward = best;
    return out;
}

}  // namespace fanns::bench
