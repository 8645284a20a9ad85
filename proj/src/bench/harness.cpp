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

#include "fanns/bench/harness.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fanns/bench/metrics.hpp"

namespace fanns::bench {

std::vector<std::size_t> resolve_widths(const Method& method, const std::vector<std::size_t>& widths) {
    std::vector<std::size_t> out;
    for (auto w : widths) out.push_back(w == kMaxWidth ? method.max_width() : w);
    return out;
}

std::vector<std::size_t> parse_widths(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok == "max") {
            out.push_back(kMaxWidth);
            continue;
        }
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size() || v == 0) throw std::invalid_argument("bad width '" + tok + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw std::invalid_argument("empty width list");
    return out;
}

BenchOutcome run_bench(const Dataset& dataset, const AttributeIndexes& indexes, const std::string& method_name,
                       const nlohmann::json& params, const std::string& family, std::span<const Query> queries,
                       std::span<const KnnResult> truth, const std::vector<std::size_t>& widths, std::size_t runs) {
    auto method = make_method(method_name);
    if (!method->supports(parse_family(family))) {
        throw std::invalid_argument("method " + method_name + " does not serve " + family + " filters");
    }
    BenchOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    method->build(dataset, indexes, params);
    out.build.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.build.index_bytes = method->index_bytes();
    out.points = run_sweep(*method, queries, truth, resolve_widths(*method, widths), runs);
    out.build.peak_rss_bytes = peak_rss_bytes();
    out.rows = rows_from_sweep(method_name, family, params.is_null() ? "{}" : params.dump(), out.points, out.build);
    return out;
}

std::uint64_t tuning_seed(const std::string& method, const std::string& family, std::uint64_t base) {
    // FNV-1a, stable across platforms.
    std::uint64_t h = 1469598103934665603ull;
    for (char c : method + "/" + family) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h ^ base;
}

std::vector<std::size_t> sample_positions(std::size_t p, std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> idx(p);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    count = std::min(count, p);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, p - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

Reward tune_reward(const Dataset& dataset, const AttributeIndexes& indexes, const std::string& method_name,
                   const nlohmann::json& params, std::span<const Query> queries, std::span<const KnnResult> truth,
                   const std::vector<std::size_t>& widths, int iterations) {
    return get_reward(
        [&](int) {
            auto method = make_method(method_name);
            method->build(dataset, indexes, params);
            return to_curve(run_sweep(*method, queries, truth, resolve_widths(*method, widths), 1));
        },
        iterations);
}

}  // namespace fanns::bench
