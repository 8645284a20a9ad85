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

#include "fanns/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fanns/simd/kernels.hpp"

namespace fanns {

std::uint32_t KMeansModel::assign(const float* x) const {
    const auto& k = simd::active_kernels();
    std::uint32_t best = 0;
    double best_d = k.l2_sqr(x, centroid(0), d);
    for (std::size_t i = 1; i < c; ++i) {
        const double dist = k.l2_sqr(x, centroid(i), d);
        if (dist < best_d) {
            best_d = dist;
            best = static_cast<std::uint32_t>(i);
        }
    }
    return best;
}

std::vector<std::uint32_t> KMeansModel::nearest(const float* x, std::size_t w) const {
    const auto& k = simd::active_kernels();
    std::vector<std::pair<double, std::uint32_t>> all(c);
    for (std::size_t i = 0; i < c; ++i) all[i] = {k.l2_sqr(x, centroid(i), d), static_cast<std::uint32_t>(i)};
    w = std::min(w, c);
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(w), all.end());
    std::vector<std::uint32_t> out(w);
    for (std::size_t i = 0; i < w; ++i) out[i] = all[i].second;
    return out;
}

KMeansModel kmeans_train(std::span<const float> vectors, std::size_t d, std::size_t c, std::size_t iters,
                         std::uint64_t seed) {
    if (d == 0) throw std::invalid_argument("k-means: dimension must be positive");
    const std::size_t n = vectors.size() / d;
    if (c == 0 || c > n) throw std::invalid_argument("k-means: need 1 <= c <= number of vectors");
    const auto& k = simd::active_kernels();
    auto row = [&](std::size_t i) { return vectors.data() + i * d; };

    KMeansModel m;
    m.c = c;
    m.d = d;
    m.seed = seed;
    m.centroids.resize(c * d);
    std::mt19937_64 rng(seed);

    // k-means++ seeding.
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::vector<std::uint8_t> chosen(n, 0);
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    for (std::size_t j = 0; j < c; ++j) {
        chosen[pick] = 1;
        std::copy(row(pick), row(pick) + d, m.centroids.begin() + static_cast<std::ptrdiff_t>(j * d));
        if (j + 1 == c) break;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], k.l2_sqr(row(i), m.centroid(j), d));
            total += nearest[i];
        }
        if (total > 0.0) {
            double target = std::uniform_real_distribution<double>(0.0, total)(rng);
            pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                target -= nearest[i];
                if (target < 0.0 && nearest[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                // Rounding left the target unspent; take the last point with weight.
                for (std::size_t i = n; i-- > 0;) {
                    if (nearest[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            // Every point coincides with a centroid; take the next unused row.
            pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), 0) - chosen.begin());
        }
    }

    std::vector<std::uint32_t> label(n);
    std::vector<double> dist(n);
    std::vector<double> sums(c * d);
    std::vector<std::size_t> counts(c);
    auto assign_all = [&] {
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            label[i] = m.assign(row(i));
            dist[i] = k.l2_sqr(row(i), m.centroid(label[i]), d);
            obj += dist[i];
        }
        m.objective.push_back(obj);
    };

    assign_all();
    for (std::size_t it = 0; it < iters; ++it) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[label[i]];
            const float* x = row(i);
            double* s = sums.data() + label[i] * d;
            for (std::size_t j = 0; j < d; ++j) s[j] += x[j];
        }
        std::vector<float> prev = m.centroids;
        for (std::size_t cl = 0; cl < c; ++cl) {
            if (counts[cl] == 0) {
                // Re-seed from the point currently farthest from its centroid.
                const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
                std::copy(row(far), row(far) + d, m.centroids.begin() + static_cast<std::ptrdiff_t>(cl * d));
                dist[far] = 0.0;
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                m.centroids[cl * d + j] = static_cast<float>(sums[cl * d + j] / static_cast<double>(counts[cl]));
            }
        }
        ++m.iterations;
        assign_all();
        if (m.centroids == prev) break;
    }
    return m;
}

std::vector<float> sample_rows(std::span<const float> vectors, std::size_t d, std::size_t limit, std::uint64_t seed) {
    const std::size_t n = vectors.size() / d;
    if (limit == 0 || limit >= n) return {vectors.begin(), vectors.end()};
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < limit; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(limit);
    std::sort(idx.begin(), idx.end());
    std::vector<float> out;
    out.reserve(limit * d);
    for (auto i : idx) out.insert(out.end(), vectors.begin() + static_cast<std::ptrdiff_t>(i * d),
                                  vectors.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
    return out;
}

}  // namespace fanns
