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

#include "fanns/pq.hpp"

#include <cmath>
#include <stdexcept>

#include "fanns/kmeans.hpp"
#include "fanns/serialize.hpp"
#include "fanns/simd/kernels.hpp"

namespace fanns {

void PqCodebook::encode(const float* x, std::uint8_t* code) const {
    const auto& k = simd::active_kernels();
    const std::size_t ds = dsub();
    for (std::size_t m = 0; m < s; ++m) {
        const float* xm = x + m * ds;
        std::size_t best = 0;
        double best_d = k.l2_sqr(xm, codeword(m, 0), ds);
        for (std::size_t j = 1; j < ksub; ++j) {
            const double dist = k.l2_sqr(xm, codeword(m, j), ds);
            if (dist < best_d) {
                best_d = dist;
                best = j;
            }
        }
        code[m] = static_cast<std::uint8_t>(best);
    }
}

std::vector<std::uint8_t> PqCodebook::encode(std::span<const float> x) const {
    if (x.size() != d) throw std::invalid_argument("pq encode: dimension mismatch");
    std::vector<std::uint8_t> code(s);
    encode(x.data(), code.data());
    return code;
}

std::vector<float> PqCodebook::decode(std::span<const std::uint8_t> code) const {
    if (code.size() != s) throw std::invalid_argument("pq decode: code length mismatch");
    std::vector<float> out(d);
    const std::size_t ds = dsub();
    for (std::size_t m = 0; m < s; ++m) {
        if (code[m] >= ksub) throw std::invalid_argument("pq decode: code out of range");
        const float* cw = codeword(m, code[m]);
        std::copy(cw, cw + ds, out.begin() + static_cast<std::ptrdiff_t>(m * ds));
    }
    return out;
}

std::vector<double> PqCodebook::distance_table(std::span<const float> q) const {
    if (q.size() != d) throw std::invalid_argument("pq table: dimension mismatch");
    const auto& k = simd::active_kernels();
    const std::size_t ds = dsub();
    std::vector<double> table(s * ksub);
    for (std::size_t m = 0; m < s; ++m) {
        for (std::size_t j = 0; j < ksub; ++j) table[m * ksub + j] = k.l2_sqr(q.data() + m * ds, codeword(m, j), ds);
    }
    return table;
}

double PqCodebook::adc_distance(std::span<const double> table, const std::uint8_t* code) const {
    double sum = 0.0;
    simd::active_kernels().adc_scan(table.data(), s, ksub, code, 1, &sum);
    return std::sqrt(sum);
}

void PqCodebook::save(std::ostream& out) const {
    io::BinaryWriter w(out);
    w.header("FANNSPQ0", 1);
    w.put<std::uint64_t>(d);
    w.put<std::uint64_t>(s);
    w.put<std::uint64_t>(ksub);
    w.put<std::uint64_t>(seed);
    w.put_array(codewords);
}

PqCodebook PqCodebook::load(std::istream& in) {
    io::BinaryReader r(in);
    r.header("FANNSPQ0", 1);
    PqCodebook cb;
    cb.d = r.get<std::uint64_t>();
    cb.s = r.get<std::uint64_t>();
    cb.ksub = r.get<std::uint64_t>();
    cb.seed = r.get<std::uint64_t>();
    cb.codewords = r.get_array<float>();
    if (cb.s == 0 || cb.d % cb.s != 0 || cb.ksub == 0 || cb.ksub > 256 || cb.codewords.size() != cb.s * cb.ksub * cb.dsub()) {
        throw Error("pq snapshot: inconsistent shape");
    }
    return cb;
}

PqCodebook pq_train(std::span<const float> vectors, std::size_t d, std::size_t s, std::size_t ksub, std::size_t iters,
                    std::uint64_t seed) {
    if (d == 0 || s == 0 || d % s != 0) throw std::invalid_argument("pq: s must divide d");
    if (ksub == 0 || ksub > 256) throw std::invalid_argument("pq: ksub must be in [1, 256]");
    const std::size_t n = vectors.size() / d;
    if (ksub > n) throw std::invalid_argument("pq: ksub exceeds number of training vectors");
    PqCodebook cb;
    cb.d = d;
    cb.s = s;
    cb.ksub = ksub;
    cb.seed = seed;
    const std::size_t ds = d / s;
    cb.codewords.resize(s * ksub * ds);
    std::vector<float> sub(n * ds);
    for (std::size_t m = 0; m < s; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            std::copy(vectors.begin() + static_cast<std::ptrdiff_t>(i * d + m * ds),
                      vectors.begin() + static_cast<std::ptrdiff_t>(i * d + (m + 1) * ds),
                      sub.begin() + static_cast<std::ptrdiff_t>(i * ds));
        }
        const KMeansModel km = kmeans_train(sub, ds, ksub, iters, seed + m);
        std::copy(km.centroids.begin(), km.centroids.end(),
                  cb.codewords.begin() + static_cast<std::ptrdiff_t>(m * ksub * ds));
    }
    return cb;
}

}  // namespace fanns
