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

#include <atomic>

#include "fanns/simd/kernels.hpp"

namespace fanns::simd {

#if !defined(FANNS_HAVE_AVX2)
const Kernels* avx2_kernels() { return nullptr; }
#endif

#if !defined(FANNS_HAVE_NEON)
const Kernels* neon_kernels() { return nullptr; }
#endif

namespace {

const Kernels* best_available() {
    if (const auto* k = avx2_kernels()) return k;
    if (const auto* k = neon_kernels()) return k;
    return &scalar_kernels();
}

std::atomic<const Kernels*>& slot() {
    static std::atomic<const Kernels*> active{best_available()};
    return active;
}

}  // namespace

const Kernels& active_kernels() { return *slot().load(std::memory_order_relaxed); }

void set_preference(Preference pref) {
    slot().store(pref == Preference::Scalar ? &scalar_kernels() : best_available(), std::memory_order_relaxed);
}

}  // namespace fanns::simd
