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

#include <algorithm>

#include "fanns/common.hpp"

namespace fanns {

std::vector<ItemId> ids_of(const KnnResult& result) {
    std::vector<ItemId> ids;
    ids.reserve(result.size());
    for (const auto& n : result) ids.push_back(n.id);
    return ids;
}

void finalize_top_k(KnnResult& result, std::size_t k) {
    if (result.size() > k) {
        std::partial_sort(result.begin(), result.begin() + static_cast<std::ptrdiff_t>(k), result.end(),
                          neighbor_less);
        result.resize(k);
    } else {
        std::sort(result.begin(), result.end(), neighbor_less);
    }
}

bool is_canonical(const KnnResult& result) {
    for (std::size_t i = 1; i < result.size(); ++i) {
        if (!neighbor_less(result[i - 1], result[i])) return false;
    }
    return true;
}

}  // namespace fanns
