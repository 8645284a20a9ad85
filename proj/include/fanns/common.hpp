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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fanns {

/// Dense item identifier in [0, n).
using ItemId = std::uint32_t;

/// Base class for library errors that are not plain precondition violations.
class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// A filter or query refers to a column that is missing or has the wrong kind.
class SchemaError : public Error {
 public:
    using Error::Error;
};

struct Neighbor {
    ItemId id = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// (distance, id) lexicographic order used by every result list.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) noexcept {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

/// Top-k list, ascending by distance with ties broken by ascending id.
using KnnResult = std::vector<Neighbor>;

std::vector<ItemId> ids_of(const KnnResult& result);

/// Sorts by (distance, id) and keeps the first k entries.
void finalize_top_k(KnnResult& result, std::size_t k);

/// True when entries are strictly increasing under (distance, id).
bool is_canonical(const KnnResult& result);

}  // namespace fanns
