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

// On-disk formats:
//   vectors.fvecs     per record [int32 d][d x float32], little-endian
//   attributes.jsonl  one object per item, keys = column names, line = id
//   schema.json       [{"name": ..., "kind": "unordered"|"ordered"|"set"}]
//   queries.jsonl     {"vector": [...] | "vector_id": i, "k": k, "filter": {...}}
//   ground truth      per query [int32 c][c x int32 ids][c x float32 dists]
//
// Filter JSON:
//   {"op": "em",    "column": c, "value": "token" | number}
//   {"op": "range", "column": c, "low": number | null, "high": number | null}
//   {"op": "emis",  "column": c, "token": "t"}
//   {"op": "and" | "or", "args": [filter, ...]}
//   {"op": "not", "arg": filter}
// Integral JSON numbers become integer values, all others reals.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fanns/dataset.hpp"
#include "fanns/filter.hpp"
#include <json.hpp>

namespace fanns::io {

struct VectorFile {
    std::size_t d = 0;
    std::vector<float> data;  ///< rows * d
    std::size_t rows() const { return d == 0 ? 0 : data.size() / d; }
};

void write_fvecs(const std::filesystem::path& path, std::span<const float> data, std::size_t d);
/// Throws Error on truncation or when records disagree on d.
VectorFile read_fvecs(const std::filesystem::path& path);

nlohmann::json schema_to_json(const Schema& schema);
Schema schema_from_json(const nlohmann::json& j);

nlohmann::json ordered_to_json(const OrderedValue& v);
OrderedValue ordered_from_json(const nlohmann::json& j);

nlohmann::json filter_to_json(const Filter& filter);
/// Throws Error on malformed input.
Filter filter_from_json(const nlohmann::json& j);

/// Writes schema.json, vectors.fvecs and attributes.jsonl into `dir`.
void save_dataset(const std::filesystem::path& dir, const Dataset& dataset);
/// Inverse of save_dataset; validation errors surface as InvalidDatasetError.
Dataset load_dataset(const std::filesystem::path& dir);

void write_queries(const std::filesystem::path& path, std::span<const Query> queries);
/// Queries given by vector_id take their vector from `dataset`.
std::vector<Query> read_queries(const std::filesystem::path& path, const Dataset& dataset);

void write_ground_truth(const std::filesystem::path& path, std::span<const KnnResult> truth);
std::vector<KnnResult> read_ground_truth(const std::filesystem::path& path);

/// $FANNS_DATA_ROOT / p for relative paths when the variable is set.
std::filesystem::path resolve_data_path(const std::filesystem::path& p);

}  // namespace fanns::io
