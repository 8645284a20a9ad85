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

#include "fanns/dataset.hpp"
#include "fanns/filter.hpp"
#include "fanns/filter_strategies.hpp"

namespace fanns::bench {

/// Per-column generation parameters.
///   unordered: `cardinality` tokens "<name>_<i>" with weights 1/(i+1)^zipf
///   ordered:   uniform integers in [low, high]
///   set:       Poisson(mean_size) tokens, clamped to the pool, drawn
///              uniformly without replacement from `cardinality` tokens
struct ColumnGen {
    std::string name;
    AttributeKind kind = AttributeKind::Unordered;
    std::size_t cardinality = 10;
    double zipf = 1.0;
    std::int64_t low = 0;
    std::int64_t high = 999;
    double mean_size = 2.0;
};

struct GenSpec {
    std::size_t n = 1000;
    std::size_t d = 64;
    std::uint64_t seed = 42;
    std::size_t components = 16;  ///< Gaussian mixture components
    double spread = 0.5;          ///< per-coordinate std around a center
    std::vector<ColumnGen> columns;

    /// Throws std::invalid_argument on an unusable spec.
    void validate() const;
};

/// Column list in the schema-file layout, with optional generation keys.
std::vector<ColumnGen> columns_from_json(const nlohmann::json& j);
/// The default three-column schema: venue (unordered), year (ordered), tags (set).
std::vector<ColumnGen> default_columns();

/// Normalized 1/(i+1)^s weights.
std::vector<double> zipf_weights(std::size_t cardinality, double s);

RawDataset gen_raw(const GenSpec& spec);
Dataset gen_dataset(const GenSpec& spec);

enum class FilterFamily { None, Em, Range, Emis };
std::string family_tag(FilterFamily f);
/// Accepts "none", "em", "r", "emis"; throws std::invalid_argument otherwise.
FilterFamily parse_family(const std::string& tag);

struct QueryGenSpec {
    FilterFamily family = FilterFamily::None;
    std::size_t p = 100;
    std::size_t k = 10;
    std::uint64_t seed = 7;
    double sel_low = 0.0;
    double sel_high = 1.0;
    std::string column;          ///< empty: first column the family applies to
    double noise = 0.1;          ///< norm of the perturbation before renormalizing
    std::size_t max_attempts = 1000;  ///< resampling budget per query
};

struct QuerySet {
    FilterFamily family = FilterFamily::None;
    std::vector<Query> queries;
    double sel_low = 0.0;
    double sel_high = 1.0;
    std::uint64_t seed = 0;
};

/// Perturbed dataset vectors with filters sampled from the data. Every
/// filter has selectivity within [sel_low, sel_high] and matches at least
/// k items. Throws Error when a query cannot be placed in the band within
/// max_attempts draws.
QuerySet gen_queries(const Dataset& dataset, const AttributeIndexes& indexes, const QueryGenSpec& spec);

}  // namespace fanns::bench
