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

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanns/bench/generator.hpp"
#include "fanns/dataset.hpp"
#include "fanns/filter.hpp"
#include "fanns/filter_strategies.hpp"

namespace fanns::bench {

/// What the sweep "width" means for a method.
enum class WidthKind {
    Ef,      ///< beam width; must be >= k, maximum n
    Probes,  ///< clusters probed; 1..c
    None,    ///< exact method, width ignored
};

/// A benchmarkable index behind one interface. build() may be called once.
class Method {
 public:
    virtual ~Method() = default;

    virtual std::string name() const = 0;
    virtual WidthKind width_kind() const = 0;
    virtual bool supports(FilterFamily family) const = 0;
    /// False only for methods allowed to return items violating the filter.
    virtual bool respects_filter() const { return true; }

    /// Throws std::invalid_argument on unknown or invalid parameters.
    virtual void build(const Dataset& dataset, const AttributeIndexes& indexes, const nlohmann::json& params) = 0;
    virtual KnnResult query(const Query& query, std::size_t width) const = 0;

    virtual std::size_t index_bytes() const = 0;
    /// Width at which the method is exhaustive.
    virtual std::size_t max_width() const = 0;
};

/// Registered names:
///   pre-filter, post-filter, router, hnsw-visit-all, hnsw-induced,
///   segment-tree, segment-graph, label-graph, ivf, rii, caps, afanns-fused
const std::vector<std::string>& method_names();

/// Throws std::invalid_argument for an unknown name.
std::unique_ptr<Method> make_method(const std::string& name);

}  // namespace fanns::bench
