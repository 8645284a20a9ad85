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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fanns/attributes.hpp"
#include "fanns/common.hpp"
#include "fanns/dataset.hpp"

namespace fanns {

struct FilterNode;

/// Immutable boolean expression over attribute predicates. Copies share
/// structure.
///
/// Leaves:
///   EM   (column, value)       unordered or ordered column, equality
///   R    (column, low, high)   ordered column, both bounds inclusive
///   EMIS (column, token)       set column, membership
/// Internal nodes: AND, OR (any number of children), NOT.
class Filter {
 public:
    enum class Op { Em, Range, Emis, And, Or, Not };

    static Filter em(std::string column, std::string token);
    static Filter em(std::string column, OrderedValue value);
    /// Throws std::invalid_argument when low > high.
    static Filter range(std::string column, OrderedValue low, OrderedValue high);
    /// R filter with no lower limit.
    static Filter at_most(std::string column, OrderedValue high);
    static Filter emis(std::string column, std::string token);
    static Filter all_of(std::vector<Filter> children);
    static Filter any_of(std::vector<Filter> children);
    static Filter negate(Filter child);

    Op op() const;
    const FilterNode& node() const { return *node_; }

    /// Distinct columns referenced anywhere in the tree.
    std::set<std::string> columns() const;
    /// Number of distinct columns (o_j in the usual notation).
    std::size_t arity() const { return columns().size(); }

    bool is_leaf() const { return op() == Op::Em || op() == Op::Range || op() == Op::Emis; }
    std::string to_string() const;

    friend Filter operator&&(Filter a, Filter b) { return all_of({std::move(a), std::move(b)}); }
    friend Filter operator||(Filter a, Filter b) { return any_of({std::move(a), std::move(b)}); }
    friend Filter operator!(Filter a) { return negate(std::move(a)); }

 private:
    explicit Filter(std::shared_ptr<const FilterNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const FilterNode> node_;
};

struct EmLeaf {
    std::string column;
    std::variant<std::string, OrderedValue> value;
};

struct RangeLeaf {
    std::string column;
    OrderedValue low;
    OrderedValue high;
};

struct EmisLeaf {
    std::string column;
    std::string token;
};

struct AndNode {
    std::vector<Filter> children;
};

struct OrNode {
    std::vector<Filter> children;
};

struct NotNode {
    Filter child;
};

struct FilterNode {
    std::variant<EmLeaf, RangeLeaf, EmisLeaf, AndNode, OrNode, NotNode> body;
};

/// Throws SchemaError if a leaf names an unknown column or a column of a
/// kind its filter type cannot apply to.
void check_filter(const Filter& filter, const Schema& schema);

/// Value-level evaluation against a stand-alone item.
bool eval_filter(const Filter& filter, const Schema& schema, const Item& item);

/// A filter resolved against one dataset: column names become indices and
/// tokens become dictionary codes, so evaluation touches no strings.
class BoundFilter {
 public:
    /// Throws SchemaError on any mismatch.
    BoundFilter(const Filter& filter, const Dataset& dataset);

    bool operator()(ItemId id) const { return eval(root_, id); }

    /// True when the filter provably matches nothing (e.g. a token absent
    /// from the column dictionary), decided without scanning items.
    bool never_matches() const { return root_.never; }

 private:
    struct Node {
        Filter::Op op;
        std::size_t column = 0;
        std::int32_t code = -1;  // EM on unordered, EMIS
        OrderedValue low, high;  // EM on ordered uses low == high
        bool ordered_em = false;
        bool never = false;
        std::vector<Node> children;
    };

    Node compile(const Filter& f) const;
    bool eval(const Node& node, ItemId id) const;

    const Dataset* dataset_;
    Node root_;
};

bool eval_filter(const Filter& filter, const Dataset& dataset, ItemId id);

/// Sorted ids of all items matching the filter, by exhaustive scan.
std::vector<ItemId> scan_matches(const Filter& filter, const Dataset& dataset);

/// Fraction of items matching the filter. Throws std::invalid_argument for
/// an empty dataset.
double selectivity(const Filter& filter, const Dataset& dataset);

/// Dense bitmap of matching ids.
std::vector<bool> match_bitmap(const Filter& filter, const Dataset& dataset);

struct Query {
    std::vector<float> vector;
    std::size_t k = 10;
    std::optional<Filter> filter;
};

/// Throws std::invalid_argument / SchemaError if the query does not fit the dataset.
void check_query(const Query& query, const Dataset& dataset);

}  // namespace fanns
