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

#include "fanns/filter.hpp"

#include <algorithm>
#include <stdexcept>

namespace fanns {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void collect_columns(const Filter& f, std::set<std::string>& out) {
    std::visit(overloaded{
                   [&](const EmLeaf& l) { out.insert(l.column); },
                   [&](const RangeLeaf& l) { out.insert(l.column); },
                   [&](const EmisLeaf& l) { out.insert(l.column); },
                   [&](const AndNode& n) {
                       for (const auto& c : n.children) collect_columns(c, out);
                   },
                   [&](const OrNode& n) {
                       for (const auto& c : n.children) collect_columns(c, out);
                   },
                   [&](const NotNode& n) { collect_columns(n.child, out); },
               },
               f.node().body);
}

std::string value_string(const std::variant<std::string, OrderedValue>& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return "\"" + *s + "\"";
    return std::get<OrderedValue>(v).to_string();
}

}  // namespace

Filter Filter::em(std::string column, std::string token) {
    return Filter(std::make_shared<FilterNode>(FilterNode{EmLeaf{std::move(column), std::move(token)}}));
}

Filter Filter::em(std::string column, OrderedValue value) {
    return Filter(std::make_shared<FilterNode>(FilterNode{EmLeaf{std::move(column), value}}));
}

Filter Filter::range(std::string column, OrderedValue low, OrderedValue high) {
    if (high < low) throw std::invalid_argument("range filter requires low <= high");
    return Filter(std::make_shared<FilterNode>(FilterNode{RangeLeaf{std::move(column), low, high}}));
}

Filter Filter::at_most(std::string column, OrderedValue high) {
    return range(std::move(column), OrderedValue::unbounded_low(), high);
}

Filter Filter::emis(std::string column, std::string token) {
    return Filter(std::make_shared<FilterNode>(FilterNode{EmisLeaf{std::move(column), std::move(token)}}));
}

Filter Filter::all_of(std::vector<Filter> children) {
    if (children.empty()) throw std::invalid_argument("AND needs at least one child");
    return Filter(std::make_shared<FilterNode>(FilterNode{AndNode{std::move(children)}}));
}

Filter Filter::any_of(std::vector<Filter> children) {
    if (children.empty()) throw std::invalid_argument("OR needs at least one child");
    return Filter(std::make_shared<FilterNode>(FilterNode{OrNode{std::move(children)}}));
}

Filter Filter::negate(Filter child) {
    return Filter(std::make_shared<FilterNode>(FilterNode{NotNode{std::move(child)}}));
}

Filter::Op Filter::op() const {
    return static_cast<Op>(node_->body.index());
}

std::set<std::string> Filter::columns() const {
    std::set<std::string> out;
    collect_columns(*this, out);
    return out;
}

std::string Filter::to_string() const {
    auto join = [](const std::vector<Filter>& cs, const char* sep) {
        std::string s = "(";
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (i) s += sep;
            s += cs[i].to_string();
        }
        return s + ")";
    };
    return std::visit(overloaded{
                          [](const EmLeaf& l) { return "EM(" + l.column + "=" + value_string(l.value) + ")"; },
                          [](const RangeLeaf& l) {
                              return "R(" + l.column + " in [" + l.low.to_string() + "," + l.high.to_string() + "])";
                          },
                          [](const EmisLeaf& l) { return "EMIS(" + l.column + " ∋ \"" + l.token + "\")"; },
                          [&](const AndNode& n) { return join(n.children, " AND "); },
                          [&](const OrNode& n) { return join(n.children, " OR "); },
                          [](const NotNode& n) { return "NOT " + n.child.to_string(); },
                      },
                      node_->body);
}

void check_filter(const Filter& filter, const Schema& schema) {
    auto require_kind = [&](const std::string& column, bool ok_unordered, bool ok_ordered, bool ok_set,
                            const char* what) {
        const auto kind = schema[schema.require(column)].kind;
        const bool ok = (kind == AttributeKind::Unordered && ok_unordered) ||
                        (kind == AttributeKind::Ordered && ok_ordered) || (kind == AttributeKind::Set && ok_set);
        if (!ok) {
            throw SchemaError(std::string(what) + " filter cannot apply to " + std::string(to_string(kind)) +
                              " column '" + column + "'");
        }
        return kind;
    };
    std::visit(overloaded{
                   [&](const EmLeaf& l) {
                       const auto kind = require_kind(l.column, true, true, false, "EM");
                       const bool is_token = std::holds_alternative<std::string>(l.value);
                       if (is_token != (kind == AttributeKind::Unordered)) {
                           throw SchemaError("EM value type does not match column '" + l.column + "'");
                       }
                   },
                   [&](const RangeLeaf& l) { require_kind(l.column, false, true, false, "R"); },
                   [&](const EmisLeaf& l) { require_kind(l.column, false, false, true, "EMIS"); },
                   [&](const AndNode& n) {
                       for (const auto& c : n.children) check_filter(c, schema);
                   },
                   [&](const OrNode& n) {
                       for (const auto& c : n.children) check_filter(c, schema);
                   },
                   [&](const NotNode& n) { check_filter(n.child, schema); },
               },
               filter.node().body);
}

bool eval_filter(const Filter& filter, const Schema& schema, const Item& item) {
    if (item.attributes.size() != schema.size()) throw SchemaError("item does not align with schema");
    auto attr = [&](const std::string& column) -> const AttributeValue& {
        return item.attributes[schema.require(column)];
    };
    return std::visit(
        overloaded{
            [&](const EmLeaf& l) -> bool {
                const auto& v = attr(l.column);
                if (const auto* tok = std::get_if<std::string>(&l.value)) {
                    const auto* have = std::get_if<Token>(&v);
                    if (!have) throw SchemaError("EM on non-unordered column '" + l.column + "'");
                    return *have == *tok;
                }
                const auto* have = std::get_if<OrderedValue>(&v);
                if (!have) throw SchemaError("EM value type does not match column '" + l.column + "'");
                return *have == std::get<OrderedValue>(l.value);
            },
            [&](const RangeLeaf& l) -> bool {
                const auto* have = std::get_if<OrderedValue>(&attr(l.column));
                if (!have) throw SchemaError("R on non-ordered column '" + l.column + "'");
                return !(*have < l.low) && !(l.high < *have);
            },
            [&](const EmisLeaf& l) -> bool {
                const auto* have = std::get_if<TokenSet>(&attr(l.column));
                if (!have) throw SchemaError("EMIS on non-set column '" + l.column + "'");
                return std::find(have->begin(), have->end(), l.token) != have->end();
            },
            [&](const AndNode& n) -> bool {
                bool all = true;
                for (const auto& c : n.children) all = eval_filter(c, schema, item) && all;
                return all;
            },
            [&](const OrNode& n) -> bool {
                bool any = false;
                for (const auto& c : n.children) any = eval_filter(c, schema, item) || any;
                return any;
            },
            [&](const NotNode& n) -> bool { return !eval_filter(n.child, schema, item); },
        },
        filter.node().body);
}

BoundFilter::BoundFilter(const Filter& filter, const Dataset& dataset) : dataset_(&dataset) {
    check_filter(filter, dataset.schema());
    root_ = compile(filter);
}

BoundFilter::Node BoundFilter::compile(const Filter& f) const {
    Node node;
    node.op = f.op();
    const auto& schema = dataset_->schema();
    std::visit(overloaded{
                   [&](const EmLeaf& l) {
                       node.column = schema.require(l.column);
                       if (const auto* tok = std::get_if<std::string>(&l.value)) {
                           node.code = dataset_->unordered_column(node.column).dict.find(*tok);
                       } else {
                           node.ordered_em = true;
                           node.low = node.high = std::get<OrderedValue>(l.value);
                       }
                   },
                   [&](const RangeLeaf& l) {
                       node.column = schema.require(l.column);
                       node.low = l.low;
                       node.high = l.high;
                   },
                   [&](const EmisLeaf& l) {
                       node.column = schema.require(l.column);
                       node.code = dataset_->set_column(node.column).dict.find(l.token);
                   },
                   [&](const AndNode& n) {
                       for (const auto& c : n.children) node.children.push_back(compile(c));
                   },
                   [&](const OrNode& n) {
                       for (const auto& c : n.children) node.children.push_back(compile(c));
                   },
                   [&](const NotNode& n) { node.children.push_back(compile(n.child)); },
               },
               f.node().body);
    switch (node.op) {
        case Filter::Op::Em:
            node.never = !node.ordered_em && node.code < 0;
            break;
        case Filter::Op::Emis:
            node.never = node.code < 0;
            break;
        case Filter::Op::And:
            node.never = std::any_of(node.children.begin(), node.children.end(), [](const Node& c) { return c.never; });
            break;
        case Filter::Op::Or:
            node.never = std::all_of(node.children.begin(), node.children.end(), [](const Node& c) { return c.never; });
            break;
        default:
            break;
    }
    return node;
}

bool BoundFilter::eval(const Node& node, ItemId id) const {
    switch (node.op) {
        case Filter::Op::Em:
            if (node.ordered_em) {
                return std::get<OrderedColumn>(dataset_->column(node.column)).values[id] == node.low;
            }
            return node.code >= 0 && std::get<UnorderedColumn>(dataset_->column(node.column)).codes[id] == node.code;
        case Filter::Op::Range: {
            const auto& v = std::get<OrderedColumn>(dataset_->column(node.column)).values[id];
            return !(v < node.low) && !(node.high < v);
        }
        case Filter::Op::Emis: {
            if (node.code < 0) return false;
            auto labels = std::get<SetColumn>(dataset_->column(node.column)).labels(id);
            return std::binary_search(labels.begin(), labels.end(), node.code);
        }
        case Filter::Op::And:
            for (const auto& c : node.children) {
                if (!eval(c, id)) return false;
            }
            return true;
        case Filter::Op::Or:
            for (const auto& c : node.children) {
                if (eval(c, id)) return true;
            }
            return false;
        case Filter::Op::Not:
            return !eval(node.children.front(), id);
    }
    return false;
}

bool eval_filter(const Filter& filter, const Dataset& dataset, ItemId id) {
    return BoundFilter(filter, dataset)(id);
}

std::vector<ItemId> scan_matches(const Filter& filter, const Dataset& dataset) {
    BoundFilter pred(filter, dataset);
    std::vector<ItemId> out;
    for (ItemId i = 0; i < dataset.size(); ++i) {
        if (pred(i)) out.push_back(i);
    }
    return out;
}

double selectivity(const Filter& filter, const Dataset& dataset) {
    if (dataset.empty()) throw std::invalid_argument("selectivity of an empty dataset is undefined");
    return static_cast<double>(scan_matches(filter, dataset).size()) / static_cast<double>(dataset.size());
}

std::vector<bool> match_bitmap(const Filter& filter, const Dataset& dataset) {
    BoundFilter pred(filter, dataset);
    std::vector<bool> bits(dataset.size());
    for (ItemId i = 0; i < dataset.size(); ++i) bits[i] = pred(i);
    return bits;
}

void check_query(const Query& query, const Dataset& dataset) {
    if (query.k == 0) throw std::invalid_argument("k must be at least 1");
    if (query.vector.size() != dataset.dim()) {
        throw std::invalid_argument("query has " + std::to_string(query.vector.size()) +
                                    " coordinates, dataset has " + std::to_string(dataset.dim()));
    }
    if (query.filter) check_filter(*query.filter, dataset.schema());
}

}  // namespace fanns
