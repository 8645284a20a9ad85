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

#include "fanns/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

#include "fanns/common.hpp"

namespace fanns {

std::string_view to_string(AttributeKind kind) {
    switch (kind) {
        case AttributeKind::Unordered:
            return "unordered";
        case AttributeKind::Ordered:
            return "ordered";
        case AttributeKind::Set:
            return "set";
    }
    return "?";
}

std::optional<AttributeKind> parse_attribute_kind(std::string_view text) {
    if (text == "unordered") return AttributeKind::Unordered;
    if (text == "ordered") return AttributeKind::Ordered;
    if (text == "set") return AttributeKind::Set;
    return std::nullopt;
}

OrderedValue OrderedValue::real(double v) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument("ordered attribute values must be finite");
    }
    if (v == 0.0) v = 0.0;  // fold -0.0
    return OrderedValue(Repr{v});
}

OrderedValue OrderedValue::unbounded_low() {
    return OrderedValue(Repr{-std::numeric_limits<double>::infinity()});
}

OrderedValue OrderedValue::unbounded_high() {
    return OrderedValue(Repr{std::numeric_limits<double>::infinity()});
}

bool OrderedValue::is_unbounded() const {
    return !is_integer() && std::isinf(as_real());
}

double OrderedValue::to_double() const {
    return is_integer() ? static_cast<double>(as_integer()) : as_real();
}

std::string OrderedValue::to_string() const {
    if (is_integer()) return std::to_string(as_integer());
    if (is_unbounded()) return as_real() < 0 ? "-inf" : "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", as_real());
    return buf;
}

std::weak_ordering operator<=>(const OrderedValue& a, const OrderedValue& b) {
    if (a.is_integer() && b.is_integer()) return a.as_integer() <=> b.as_integer();
    if (!a.is_integer() && !b.is_integer()) {
        const double x = a.as_real(), y = b.as_real();
        if (x < y) return std::weak_ordering::less;
        if (x > y) return std::weak_ordering::greater;
        return std::weak_ordering::equivalent;
    }
    // long double holds every int64 exactly on the platforms we target.
    const long double x = a.is_integer() ? static_cast<long double>(a.as_integer())
                                         : static_cast<long double>(a.as_real());
    const long double y = b.is_integer() ? static_cast<long double>(b.as_integer())
                                         : static_cast<long double>(b.as_real());
    if (x < y) return std::weak_ordering::less;
    if (x > y) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

AttributeKind kind_of(const AttributeValue& value) {
    switch (value.index()) {
        case 0:
            return AttributeKind::Unordered;
        case 1:
            return AttributeKind::Ordered;
        default:
            return AttributeKind::Set;
    }
}

TokenSet make_token_set(std::vector<std::string> tokens) {
    std::sort(tokens.begin(), tokens.end());
    if (std::adjacent_find(tokens.begin(), tokens.end()) != tokens.end()) {
        throw std::invalid_argument("set attribute contains a duplicate token");
    }
    return tokens;
}

Schema::Schema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
    std::set<std::string_view> seen;
    for (const auto& c : columns_) {
        if (!seen.insert(c.name).second) {
            throw std::invalid_argument("duplicate column name '" + c.name + "'");
        }
    }
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t Schema::require(std::string_view name) const {
    auto idx = index_of(name);
    if (!idx) throw SchemaError("unknown column '" + std::string(name) + "'");
    return *idx;
}

}  // namespace fanns
