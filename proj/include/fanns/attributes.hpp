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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fanns {

enum class AttributeKind { Unordered, Ordered, Set };

std::string_view to_string(AttributeKind kind);
std::optional<AttributeKind> parse_attribute_kind(std::string_view text);

/// Value of an ordered attribute: a 64-bit integer or a finite real.
///
/// Integers and reals compare numerically against each other. Reals are
/// normalized so that -0.0 and +0.0 are the same value, which makes the
/// numeric order coincide with IEEE total order on everything we admit.
/// NaN and infinities are rejected; the two infinities exist only as the
/// unbounded() sentinels used by half-open range filters.
class OrderedValue {
 public:
    constexpr OrderedValue() = default;

    static OrderedValue integer(std::int64_t v) { return OrderedValue(Repr{v}); }
    /// Throws std::invalid_argument for NaN or infinity.
    static OrderedValue real(double v);

    /// Below every admissible value; encodes "no lower limit".
    static OrderedValue unbounded_low();
    /// Above every admissible value; encodes "no upper limit".
    static OrderedValue unbounded_high();

    bool is_integer() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_unbounded() const;
    std::int64_t as_integer() const { return std::get<std::int64_t>(v_); }
    double as_real() const { return std::get<double>(v_); }
    /// Numeric value, lossy for integers beyond 2^53.
    double to_double() const;

    std::string to_string() const;

    friend std::weak_ordering operator<=>(const OrderedValue& a, const OrderedValue& b);
    friend bool operator==(const OrderedValue& a, const OrderedValue& b) {
        return (a <=> b) == std::weak_ordering::equivalent;
    }

 private:
    using Repr = std::variant<std::int64_t, double>;
    explicit OrderedValue(Repr r) : v_(r) {}
    Repr v_{std::int64_t{0}};
};

using Token = std::string;
/// Sorted, duplicate-free list of tokens.
using TokenSet = std::vector<std::string>;

using AttributeValue = std::variant<Token, OrderedValue, TokenSet>;

AttributeKind kind_of(const AttributeValue& value);

/// Sorts and checks for duplicates; throws std::invalid_argument on a repeat.
TokenSet make_token_set(std::vector<std::string> tokens);

struct ColumnSpec {
    std::string name;
    AttributeKind kind = AttributeKind::Unordered;

    friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

class Schema {
 public:
    Schema() = default;
    /// Throws std::invalid_argument when names repeat.
    explicit Schema(std::vector<ColumnSpec> columns);

    std::size_t size() const { return columns_.size(); }
    const ColumnSpec& operator[](std::size_t i) const { return columns_[i]; }
    const std::vector<ColumnSpec>& columns() const { return columns_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    /// index_of that throws SchemaError for unknown names.
    std::size_t require(std::string_view name) const;

    friend bool operator==(const Schema&, const Schema&) = default;

 private:
    std::vector<ColumnSpec> columns_;
};

}  // namespace fanns
