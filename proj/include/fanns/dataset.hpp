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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "fanns/attributes.hpp"
#include "fanns/common.hpp"

namespace fanns {

/// One row as handed in by a loader or generator, before validation.
struct Item {
    std::int64_t id = 0;
    std::vector<float> vector;
    std::vector<AttributeValue> attributes;
};

/// Unvalidated dataset: whatever a file or caller produced.
struct RawDataset {
    Schema schema;
    std::size_t dimensionality = 0;
    std::vector<Item> items;
};

struct Violation {
    std::int64_t item_id = -1;  ///< -1 when the violation is not item-specific
    std::string message;
};

/// Reports every invariant violation; empty means the dataset is well-formed.
std::vector<Violation> validate_dataset(const RawDataset& raw);

class InvalidDatasetError : public Error {
 public:
    explicit InvalidDatasetError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

 private:
    std::vector<Violation> violations_;
};

/// Interns string tokens into dense int32 codes in first-seen order.
class TokenDictionary {
 public:
    std::int32_t intern(const std::string& token);
    /// -1 when the token was never seen.
    std::int32_t find(std::string_view token) const;
    const std::string& token(std::int32_t code) const { return tokens_[code]; }
    std::size_t size() const { return tokens_.size(); }
    const std::vector<std::string>& tokens() const { return tokens_; }

 private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::int32_t> codes_;
};

struct UnorderedColumn {
    TokenDictionary dict;
    std::vector<std::int32_t> codes;  ///< one per item
};

struct OrderedColumn {
    std::vector<OrderedValue> values;  ///< one per item
};

struct SetColumn {
    TokenDictionary dict;
    std::vector<std::uint32_t> offsets;  ///< n + 1 entries
    std::vector<std::int32_t> codes;     ///< per-item codes, ascending

    std::span<const std::int32_t> labels(ItemId i) const {
        return {codes.data() + offsets[i], codes.data() + offsets[i + 1]};
    }
};

using ColumnData = std::variant<UnorderedColumn, OrderedColumn, SetColumn>;

/// Validated, immutable, column-oriented dataset. Vectors are stored as a
/// single row-major float32 block so kernels can stream over them.
class Dataset {
 public:
    Dataset() = default;

    /// Validates and converts. Throws InvalidDatasetError listing every problem.
    static Dataset from_raw(const RawDataset& raw);

    std::size_t size() const { return n_; }
    std::size_t dim() const { return d_; }
    bool empty() const { return n_ == 0; }
    const Schema& schema() const { return schema_; }

    std::span<const float> vector(ItemId i) const { return {vectors_.data() + std::size_t(i) * d_, d_}; }
    const float* vector_ptr(ItemId i) const { return vectors_.data() + std::size_t(i) * d_; }
    std::span<const float> vectors() const { return vectors_; }

    const ColumnData& column(std::size_t c) const { return columns_[c]; }
    const UnorderedColumn& unordered_column(std::size_t c) const;
    const OrderedColumn& ordered_column(std::size_t c) const;
    const SetColumn& set_column(std::size_t c) const;

    AttributeValue attribute(ItemId i, std::size_t c) const;
    Item item(ItemId i) const;
    RawDataset to_raw() const;

    /// Approximate heap footprint.
    std::size_t memory_bytes() const;

 private:
    Schema schema_;
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<float> vectors_;
    std::vector<ColumnData> columns_;
};

}  // namespace fanns
