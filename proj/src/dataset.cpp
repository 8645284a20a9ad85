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

#include "fanns/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace fanns {

namespace {

std::string join_messages(const std::vector<Violation>& vs) {
    std::string out = "invalid dataset:";
    for (std::size_t i = 0; i < vs.size() && i < 8; ++i) {
        out += "\n  ";
        if (vs[i].item_id >= 0) out += "item " + std::to_string(vs[i].item_id) + ": ";
        out += vs[i].message;
    }
    if (vs.size() > 8) out += "\n  ... (" + std::to_string(vs.size() - 8) + " more)";
    return out;
}

}  // namespace

InvalidDatasetError::InvalidDatasetError(std::vector<Violation> violations)
    : Error(join_messages(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate_dataset(const RawDataset& raw) {
    std::vector<Violation> out;
    const std::size_t n = raw.items.size();
    const std::size_t m = raw.schema.size();
    if (raw.dimensionality == 0) out.push_back({-1, "dimensionality must be positive"});

    std::vector<int> seen(n, 0);
    for (const auto& item : raw.items) {
        const auto id = item.id;
        if (id < 0 || static_cast<std::size_t>(id) >= n) {
            out.push_back({id, "id outside [0, " + std::to_string(n) + ")"});
        } else if (seen[id]++ == 1) {
            out.push_back({id, "duplicate id"});
        }
        if (item.vector.size() != raw.dimensionality) {
            out.push_back({id, "vector has " + std::to_string(item.vector.size()) +
                                   " coordinates, expected " + std::to_string(raw.dimensionality)});
        }
        if (std::any_of(item.vector.begin(), item.vector.end(), [](float x) { return !std::isfinite(x); })) {
            out.push_back({id, "vector has a non-finite coordinate"});
        }
        if (item.attributes.size() != m) {
            out.push_back({id, "has " + std::to_string(item.attributes.size()) + " attributes, schema has " +
                                   std::to_string(m)});
            continue;
        }
        for (std::size_t c = 0; c < m; ++c) {
            const auto& v = item.attributes[c];
            if (kind_of(v) != raw.schema[c].kind) {
                out.push_back({id, "attribute '" + raw.schema[c].name + "' is " +
                                       std::string(to_string(kind_of(v))) + ", schema says " +
                                       std::string(to_string(raw.schema[c].kind))});
                continue;
            }
            if (const auto* ov = std::get_if<OrderedValue>(&v); ov && ov->is_unbounded()) {
                out.push_back({id, "attribute '" + raw.schema[c].name + "' is not finite"});
            }
            if (const auto* set = std::get_if<TokenSet>(&v)) {
                TokenSet sorted = *set;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                    out.push_back({id, "set attribute '" + raw.schema[c].name + "' repeats a token"});
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i] == 0) out.push_back({static_cast<std::int64_t>(i), "id missing (gap in 0..n-1)"});
    }
    return out;
}

std::int32_t TokenDictionary::intern(const std::string& token) {
    auto [it, inserted] = codes_.try_emplace(token, static_cast<std::int32_t>(tokens_.size()));
    if (inserted) tokens_.push_back(token);
    return it->second;
}

std::int32_t TokenDictionary::find(std::string_view token) const {
    auto it = codes_.find(std::string(token));
    return it == codes_.end() ? -1 : it->second;
}

Dataset Dataset::from_raw(const RawDataset& raw) {
    if (auto violations = validate_dataset(raw); !violations.empty()) {
        throw InvalidDatasetError(std::move(violations));
    }
    Dataset ds;
    ds.schema_ = raw.schema;
    ds.n_ = raw.items.size();
    ds.d_ = raw.dimensionality;
    ds.vectors_.resize(ds.n_ * ds.d_);

    std::vector<const Item*> by_id(ds.n_);
    for (const auto& item : raw.items) by_id[item.id] = &item;

    for (std::size_t i = 0; i < ds.n_; ++i) {
        std::copy(by_id[i]->vector.begin(), by_id[i]->vector.end(), ds.vectors_.begin() + i * ds.d_);
    }

    for (std::size_t c = 0; c < raw.schema.size(); ++c) {
        switch (raw.schema[c].kind) {
            case AttributeKind::Unordered: {
                UnorderedColumn col;
                col.codes.reserve(ds.n_);
                for (std::size_t i = 0; i < ds.n_; ++i) {
                    col.codes.push_back(col.dict.intern(std::get<Token>(by_id[i]->attributes[c])));
                }
                ds.columns_.emplace_back(std::move(col));
                break;
            }
            case AttributeKind::Ordered: {
                OrderedColumn col;
                col.values.reserve(ds.n_);
                for (std::size_t i = 0; i < ds.n_; ++i) {
                    col.values.push_back(std::get<OrderedValue>(by_id[i]->attributes[c]));
                }
                ds.columns_.emplace_back(std::move(col));
                break;
            }
            case AttributeKind::Set: {
                SetColumn col;
                col.offsets.reserve(ds.n_ + 1);
                col.offsets.push_back(0);
                for (std::size_t i = 0; i < ds.n_; ++i) {
                    const auto& tokens = std::get<TokenSet>(by_id[i]->attributes[c]);
                    const auto begin = col.codes.size();
                    for (const auto& t : tokens) col.codes.push_back(col.dict.intern(t));
                    std::sort(col.codes.begin() + begin, col.codes.end());
                    col.offsets.push_back(static_cast<std::uint32_t>(col.codes.size()));
                }
                ds.columns_.emplace_back(std::move(col));
                break;
            }
        }
    }
    return ds;
}

const UnorderedColumn& Dataset::unordered_column(std::size_t c) const {
    if (const auto* col = std::get_if<UnorderedColumn>(&columns_.at(c))) return *col;
    throw SchemaError("column '" + schema_[c].name + "' is not unordered");
}

const OrderedColumn& Dataset::ordered_column(std::size_t c) const {
    if (const auto* col = std::get_if<OrderedColumn>(&columns_.at(c))) return *col;
    throw SchemaError("column '" + schema_[c].name + "' is not ordered");
}

const SetColumn& Dataset::set_column(std::size_t c) const {
    if (const auto* col = std::get_if<SetColumn>(&columns_.at(c))) return *col;
    throw SchemaError("column '" + schema_[c].name + "' is not a set column");
}

AttributeValue Dataset::attribute(ItemId i, std::size_t c) const {
    const auto& col = columns_.at(c);
    if (const auto* u = std::get_if<UnorderedColumn>(&col)) return u->dict.token(u->codes[i]);
    if (const auto* o = std::get_if<OrderedColumn>(&col)) return o->values[i];
    const auto& s = std::get<SetColumn>(col);
    TokenSet tokens;
    for (auto code : s.labels(i)) tokens.push_back(s.dict.token(code));
    std::sort(tokens.begin(), tokens.end());
    return tokens;
}

Item Dataset::item(ItemId i) const {
    Item it;
    it.id = i;
    auto v = vector(i);
    it.vector.assign(v.begin(), v.end());
    for (std::size_t c = 0; c < schema_.size(); ++c) it.attributes.push_back(attribute(i, c));
    return it;
}

RawDataset Dataset::to_raw() const {
    RawDataset raw{schema_, d_, {}};
    raw.items.reserve(n_);
    for (ItemId i = 0; i < n_; ++i) raw.items.push_back(item(i));
    return raw;
}

std::size_t Dataset::memory_bytes() const {
    std::size_t bytes = vectors_.size() * sizeof(float);
    for (const auto& col : columns_) {
        if (const auto* u = std::get_if<UnorderedColumn>(&col)) {
            bytes += u->codes.size() * sizeof(std::int32_t);
        } else if (const auto* o = std::get_if<OrderedColumn>(&col)) {
            bytes += o->values.size() * sizeof(OrderedValue);
        } else {
            const auto& s = std::get<SetColumn>(col);
            bytes += s.offsets.size() * sizeof(std::uint32_t) + s.codes.size() * sizeof(std::int32_t);
        }
    }
    return bytes;
}

}  // namespace fanns
