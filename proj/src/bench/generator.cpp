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

#include "fanns/bench/generator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fanns/distance.hpp"

namespace fanns::bench {

void GenSpec::validate() const {
    if (n == 0 || d == 0) throw std::invalid_argument("gen: n and d must be positive");
    if (components == 0) throw std::invalid_argument("gen: need at least one mixture component");
    if (!(spread >= 0.0)) throw std::invalid_argument("gen: spread must be non-negative");
    for (const auto& c : columns) {
        if (c.kind != AttributeKind::Ordered && c.cardinality == 0) {
            throw std::invalid_argument("gen: column '" + c.name + "' needs a positive cardinality");
        }
        if (c.kind == AttributeKind::Ordered && c.low > c.high) throw std::invalid_argument("gen: low > high for '" + c.name + "'");
        if (c.kind == AttributeKind::Set && !(c.mean_size >= 0.0)) throw std::invalid_argument("gen: negative mean_size");
        if (c.kind == AttributeKind::Unordered && !(c.zipf >= 0.0)) throw std::invalid_argument("gen: negative zipf exponent");
    }
}

std::vector<ColumnGen> columns_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("gen: schema must be a JSON list");
    std::vector<ColumnGen> out;
    for (const auto& c : j) {
        ColumnGen g;
        g.name = c.at("name").get<std::string>();
        const auto kind = c.at("kind").get<std::string>();
        if (kind == "unordered") {
            g.kind = AttributeKind::Unordered;
        } else if (kind == "ordered") {
            g.kind = AttributeKind::Ordered;
        } else if (kind == "set") {
            g.kind = AttributeKind::Set;
            g.cardinality = 50;
        } else {
            throw std::invalid_argument("gen: unknown kind '" + kind + "'");
        }
        g.cardinality = c.value("cardinality", g.cardinality);
        g.zipf = c.value("zipf", g.zipf);
        g.low = c.value("low", g.low);
        g.high = c.value("high", g.high);
        g.mean_size = c.value("mean_size", g.mean_size);
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<ColumnGen> default_columns() {
    ColumnGen venue{"venue", AttributeKind::Unordered};
    venue.cardinality = 20;
    ColumnGen year{"year", AttributeKind::Ordered};
    year.low = 1950;
    year.high = 2029;
    ColumnGen tags{"tags", AttributeKind::Set};
    tags.cardinality = 50;
    return {venue, year, tags};
}

std::vector<double> zipf_weights(std::size_t cardinality, double s) {
    std::vector<double> w(cardinality);
    double total = 0.0;
    for (std::size_t i = 0; i < cardinality; ++i) total += w[i] = 1.0 / std::pow(double(i + 1), s);
    for (auto& x : w) x /= total;
    return w;
}

RawDataset gen_raw(const GenSpec& spec) {
    spec.validate();
    std::vector<ColumnSpec> cols;
    for (const auto& c : spec.columns) cols.push_back({c.name, c.kind});
    RawDataset raw;
    raw.schema = Schema(std::move(cols));
    raw.dimensionality = spec.d;

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    std::vector<float> centers(spec.components * spec.d);
    for (auto& x : centers) x = static_cast<float>(unit(rng));
    std::uniform_int_distribution<std::size_t> component(0, spec.components - 1);

    std::vector<std::discrete_distribution<std::size_t>> cat(spec.columns.size());
    for (std::size_t c = 0; c < spec.columns.size(); ++c) {
        if (spec.columns[c].kind == AttributeKind::Unordered) {
            const auto w = zipf_weights(spec.columns[c].cardinality, spec.columns[c].zipf);
            cat[c] = std::discrete_distribution<std::size_t>(w.begin(), w.end());
        }
    }

    raw.items.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        Item& it = raw.items[i];
        it.id = static_cast<std::int64_t>(i);
        it.vector.resize(spec.d);
        const float* ctr = centers.data() + component(rng) * spec.d;
        for (std::size_t j = 0; j < spec.d; ++j) it.vector[j] = static_cast<float>(ctr[j] + spec.spread * unit(rng));
        normalize(it.vector);
        for (std::size_t c = 0; c < spec.columns.size(); ++c) {
            const auto& g = spec.columns[c];
            switch (g.kind) {
                case AttributeKind::Unordered:
                    it.attributes.emplace_back(Token(g.name + "_" + std::to_string(cat[c](rng))));
                    break;
                case AttributeKind::Ordered:
                    it.attributes.emplace_back(OrderedValue::integer(std::uniform_int_distribution<std::int64_t>(g.low, g.high)(rng)));
                    break;
                case AttributeKind::Set: {
                    std::size_t size = g.mean_size > 0.0 ? std::poisson_distribution<std::size_t>(g.mean_size)(rng) : 0;
                    size = std::min(size, g.cardinality);
                    std::vector<std::uint8_t> taken(g.cardinality, 0);
                    std::vector<std::string> toks;
                    std::uniform_int_distribution<std::size_t> pick(0, g.cardinality - 1);
                    while (toks.size() < size) {
                        const auto t = pick(rng);
                        if (taken[t]) continue;
                        taken[t] = 1;
                        toks.push_back(g.name + "_" + std::to_string(t));
                    }
                    it.attributes.emplace_back(make_token_set(std::move(toks)));
                    break;
                }
            }
        }
    }
    return raw;
}

Dataset gen_dataset(const GenSpec& spec) { return Dataset::from_raw(gen_raw(spec)); }

std::string family_tag(FilterFamily f) {
    switch (f) {
        case FilterFamily::None:
            return "none";
        case FilterFamily::Em:
            return "em";
        case FilterFamily::Range:
            return "r";
        case FilterFamily::Emis:
            return "emis";
    }
    return "none";
}

FilterFamily parse_family(const std::string& tag) {
    if (tag == "none") return FilterFamily::None;
    if (tag == "em") return FilterFamily::Em;
    if (tag == "r") return FilterFamily::Range;
    if (tag == "emis") return FilterFamily::Emis;
    throw std::invalid_argument("unknown filter family '" + tag + "' (expected none, em, r, emis)");
}

namespace {

std::size_t pick_column(const Schema& schema, FilterFamily family, const std::string& name) {
    const AttributeKind want = family == FilterFamily::Range ? AttributeKind::Ordered
                               : family == FilterFamily::Emis ? AttributeKind::Set
                                                              : AttributeKind::Unordered;
    if (!name.empty()) {
        const auto c = schema.require(name);
        const auto kind = schema[c].kind;
        const bool ok = kind == want || (family == FilterFamily::Em && kind == AttributeKind::Ordered);
        if (!ok) throw SchemaError("column '" + name + "' does not accept " + family_tag(family) + " filters");
        return c;
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (schema[c].kind == want) return c;
    }
    throw SchemaError("schema has no column for " + family_tag(family) + " filters");
}

}  // namespace

QuerySet gen_queries(const Dataset& dataset, const AttributeIndexes& indexes, const QueryGenSpec& spec) {
    if (spec.p == 0) throw std::invalid_argument("queries: p must be positive");
    if (dataset.empty()) throw std::invalid_argument("queries: empty dataset");
    if (spec.sel_low > spec.sel_high || spec.sel_low < 0.0 || spec.sel_high > 1.0) {
        throw std::invalid_argument("queries: selectivity band must satisfy 0 <= low <= high <= 1");
    }
    QuerySet out;
    out.family = spec.family;
    out.sel_low = spec.sel_low;
    out.sel_high = spec.sel_high;
    out.seed = spec.seed;

    const std::size_t n = dataset.size();
    const std::size_t d = dataset.dim();
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<ItemId> item(0, static_cast<ItemId>(n - 1));
    std::normal_distribution<double> noise(0.0, spec.noise / std::sqrt(double(d)));

    const std::size_t col = spec.family == FilterFamily::None ? 0 : pick_column(dataset.schema(), spec.family, spec.column);
    const std::string col_name = spec.family == FilterFamily::None ? std::string() : dataset.schema()[col].name;

    auto in_band = [&](std::size_t count) {
        const double sel = double(count) / double(n);
        return count >= spec.k && sel >= spec.sel_low && sel <= spec.sel_high;
    };

    auto draw_filter = [&]() -> std::optional<Filter> {
        switch (spec.family) {
            case FilterFamily::None:
                return std::nullopt;
            case FilterFamily::Em: {
                const auto v = dataset.attribute(item(rng), col);
                Filter f = std::holds_alternative<Token>(v) ? Filter::em(col_name, std::get<Token>(v))
                                                            : Filter::em(col_name, std::get<OrderedValue>(v));
                if (in_band(indexes.matching_ids(f).size())) return f;
                return std::nullopt;
            }
            case FilterFamily::Emis: {
                const auto v = dataset.attribute(item(rng), col);
                const auto& toks = std::get<TokenSet>(v);
                if (toks.empty()) return std::nullopt;
                const auto& tok = toks[std::uniform_int_distribution<std::size_t>(0, toks.size() - 1)(rng)];
                Filter f = Filter::emis(col_name, tok);
                if (in_band(indexes.postings(col, tok).size())) return f;
                return std::nullopt;
            }
            case FilterFamily::Range: {
                const auto& sorted = std::get<AttributeIndexes::SortedColumn>(indexes.column(col));
                const auto lo = std::max<std::size_t>({spec.k, 1, std::size_t(std::ceil(spec.sel_low * double(n)))});
                const auto hi = std::min<std::size_t>(n, std::size_t(std::floor(spec.sel_high * double(n))));
                if (lo > hi) return std::nullopt;
                const auto count = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
                const auto start = std::uniform_int_distribution<std::size_t>(0, n - count)(rng);
                Filter f = Filter::range(col_name, sorted.values[start], sorted.values[start + count - 1]);
                if (in_band(indexes.range_ids(col, sorted.values[start], sorted.values[start + count - 1]).size())) return f;
                return std::nullopt;
            }
        }
        return std::nullopt;
    };

    out.queries.reserve(spec.p);
    for (std::size_t qi = 0; qi < spec.p; ++qi) {
        Query q;
        q.k = spec.k;
        const auto src = dataset.vector(item(rng));
        q.vector.assign(src.begin(), src.end());
        for (auto& x : q.vector) x = static_cast<float>(x + noise(rng));
        normalize(q.vector);
        if (spec.family != FilterFamily::None) {
            std::size_t attempt = 0;
            for (; attempt < spec.max_attempts; ++attempt) {
                if (auto f = draw_filter()) {
                    q.filter = std::move(f);
                    break;
                }
            }
            if (!q.filter) {
                throw Error("queries: selectivity band [" + std::to_string(spec.sel_low) + ", " + std::to_string(spec.sel_high) +
                            "] unreachable for " + family_tag(spec.family) + " filters on '" + col_name + "'");
            }
        }
        out.queries.push_back(std::move(q));
    }
    return out;
}

}  // namespace fanns::bench
