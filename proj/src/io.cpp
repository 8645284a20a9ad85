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

#include "fanns/io.hpp"

#include <cstdlib>
#include <fstream>
#include <type_traits>

namespace fanns::io {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw Error("cannot read " + path.string());
    return in;
}

AttributeKind kind_from_string(const std::string& s) {
    if (s == "unordered") return AttributeKind::Unordered;
    if (s == "ordered") return AttributeKind::Ordered;
    if (s == "set") return AttributeKind::Set;
    throw Error("unknown attribute kind '" + s + "'");
}

const std::string& str_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) throw Error(std::string("filter: missing string field '") + key + "'");
    return j[key].get_ref<const std::string&>();
}

}  // namespace

void write_fvecs(const fs::path& path, std::span<const float> data, std::size_t d) {
    if (d == 0 || data.size() % d != 0) throw std::invalid_argument("fvecs: data size not a multiple of d");
    auto out = open_out(path, std::ios::binary);
    const auto dim = static_cast<std::int32_t>(d);
    for (std::size_t r = 0; r < data.size() / d; ++r) {
        out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
        out.write(reinterpret_cast<const char*>(data.data() + r * d), static_cast<std::streamsize>(d * sizeof(float)));
    }
    if (!out) throw Error("write failed: " + path.string());
}

VectorFile read_fvecs(const fs::path& path) {
    auto in = open_in(path, std::ios::binary);
    VectorFile vf;
    std::int32_t dim = 0;
    while (in.read(reinterpret_cast<char*>(&dim), sizeof dim)) {
        if (dim <= 0) throw Error("fvecs: non-positive dimension in " + path.string());
        if (vf.d == 0) vf.d = static_cast<std::size_t>(dim);
        if (static_cast<std::size_t>(dim) != vf.d) throw Error("fvecs: inconsistent dimension in " + path.string());
        const std::size_t off = vf.data.size();
        vf.data.resize(off + vf.d);
        if (!in.read(reinterpret_cast<char*>(vf.data.data() + off), static_cast<std::streamsize>(vf.d * sizeof(float)))) {
            throw Error("fvecs: truncated record in " + path.string());
        }
    }
    if (in.gcount() != 0) throw Error("fvecs: truncated header in " + path.string());
    return vf;
}

json schema_to_json(const Schema& schema) {
    json out = json::array();
    for (const auto& c : schema.columns()) out.push_back({{"name", c.name}, {"kind", std::string(to_string(c.kind))}});
    return out;
}

Schema schema_from_json(const json& j) {
    if (!j.is_array()) throw Error("schema: expected a JSON list");
    std::vector<ColumnSpec> cols;
    for (const auto& c : j) {
        if (!c.is_object() || !c.contains("name") || !c.contains("kind")) throw Error("schema: entries need name and kind");
        cols.push_back({c["name"].get<std::string>(), kind_from_string(c["kind"].get<std::string>())});
    }
    return Schema(std::move(cols));
}

json ordered_to_json(const OrderedValue& v) {
    if (v.is_unbounded()) return nullptr;
    if (v.is_integer()) return v.as_integer();
    return v.as_real();
}

OrderedValue ordered_from_json(const json& j) {
    if (j.is_number_integer()) return OrderedValue::integer(j.get<std::int64_t>());
    if (j.is_number()) return OrderedValue::real(j.get<double>());
    throw Error("expected a number for an ordered value");
}

json filter_to_json(const Filter& filter) {
    return std::visit(
        [](const auto& n) -> json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, EmLeaf>) {
                json v = std::holds_alternative<std::string>(n.value) ? json(std::get<std::string>(n.value))
                                                                      : ordered_to_json(std::get<OrderedValue>(n.value));
                return {{"op", "em"}, {"column", n.column}, {"value", v}};
            } else if constexpr (std::is_same_v<T, RangeLeaf>) {
                return {{"op", "range"}, {"column", n.column}, {"low", ordered_to_json(n.low)}, {"high", ordered_to_json(n.high)}};
            } else if constexpr (std::is_same_v<T, EmisLeaf>) {
                return {{"op", "emis"}, {"column", n.column}, {"token", n.token}};
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return {{"op", "not"}, {"arg", filter_to_json(n.child)}};
            } else {
                json args = json::array();
                for (const auto& c : n.children) args.push_back(filter_to_json(c));
                return {{"op", std::is_same_v<T, AndNode> ? "and" : "or"}, {"args", args}};
            }
        },
        filter.node().body);
}

Filter filter_from_json(const json& j) {
    if (!j.is_object()) throw Error("filter: expected an object");
    const std::string& op = str_field(j, "op");
    try {
        if (op == "em") {
            const auto& v = j.at("value");
            if (v.is_string()) return Filter::em(str_field(j, "column"), v.get<std::string>());
            return Filter::em(str_field(j, "column"), ordered_from_json(v));
        }
        if (op == "range") {
            const auto low = j.contains("low") && !j["low"].is_null() ? ordered_from_json(j["low"]) : OrderedValue::unbounded_low();
            const auto high =
                j.contains("high") && !j["high"].is_null() ? ordered_from_json(j["high"]) : OrderedValue::unbounded_high();
            return Filter::range(str_field(j, "column"), low, high);
        }
        if (op == "emis") return Filter::emis(str_field(j, "column"), str_field(j, "token"));
        if (op == "not") return Filter::negate(filter_from_json(j.at("arg")));
        if (op == "and" || op == "or") {
            std::vector<Filter> kids;
            for (const auto& c : j.at("args")) kids.push_back(filter_from_json(c));
            return op == "and" ? Filter::all_of(std::move(kids)) : Filter::any_of(std::move(kids));
        }
    } catch (const json::exception& e) {
        throw Error(std::string("filter: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(std::string("filter: ") + e.what());
    }
    throw Error("filter: unknown op '" + op + "'");
}

void save_dataset(const fs::path& dir, const Dataset& dataset) {
    fs::create_directories(dir);
    open_out(dir / "schema.json") << schema_to_json(dataset.schema()).dump(2) << '\n';
    write_fvecs(dir / "vectors.fvecs", dataset.vectors(), dataset.dim());
    auto out = open_out(dir / "attributes.jsonl");
    const auto& cols = dataset.schema().columns();
    for (ItemId i = 0; i < dataset.size(); ++i) {
        json row = json::object();
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto v = dataset.attribute(i, c);
            if (const auto* t = std::get_if<Token>(&v)) {
                row[cols[c].name] = *t;
            } else if (const auto* o = std::get_if<OrderedValue>(&v)) {
                row[cols[c].name] = ordered_to_json(*o);
            } else {
                row[cols[c].name] = std::get<TokenSet>(v);
            }
        }
        out << row.dump() << '\n';
    }
    if (!out) throw Error("write failed: " + (dir / "attributes.jsonl").string());
}

Dataset load_dataset(const fs::path& dir) {
    RawDataset raw;
    try {
        raw.schema = schema_from_json(json::parse(open_in(dir / "schema.json")));
    } catch (const json::exception& e) {
        throw Error("schema.json: " + std::string(e.what()));
    }
    auto vf = read_fvecs(dir / "vectors.fvecs");
    raw.dimensionality = vf.d;
    auto in = open_in(dir / "attributes.jsonl");
    std::string line;
    std::size_t row = 0;
    const auto& cols = raw.schema.columns();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= vf.rows()) throw Error("attributes.jsonl has more rows than vectors.fvecs");
        Item it;
        it.id = static_cast<std::int64_t>(row);
        it.vector.assign(vf.data.begin() + static_cast<std::ptrdiff_t>(row * vf.d),
                         vf.data.begin() + static_cast<std::ptrdiff_t>((row + 1) * vf.d));
        try {
            const json obj = json::parse(line);
            for (const auto& c : cols) {
                const auto& v = obj.at(c.name);
                switch (c.kind) {
                    case AttributeKind::Unordered:
                        it.attributes.emplace_back(Token(v.get<std::string>()));
                        break;
                    case AttributeKind::Ordered:
                        it.attributes.emplace_back(ordered_from_json(v));
                        break;
                    case AttributeKind::Set:
                        it.attributes.emplace_back(make_token_set(v.get<std::vector<std::string>>()));
                        break;
                }
            }
        } catch (const json::exception& e) {
            throw Error("attributes.jsonl line " + std::to_string(row + 1) + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw Error("attributes.jsonl line " + std::to_string(row + 1) + ": " + e.what());
        }
        raw.items.push_back(std::move(it));
        ++row;
    }
    if (row != vf.rows()) throw Error("attributes.jsonl has fewer rows than vectors.fvecs");
    return Dataset::from_raw(raw);
}

void write_queries(const fs::path& path, std::span<const Query> queries) {
    auto out = open_out(path);
    for (const auto& q : queries) {
        json row = {{"vector", q.vector}, {"k", q.k}};
        if (q.filter) row["filter"] = filter_to_json(*q.filter);
        out << row.dump() << '\n';
    }
    if (!out) throw Error("write failed: " + path.string());
}

std::vector<Query> read_queries(const fs::path& path, const Dataset& dataset) {
    auto in = open_in(path);
    std::vector<Query> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            Query q;
            if (j.contains("vector")) {
                q.vector = j["vector"].get<std::vector<float>>();
            } else if (j.contains("vector_id")) {
                const auto id = j["vector_id"].get<std::int64_t>();
                if (id < 0 || static_cast<std::size_t>(id) >= dataset.size()) throw Error("vector_id out of range");
                auto v = dataset.vector(static_cast<ItemId>(id));
                q.vector.assign(v.begin(), v.end());
            } else {
                throw Error("needs \"vector\" or \"vector_id\"");
            }
            q.k = j.value("k", std::size_t{10});
            if (j.contains("filter") && !j["filter"].is_null()) q.filter = filter_from_json(j["filter"]);
            check_query(q, dataset);
            out.push_back(std::move(q));
        } catch (const std::exception& e) {
            throw Error(path.string() + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_ground_truth(const fs::path& path, std::span<const KnnResult> truth) {
    auto out = open_out(path, std::ios::binary);
    for (const auto& r : truth) {
        const auto c = static_cast<std::int32_t>(r.size());
        out.write(reinterpret_cast<const char*>(&c), sizeof c);
        for (const auto& nb : r) {
            const auto id = static_cast<std::int32_t>(nb.id);
            out.write(reinterpret_cast<const char*>(&id), sizeof id);
        }
        for (const auto& nb : r) {
            const auto dist = static_cast<float>(nb.distance);
            out.write(reinterpret_cast<const char*>(&dist), sizeof dist);
        }
    }
    if (!out) throw Error("write failed: " + path.string());
}

std::vector<KnnResult> read_ground_truth(const fs::path& path) {
    auto in = open_in(path, std::ios::binary);
    std::vector<KnnResult> out;
    std::int32_t c = 0;
    while (in.read(reinterpret_cast<char*>(&c), sizeof c)) {
        if (c < 0) throw Error("ground truth: negative count in " + path.string());
        std::vector<std::int32_t> ids(static_cast<std::size_t>(c));
        std::vector<float> dists(static_cast<std::size_t>(c));
        in.read(reinterpret_cast<char*>(ids.data()), static_cast<std::streamsize>(ids.size() * sizeof(std::int32_t)));
        in.read(reinterpret_cast<char*>(dists.data()), static_cast<std::streamsize>(dists.size() * sizeof(float)));
        if (!in) throw Error("ground truth: truncated record in " + path.string());
        KnnResult r(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (ids[i] < 0) throw Error("ground truth: negative id in " + path.string());
            r[i] = {static_cast<ItemId>(ids[i]), dists[i]};
        }
        out.push_back(std::move(r));
    }
    if (in.gcount() != 0) throw Error("ground truth: truncated header in " + path.string());
    return out;
}

fs::path resolve_data_path(const fs::path& p) {
    if (p.is_absolute()) return p;
    const char* root = std::getenv("FANNS_DATA_ROOT");
    if (root == nullptr || *root == '\0') return p;
    return fs::path(root) / p;
}

}  // namespace fanns::io
