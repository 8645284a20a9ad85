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

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>

#include "fanns/io.hpp"
#include "fanns/oracle.hpp"
#include "test_support.hpp"

using namespace fanns;
using fanns::fixtures::random_dataset;
using fanns::fixtures::random_vector;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("fanns_io_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Fvecs, RoundTrip) {
    const auto dir = scratch("fvecs");
    const std::vector<float> v = {1.5f, -2.0f, 0.0f, 3.25f, 4.0f, -0.5f};
    io::write_fvecs(dir / "a.fvecs", v, 3);
    const auto back = io::read_fvecs(dir / "a.fvecs");
    EXPECT_EQ(back.d, 3u);
    EXPECT_EQ(back.rows(), 2u);
    EXPECT_EQ(back.data, v);
    EXPECT_EQ(fs::file_size(dir / "a.fvecs"), 2 * (4 + 12));
}

TEST(Fvecs, RejectsTruncatedAndMixedRecords) {
    const auto dir = scratch("fvecs_bad");
    const std::vector<float> v = {1, 2, 3, 4};
    io::write_fvecs(dir / "a.fvecs", v, 2);
    fs::resize_file(dir / "a.fvecs", fs::file_size(dir / "a.fvecs") - 2);
    EXPECT_THROW(io::read_fvecs(dir / "a.fvecs"), Error);

    std::ofstream out(dir / "b.fvecs", std::ios::binary);
    const std::int32_t d1 = 1, d2 = 2;
    const float x[2] = {1, 2};
    out.write(reinterpret_cast<const char*>(&d1), 4);
    out.write(reinterpret_cast<const char*>(x), 4);
    out.write(reinterpret_cast<const char*>(&d2), 4);
    out.write(reinterpret_cast<const char*>(x), 8);
    out.close();
    EXPECT_THROW(io::read_fvecs(dir / "b.fvecs"), Error);
    EXPECT_THROW(io::read_fvecs(dir / "missing.fvecs"), Error);
}

TEST(SchemaJson, RoundTrip) {
    const auto s = fixtures::toy_schema();
    EXPECT_EQ(io::schema_from_json(io::schema_to_json(s)), s);
    EXPECT_THROW(io::schema_from_json(nlohmann::json::parse(R"([{"name":"x","kind":"tree"}])")), Error);
}

TEST(FilterJson, RoundTripsEveryNodeType) {
    const std::vector<Filter> fs = {
        Filter::em("venue", "v1"),
        Filter::em("year", OrderedValue::integer(2001)),
        Filter::em("year", OrderedValue::real(1.25)),
        Filter::range("year", OrderedValue::integer(1990), OrderedValue::integer(2000)),
        Filter::at_most("year", OrderedValue::integer(2000)),
        Filter::emis("authors", "a3"),
        !(Filter::em("venue", "v1") || Filter::emis("authors", "a1")) && Filter::at_most("year", OrderedValue::real(2.5)),
    };
    for (const auto& f : fs) {
        const auto j = io::filter_to_json(f);
        EXPECT_EQ(io::filter_from_json(j).to_string(), f.to_string()) << j.dump();
        EXPECT_EQ(io::filter_to_json(io::filter_from_json(j)), j);
    }
}

TEST(FilterJson, RejectsMalformedInput) {
    for (const char* text : {R"({"op":"xor","args":[]})", R"({"op":"em","column":"c"})", R"({"column":"c"})",
                             R"({"op":"range","column":"y","low":5,"high":1})", R"([1,2])"}) {
        EXPECT_THROW(io::filter_from_json(nlohmann::json::parse(text)), Error) << text;
    }
}

TEST(DatasetFiles, RoundTripIsLossless) {
    const auto dir = scratch("ds");
    const auto ds = random_dataset(200, 7, 3);
    io::save_dataset(dir, ds);
    const auto back = io::load_dataset(dir);
    ASSERT_EQ(back.size(), ds.size());
    EXPECT_EQ(back.schema(), ds.schema());
    EXPECT_TRUE(std::equal(back.vectors().begin(), back.vectors().end(), ds.vectors().begin()));
    for (ItemId i = 0; i < ds.size(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(back.attribute(i, c), ds.attribute(i, c));
    }
    // Writing the reloaded copy gives the same bytes.
    const auto dir2 = scratch("ds2");
    io::save_dataset(dir2, back);
    for (const char* f : {"schema.json", "vectors.fvecs", "attributes.jsonl"}) EXPECT_EQ(slurp(dir / f), slurp(dir2 / f)) << f;
}

TEST(DatasetFiles, RowCountMismatchIsReported) {
    const auto dir = scratch("ds_bad");
    io::save_dataset(dir, random_dataset(10, 3, 1));
    std::ofstream(dir / "attributes.jsonl", std::ios::app) << R"({"venue":"v0","year":2000,"authors":[]})" << '\n';
    EXPECT_THROW(io::load_dataset(dir), Error);
}

TEST(QueryFile, RoundTripAndVectorIds) {
    const auto dir = scratch("q");
    const auto ds = random_dataset(50, 4, 2);
    std::mt19937_64 rng(1);
    std::vector<Query> qs = {{random_vector(4, rng), 5, Filter::em("venue", "v1")},
                             {random_vector(4, rng), 10, std::nullopt},
                             {random_vector(4, rng), 3, Filter::range("year", OrderedValue::integer(2000), OrderedValue::integer(2010))}};
    io::write_queries(dir / "q.jsonl", qs);
    const auto back = io::read_queries(dir / "q.jsonl", ds);
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(back[i].vector, qs[i].vector);
        EXPECT_EQ(back[i].k, qs[i].k);
        EXPECT_EQ(back[i].filter.has_value(), qs[i].filter.has_value());
        if (qs[i].filter) {
            EXPECT_EQ(back[i].filter->to_string(), qs[i].filter->to_string());
        }
    }
    std::ofstream(dir / "id.jsonl") << R"({"vector_id": 7, "k": 4, "filter": {"op":"emis","column":"authors","token":"a1"}})" << '\n';
    const auto byid = io::read_queries(dir / "id.jsonl", ds);
    ASSERT_EQ(byid.size(), 1u);
    EXPECT_TRUE(std::equal(byid[0].vector.begin(), byid[0].vector.end(), ds.vector(7).begin()));
    std::ofstream(dir / "bad.jsonl") << R"({"vector_id": 70})" << '\n';
    EXPECT_THROW(io::read_queries(dir / "bad.jsonl", ds), Error);
}

TEST(GroundTruthFile, RoundTrip) {
    const auto dir = scratch("gt");
    const auto ds = random_dataset(100, 4, 5);
    std::mt19937_64 rng(2);
    std::vector<Query> qs;
    for (int i = 0; i < 5; ++i) qs.push_back({random_vector(4, rng), 10, Filter::em("venue", "v" + std::to_string(i))});
    const auto truth = batch_ground_truth(ds, qs, 10);
    io::write_ground_truth(dir / "gt.bin", truth);
    const auto back = io::read_ground_truth(dir / "gt.bin");
    ASSERT_EQ(back.size(), truth.size());
    std::size_t bytes = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ASSERT_EQ(back[i].size(), truth[i].size());
        bytes += 4 + 8 * truth[i].size();
        for (std::size_t j = 0; j < truth[i].size(); ++j) {
            EXPECT_EQ(back[i][j].id, truth[i][j].id);
            EXPECT_EQ(back[i][j].distance, double(float(truth[i][j].distance)));
        }
    }
    EXPECT_EQ(fs::file_size(dir / "gt.bin"), bytes);
}

TEST(DataRoot, RelativePathsResolveUnderRoot) {
    const char* old = std::getenv("FANNS_DATA_ROOT");
    const std::string saved = old ? old : "";
    ::setenv("FANNS_DATA_ROOT", "/data/root", 1);
    EXPECT_EQ(io::resolve_data_path("x/y"), fs::path("/data/root/x/y"));
    EXPECT_EQ(io::resolve_data_path("/abs"), fs::path("/abs"));
    ::unsetenv("FANNS_DATA_ROOT");
    EXPECT_EQ(io::resolve_data_path("x/y"), fs::path("x/y"));
    if (old) ::setenv("FANNS_DATA_ROOT", saved.c_str(), 1);
}
