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

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "fanns/bench/generator.hpp"
#include "fanns/bench/harness.hpp"
#include "fanns/bench/metrics.hpp"
#include "fanns/bench/results_csv.hpp"
#include "fanns/bench/sweep.hpp"
#include "fanns/bench/tuner.hpp"
#include "fanns/io.hpp"
#include "fanns/oracle.hpp"

using namespace fanns;
using namespace fanns::bench;
namespace fs = std::filesystem;

namespace {

KnnResult ids(std::initializer_list<ItemId> list) {
    KnnResult r;
    double d = 0.0;
    for (auto i : list) r.push_back({i, d += 1.0});
    return r;
}

GenSpec small_spec(std::size_t n, std::uint64_t seed) {
    GenSpec s;
    s.n = n;
    s.d = 16;
    s.seed = seed;
    s.columns = default_columns();
    return s;
}

// Reward lookup over a fixed table indexed by the single parameter "x".
std::function<Reward(const nlohmann::json&)> table_reward(const std::vector<double>& values) {
    return [values](const nlohmann::json& a) { return Reward{true, values.at(a["x"].get<std::size_t>())}; };
}

TuneSpec single_param(std::size_t size, std::size_t def) {
    TuneSpec s;
    s.params = {"x"};
    std::vector<nlohmann::json> vals;
    for (std::size_t i = 0; i < size; ++i) vals.emplace_back(i);
    s.value_lists = {vals};
    s.default_indices = {def};
    return s;
}

QueryGenSpec query_spec(FilterFamily family, std::size_t p, double lo = 0.0, double hi = 1.0) {
    QueryGenSpec q;
    q.family = family;
    q.p = p;
    q.sel_low = lo;
    q.sel_high = hi;
    return q;
}

}  // namespace

TEST(Recall, ConstructedCases) {
    const auto truth = ids({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    EXPECT_EQ(recall_at_k(truth, truth, 10), 1.0);
    EXPECT_EQ(recall_at_k(ids({10, 11, 12, 13, 14, 15, 16, 17, 18, 19}), truth, 10), 0.0);
    EXPECT_EQ(recall_at_k(ids({0, 1, 2, 3, 4, 15, 16, 17, 18, 19}), truth, 10), 0.5);
    EXPECT_EQ(recall_at_k(ids({9, 8, 7, 6, 5, 4, 3, 2, 1, 0}), truth, 10), 1.0);
}

TEST(Recall, ShortTruthAndEdgeCases) {
    EXPECT_EQ(recall_at_k(ids({3, 4}), ids({3, 4}), 10), 1.0);
    EXPECT_EQ(recall_at_k(ids({3, 9}), ids({3, 4}), 10), 0.5);
    EXPECT_EQ(recall_at_k({}, {}, 10), 1.0);
    EXPECT_EQ(recall_at_k({}, ids({1}), 10), 0.0);
    // Only the first k of the result count.
    EXPECT_EQ(recall_at_k(ids({5, 0}), ids({0, 1}), 1), 0.0);
}

TEST(Recall, AlwaysInUnitInterval) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<ItemId> id(0, 30);
    for (int t = 0; t < 500; ++t) {
        KnnResult a, b;
        for (int i = 0; i < 10; ++i) a.push_back({id(rng), double(i)});
        for (int i = 0; i < 10; ++i) b.push_back({ItemId(i * 3), double(i)});
        const double r = recall_at_k(a, b, 10);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, 1.0);
    }
}

TEST(MeanStd, PopulationDeviation) {
    const std::vector<double> xs = {1.0, 3.0};
    EXPECT_EQ(mean_std(xs).mean, 2.0);
    EXPECT_EQ(mean_std(xs).std, 1.0);
    const std::vector<double> one = {4.0};
    EXPECT_EQ(mean_std(one).std, 0.0);
    EXPECT_THROW(mean_std(std::vector<double>{}), std::invalid_argument);
}

TEST(Generator, VectorsAreUnitNorm) {
    const auto ds = gen_dataset(small_spec(2000, 3));
    for (ItemId i = 0; i < ds.size(); ++i) {
        double s = 0.0;
        for (float x : ds.vector(i)) s += double(x) * x;
        EXPECT_NEAR(std::sqrt(s), 1.0, 1e-6);
    }
}

TEST(Generator, SameSeedSameBytes) {
    const auto a = fs::temp_directory_path() / ("fanns_gen_a_" + std::to_string(::getpid()));
    const auto b = fs::temp_directory_path() / ("fanns_gen_b_" + std::to_string(::getpid()));
    io::save_dataset(a, gen_dataset(small_spec(500, 9)));
    io::save_dataset(b, gen_dataset(small_spec(500, 9)));
    for (const char* f : {"schema.json", "vectors.fvecs", "attributes.jsonl"}) {
        std::ifstream x(a / f, std::ios::binary), y(b / f, std::ios::binary);
        EXPECT_EQ(std::string(std::istreambuf_iterator<char>(x), {}), std::string(std::istreambuf_iterator<char>(y), {})) << f;
    }
    const auto c = gen_dataset(small_spec(500, 10));
    const auto d = gen_dataset(small_spec(500, 9));
    EXPECT_FALSE(std::equal(c.vectors().begin(), c.vectors().end(), d.vectors().begin()));
}

TEST(Generator, CategoricalMarginalsWithinThreeSigma) {
    GenSpec s;
    s.n = 100000;
    s.d = 2;
    s.seed = 5;
    ColumnGen col{"c", AttributeKind::Unordered};
    col.cardinality = 12;
    col.zipf = 1.1;
    s.columns = {col};
    const auto ds = gen_dataset(s);
    const auto w = zipf_weights(12, 1.1);
    const auto& uc = ds.unordered_column(0);
    std::vector<double> count(12, 0.0);
    for (auto code : uc.codes) {
        const auto& tok = uc.dict.token(code);
        count[std::stoul(tok.substr(2))] += 1.0;
    }
    for (std::size_t i = 0; i < 12; ++i) {
        const double expect = double(s.n) * w[i];
        const double sigma = std::sqrt(double(s.n) * w[i] * (1.0 - w[i]));
        EXPECT_LE(std::abs(count[i] - expect), 3.0 * sigma) << i;
    }
}

TEST(Generator, OrderedAndSetColumnsFollowSpec) {
    auto s = small_spec(3000, 4);
    const auto ds = gen_dataset(s);
    const auto& ord = ds.ordered_column(1);
    for (const auto& v : ord.values) {
        EXPECT_GE(v.as_integer(), 1950);
        EXPECT_LE(v.as_integer(), 2029);
    }
    const auto& set = ds.set_column(2);
    double total = 0.0;
    for (ItemId i = 0; i < ds.size(); ++i) total += double(set.labels(i).size());
    // Mean size 2 with a large pool: the sample mean is within 5 standard errors.
    EXPECT_NEAR(total / 3000.0, 2.0, 5.0 * std::sqrt(2.0 / 3000.0));
}

TEST(Generator, RejectsBadSpecs) {
    auto s = small_spec(0, 1);
    EXPECT_THROW(gen_dataset(s), std::invalid_argument);
    s = small_spec(10, 1);
    s.columns[0].cardinality = 0;
    EXPECT_THROW(gen_dataset(s), std::invalid_argument);
    EXPECT_THROW(columns_from_json(nlohmann::json::parse(R"([{"name":"a","kind":"bag"}])")), std::invalid_argument);
}

TEST(QueryGen, FiltersRespectBandAndK) {
    const auto ds = gen_dataset(small_spec(3000, 6));
    const auto idx = AttributeIndexes::build(ds);
    for (auto fam : {FilterFamily::Em, FilterFamily::Range, FilterFamily::Emis}) {
        QueryGenSpec qs;
        qs.family = fam;
        qs.p = 60;
        qs.k = 10;
        qs.sel_low = 0.01;
        qs.sel_high = 0.2;
        const auto set = gen_queries(ds, idx, qs);
        ASSERT_EQ(set.queries.size(), 60u);
        for (const auto& q : set.queries) {
            ASSERT_TRUE(q.filter);
            const double sel = selectivity(*q.filter, ds);
            EXPECT_GE(sel, 0.01);
            EXPECT_LE(sel, 0.2);
            EXPECT_GE(scan_matches(*q.filter, ds).size(), 10u);
            const auto op = q.filter->op();
            EXPECT_EQ(op, fam == FilterFamily::Em ? Filter::Op::Em : fam == FilterFamily::Range ? Filter::Op::Range : Filter::Op::Emis);
            double norm = 0.0;
            for (float x : q.vector) norm += double(x) * x;
            EXPECT_NEAR(std::sqrt(norm), 1.0, 1e-6);
        }
    }
}

TEST(QueryGen, FullBandOnlyAdmitsTrivialFilters) {
    auto s = small_spec(300, 2);
    ColumnGen one{"one", AttributeKind::Unordered};
    one.cardinality = 1;
    s.columns.push_back(one);
    const auto ds = gen_dataset(s);
    const auto idx = AttributeIndexes::build(ds);
    auto qs = query_spec(FilterFamily::Em, 5, 1.0, 1.0);
    qs.column = "one";
    for (const auto& q : gen_queries(ds, idx, qs).queries) EXPECT_EQ(selectivity(*q.filter, ds), 1.0);
    qs.column = "venue";
    qs.max_attempts = 50;
    EXPECT_THROW(gen_queries(ds, idx, qs), Error);
    const auto rs = query_spec(FilterFamily::Range, 5, 1.0, 1.0);
    for (const auto& q : gen_queries(ds, idx, rs).queries) EXPECT_EQ(selectivity(*q.filter, ds), 1.0);
}

TEST(QueryGen, Deterministic) {
    const auto ds = gen_dataset(small_spec(1000, 6));
    const auto idx = AttributeIndexes::build(ds);
    const auto qs = query_spec(FilterFamily::Range, 20, 0.05, 0.5);
    const auto a = gen_queries(ds, idx, qs), b = gen_queries(ds, idx, qs);
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_EQ(a.queries[i].vector, b.queries[i].vector);
        EXPECT_EQ(a.queries[i].filter->to_string(), b.queries[i].filter->to_string());
    }
}

TEST(Sweep, ExactMethodAndSingleRun) {
    const auto ds = gen_dataset(small_spec(1000, 7));
    const auto idx = AttributeIndexes::build(ds);
    const auto qs = query_spec(FilterFamily::Em, 30, 0.01, 1.0);
    const auto q = gen_queries(ds, idx, qs).queries;
    const auto truth = batch_ground_truth(ds, q, 10);
    auto pre = make_method("pre-filter");
    pre->build(ds, idx, nullptr);
    const std::vector<std::size_t> widths = {ds.size()};
    const auto pts = run_sweep(*pre, q, truth, widths, 1);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_EQ(pts[0].recall_mean, 1.0);
    EXPECT_EQ(pts[0].recall_std, 0.0);
    EXPECT_EQ(pts[0].qps_std, 0.0);
    EXPECT_GT(pts[0].qps_mean, 0.0);
}

TEST(Sweep, WidthDominanceOnHnsw) {
    const auto ds = gen_dataset(small_spec(1000, 8));
    const auto idx = AttributeIndexes::build(ds);
    const auto qs = query_spec(FilterFamily::None, 50);
    const auto q = gen_queries(ds, idx, qs).queries;
    const auto truth = batch_ground_truth(ds, q, 10);
    auto m = make_method("hnsw-induced");
    m->build(ds, idx, {{"M", 4}, {"ef_construction", 8}});
    const std::vector<std::size_t> widths = {10, 20, 50, 100, 1000};
    const auto pts = run_sweep(*m, q, truth, widths, 2);
    EXPECT_GE(pts.back().recall_mean, pts.front().recall_mean);
    for (const auto& p : pts) {
        EXPECT_EQ(p.recall_std, 0.0);
        for (double x : p.qps_runs) EXPECT_GT(x, 0.0);
    }
    const std::vector<std::size_t> too_small = {5};
    EXPECT_THROW(run_sweep(*m, q, truth, too_small, 1), std::invalid_argument);
    EXPECT_THROW(run_sweep(*m, q, std::span<const KnnResult>(truth).first(3), widths, 1), std::invalid_argument);
}

TEST(Reward, Examples) {
    EXPECT_EQ(reward_from_curve({{1.0, 100.0}, {0.90, 500.0}}), (Reward{true, 100.0}));
    EXPECT_EQ(reward_from_curve({{0.5, 900.0}, {0.80, 100.0}}), (Reward{false, 0.80}));
    EXPECT_GT((Reward{true, 10.0}), (Reward{false, 0.99}));
    EXPECT_GT((Reward{true, 11.0}), (Reward{true, 10.0}));
    EXPECT_TRUE(improves_by_margin({true, 10.2}, {true, 10.0}));
    EXPECT_FALSE(improves_by_margin({true, 10.05}, {true, 10.0}));
    EXPECT_TRUE(improves_by_margin({true, 1.0}, {false, 0.99}));
}

TEST(Reward, AveragesIterationsAndAbsorbsFailures) {
    const auto r = get_reward([](int it) {
        return std::vector<CurvePoint>{{it == 0 ? 0.94 : 0.98, 100.0}, {1.0, it == 0 ? 10.0 : 30.0}};
    });
    EXPECT_EQ(r, (Reward{true, 100.0}));
    const auto bad = get_reward([](int) -> std::vector<CurvePoint> { throw std::runtime_error("build failed"); });
    EXPECT_EQ(bad, (Reward{false, 0.0}));
}

TEST(Greedy, HandTracedExample) {
    const auto res = greedy_parameter_search(single_param(5, 0), table_reward({1, 2, 5, 4, 3}));
    EXPECT_EQ(res.indices, (std::vector<std::size_t>{2}));
    EXPECT_EQ(res.reward.value, 5.0);
    EXPECT_EQ(res.assignment["x"], 2);
    // default, pass 1 (+1), pass 2 (-1, +1), pass 3 (-1, +1)
    const std::vector<std::vector<std::size_t>> want = {{0}, {1}, {0}, {2}, {1}, {3}};
    EXPECT_EQ(res.evaluated, want);
}

TEST(Greedy, LocalOptimumAndConstantRewards) {
    auto res = greedy_parameter_search(single_param(5, 2), table_reward({1, 2, 5, 4, 3}));
    EXPECT_EQ(res.indices, (std::vector<std::size_t>{2}));
    EXPECT_EQ(res.evaluated.size(), 3u);
    res = greedy_parameter_search(single_param(4, 1), table_reward({7, 7, 7, 7}));
    EXPECT_EQ(res.indices, (std::vector<std::size_t>{1}));
    EXPECT_EQ(res.evaluated.size(), 3u);
}

TEST(Greedy, SmallGainsDoNotTriggerAnotherPass) {
    // 0 -> 1 gains only 0.5%: accepted, but the search stops after that pass.
    const auto res = greedy_parameter_search(single_param(3, 0), table_reward({100, 100.5, 200}));
    EXPECT_EQ(res.indices, (std::vector<std::size_t>{1}));
    EXPECT_EQ(res.evaluated.size(), 2u);
}

TEST(Greedy, MultiParameterNeverLeavesGrid) {
    TuneSpec s;
    s.params = {"a", "b"};
    s.value_lists = {{0, 1, 2, 3}, {0, 1, 2}};
    s.default_indices = {3, 0};
    const auto res = greedy_parameter_search(s, [](const nlohmann::json& a) {
        const int x = a["a"], y = a["b"];
        return Reward{true, 100.0 - (x - 1) * (x - 1) - (y - 2) * (y - 2)};
    });
    EXPECT_EQ(res.indices, (std::vector<std::size_t>{1, 2}));
    for (const auto& e : res.evaluated) {
        EXPECT_LT(e[0], 4u);
        EXPECT_LT(e[1], 3u);
    }
    s.default_indices = {4, 0};
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Greedy, SpecFromJson) {
    const auto s = TuneSpec::from_json(nlohmann::json::parse(R"([{"name":"M","values":[8,16,32],"default":1},{"name":"ef","values":[50]}])"));
    EXPECT_EQ(s.params, (std::vector<std::string>{"M", "ef"}));
    EXPECT_EQ(s.default_indices, (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(s.assignment({2, 0}), nlohmann::json::parse(R"({"M":32,"ef":50})"));
}

TEST(ResultsCsv, RowsAndRoundTrip) {
    SweepPoint p;
    p.width = 10;
    p.runs = 2;
    p.recall_runs = {0.5, 0.7};
    p.qps_runs = {100.0, 300.0};
    p.recall_mean = 0.6;
    p.recall_std = 0.1;
    p.qps_mean = 200.0;
    p.qps_std = 100.0;
    const auto rows = rows_from_sweep("hnsw-induced", "em", R"({"M":16,"gamma":2})", {p}, {1.5, 1000, 2000});
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].run, "0");
    EXPECT_EQ(rows[2].run, "mean");
    EXPECT_EQ(rows[3].run, "std");
    std::stringstream buf;
    write_results_csv(buf, rows);
    std::string header;
    std::getline(buf, header);
    EXPECT_EQ(header, "method,filter_family,params_json,width,run,recall,qps,build_seconds,peak_rss_bytes,index_bytes");
    buf.seekg(0);
    const auto back = read_results_csv(buf);
    ASSERT_EQ(back.size(), 4u);
    EXPECT_EQ(back[0].params_json, R"({"M":16,"gamma":2})");
    EXPECT_EQ(back[1].recall, 0.7);
    EXPECT_EQ(back[2].qps, 200.0);
    EXPECT_EQ(back[3].build_seconds, 0.0);
    EXPECT_EQ(back[0].index_bytes, 2000u);
}

TEST(Methods, RegistryAndParameterChecks) {
    const auto ds = gen_dataset(small_spec(300, 2));
    const auto idx = AttributeIndexes::build(ds);
    for (const auto& name : method_names()) {
        auto m = make_method(name);
        EXPECT_EQ(m->name(), name);
        EXPECT_THROW(m->build(ds, idx, {{"no_such_param", 1}}), std::invalid_argument) << name;
    }
    EXPECT_THROW(make_method("nope"), std::invalid_argument);
    EXPECT_EQ(parse_widths("10,50,max"), (std::vector<std::size_t>{10, 50, kMaxWidth}));
    EXPECT_THROW(parse_widths("10,x"), std::invalid_argument);
    EXPECT_THROW(parse_family("range"), std::invalid_argument);
}

TEST(Harness, TuningSamplesAreStable) {
    EXPECT_EQ(tuning_seed("hnsw-induced", "em", 1), tuning_seed("hnsw-induced", "em", 1));
    EXPECT_NE(tuning_seed("hnsw-induced", "em", 1), tuning_seed("hnsw-induced", "r", 1));
    const auto a = sample_positions(1000, 50, 3);
    EXPECT_EQ(a, sample_positions(1000, 50, 3));
    EXPECT_EQ(a.size(), 50u);
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    EXPECT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
}
