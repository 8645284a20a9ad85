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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fanns/dataset.hpp"
#include "fanns/distance.hpp"
#include "fanns/filter.hpp"
#include "test_support.hpp"

using namespace fanns;

namespace {

Item publication(std::string venue, std::int64_t year, std::vector<std::string> authors) {
    Item it;
    it.vector = {0.0f, 0.0f};
    it.attributes = {Token(std::move(venue)), OrderedValue::integer(year), make_token_set(std::move(authors))};
    return it;
}

// Neumaier-compensated sum in long double; shares no code with the kernels.
long double compensated_l2_sqr(const std::vector<float>& a, const std::vector<float>& b) {
    long double sum = 0, comp = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double diff = static_cast<long double>(a[i]) - static_cast<long double>(b[i]);
        const long double term = diff * diff;
        const long double t = sum + term;
        comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

}  // namespace

TEST(EvalFilter, EqualityMatch) {
    const auto schema = fixtures::toy_schema();
    EXPECT_TRUE(eval_filter(Filter::em("venue", "VLDB"), schema, publication("VLDB", 2005, {"Liu"})));
    EXPECT_FALSE(eval_filter(Filter::em("venue", "SIGMOD"), schema, publication("VLDB", 2005, {"Liu"})));
}

TEST(EvalFilter, RangeIsInclusiveOnBothEnds) {
    const auto schema = fixtures::toy_schema();
    const auto r = Filter::range("year", OrderedValue::integer(2000), OrderedValue::integer(2010));
    EXPECT_TRUE(eval_filter(r, schema, publication("x", 2010, {"a"})));
    EXPECT_TRUE(eval_filter(r, schema, publication("x", 2000, {"a"})));
    EXPECT_FALSE(eval_filter(r, schema, publication("x", 2011, {"a"})));
    EXPECT_FALSE(eval_filter(r, schema, publication("x", 1999, {"a"})));
}

TEST(EvalFilter, AndOfPartialMatchIsFalse) {
    const auto schema = fixtures::toy_schema();
    const auto f = Filter::em("venue", "VLDB") && Filter::emis("authors", "Liu");
    EXPECT_FALSE(eval_filter(f, schema, publication("VLDB", 2005, {"Wang"})));
    EXPECT_TRUE(eval_filter(f, schema, publication("VLDB", 2005, {"Liu", "Wang"})));
}

TEST(EvalFilter, HalfBoundedRange) {
    const auto schema = fixtures::toy_schema();
    const auto f = Filter::at_most("year", OrderedValue::integer(2000));
    EXPECT_TRUE(eval_filter(f, schema, publication("x", std::numeric_limits<std::int64_t>::min(), {"a"})));
    EXPECT_TRUE(eval_filter(f, schema, publication("x", 2000, {"a"})));
    EXPECT_FALSE(eval_filter(f, schema, publication("x", 2001, {"a"})));
}

TEST(EvalFilter, SchemaMismatchThrows) {
    const auto schema = fixtures::toy_schema();
    const auto item = publication("VLDB", 2005, {"Liu"});
    EXPECT_THROW(eval_filter(Filter::em("nope", "x"), schema, item), SchemaError);
    EXPECT_THROW(eval_filter(Filter::emis("venue", "x"), schema, item), SchemaError);
    EXPECT_THROW(eval_filter(Filter::range("authors", OrderedValue::integer(0), OrderedValue::integer(1)), schema,
                             item),
                 SchemaError);
    EXPECT_THROW(check_filter(Filter::em("year", "2005"), schema), SchemaError);
    EXPECT_NO_THROW(check_filter(Filter::em("year", OrderedValue::integer(2005)), schema));
}

TEST(EvalFilter, RangeRejectsInvertedBounds) {
    EXPECT_THROW(Filter::range("year", OrderedValue::integer(3), OrderedValue::integer(2)), std::invalid_argument);
}

TEST(EvalFilter, NegationComplementsOnEveryItem) {
    const auto ds = fixtures::random_dataset(300, 4, 7);
    const std::vector<Filter> filters = {
        Filter::em("venue", "v1"),
        Filter::range("year", OrderedValue::integer(2000), OrderedValue::integer(2010)),
        Filter::emis("authors", "a3"),
        Filter::em("venue", "v2") || Filter::emis("authors", "a1"),
        Filter::em("venue", "v0") && !Filter::range("year", OrderedValue::integer(1995), OrderedValue::integer(2020)),
        Filter::em("venue", "absent"),
    };
    for (const auto& f : filters) {
        const BoundFilter pos(f, ds), neg(!f, ds);
        for (ItemId i = 0; i < ds.size(); ++i) {
            ASSERT_EQ(neg(i), !pos(i)) << f.to_string() << " item " << i;
            ASSERT_EQ(pos(i), eval_filter(f, ds.schema(), ds.item(i))) << f.to_string() << " item " << i;
        }
    }
}

TEST(EvalFilter, ArityCountsDistinctColumns) {
    EXPECT_EQ(Filter::em("venue", "v").arity(), 1u);
    EXPECT_EQ((Filter::em("venue", "a") || Filter::em("venue", "b")).arity(), 1u);
    EXPECT_EQ((Filter::em("venue", "a") && Filter::emis("authors", "x") && !Filter::em("venue", "c")).arity(), 2u);
}

TEST(Selectivity, Examples) {
    const auto ds = fixtures::random_dataset(50, 3, 1);
    EXPECT_DOUBLE_EQ(selectivity(Filter::range("year", OrderedValue::integer(0), OrderedValue::integer(5000)), ds),
                     1.0);
    EXPECT_DOUBLE_EQ(selectivity(Filter::em("venue", "missing"), ds), 0.0);

    RawDataset raw;
    raw.schema = fixtures::toy_schema();
    raw.dimensionality = 2;
    const char* venues[] = {"A", "B", "A", "C"};
    for (int i = 0; i < 4; ++i) {
        auto it = publication(venues[i], 2000 + i, {"x"});
        it.id = i;
        raw.items.push_back(it);
    }
    EXPECT_DOUBLE_EQ(selectivity(Filter::em("venue", "A"), Dataset::from_raw(raw)), 0.5);
}

TEST(Selectivity, EmptyDatasetThrows) {
    RawDataset raw;
    raw.schema = fixtures::toy_schema();
    raw.dimensionality = 2;
    EXPECT_THROW(selectivity(Filter::em("venue", "A"), Dataset::from_raw(raw)), std::invalid_argument);
}

TEST(Selectivity, InvariantUnderReordering) {
    auto raw = fixtures::random_raw(200, 3, 11);
    const auto f = Filter::em("venue", "v1") || Filter::range("year", OrderedValue::integer(2000),
                                                             OrderedValue::integer(2004));
    const double before = selectivity(f, Dataset::from_raw(raw));
    std::mt19937_64 rng(5);
    std::shuffle(raw.items.begin(), raw.items.end(), rng);
    for (std::size_t i = 0; i < raw.items.size(); ++i) raw.items[i].id = static_cast<std::int64_t>(i);
    EXPECT_DOUBLE_EQ(selectivity(f, Dataset::from_raw(raw)), before);
}

TEST(Distance, Euclidean) {
    const std::vector<float> o{0, 0}, p{3, 4};
    EXPECT_DOUBLE_EQ(distance_euclidean(o, p), 5.0);
    EXPECT_DOUBLE_EQ(distance_euclidean(p, p), 0.0);
    EXPECT_THROW(distance_euclidean(o, std::vector<float>{1, 2, 3}), std::invalid_argument);
}

TEST(Distance, EuclideanMatchesCompensatedOracle) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> dims(1, 300);
    for (int t = 0; t < 100; ++t) {
        const auto d = dims(rng);
        const auto a = fixtures::random_vector(d, rng), b = fixtures::random_vector(d, rng);
        const double want = static_cast<double>(std::sqrt(compensated_l2_sqr(a, b)));
        const double got = distance_euclidean(a, b);
        EXPECT_NEAR(got, want, 1e-6 * std::max(want, 1e-300)) << "pair " << t;
        EXPECT_EQ(got, distance_euclidean(b, a));
    }
}

TEST(Distance, Cosine) {
    const std::vector<float> u{1, 2, 3}, e0{1, 0}, e1{0, 1}, z{0, 0};
    EXPECT_NEAR(distance_cosine(u, u), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(distance_cosine(e0, e1), 1.0);
    EXPECT_THROW(distance_cosine(e0, z), std::invalid_argument);
    EXPECT_THROW(distance_cosine(u, e0), std::invalid_argument);
}

TEST(Distance, UnitNormIdentityAndRanking) {
    std::mt19937_64 rng(3);
    const std::size_t d = 24;
    auto unit = [&] {
        auto v = fixtures::random_vector(d, rng);
        normalize(v);
        return v;
    };
    for (int t = 0; t < 100; ++t) {
        const auto u = unit(), v = unit();
        const double e = distance_euclidean(u, v);
        EXPECT_NEAR(e * e, 2.0 * distance_cosine(u, v), 1e-6);
    }
    const auto q = unit();
    std::vector<std::vector<float>> cands;
    for (int i = 0; i < 50; ++i) cands.push_back(unit());
    std::vector<int> by_l2(50), by_cos(50);
    std::iota(by_l2.begin(), by_l2.end(), 0);
    std::iota(by_cos.begin(), by_cos.end(), 0);
    std::sort(by_l2.begin(), by_l2.end(),
              [&](int a, int b) { return distance_euclidean(q, cands[a]) < distance_euclidean(q, cands[b]); });
    std::sort(by_cos.begin(), by_cos.end(),
              [&](int a, int b) { return distance_cosine(q, cands[a]) < distance_cosine(q, cands[b]); });
    EXPECT_EQ(by_l2, by_cos);
}

TEST(OrderedValueTest, MixedComparisonAndNormalization) {
    EXPECT_LT(OrderedValue::integer(2), OrderedValue::real(2.5));
    EXPECT_EQ(OrderedValue::integer(3), OrderedValue::real(3.0));
    EXPECT_EQ(OrderedValue::real(-0.0), OrderedValue::real(0.0));
    EXPECT_THROW(OrderedValue::real(std::nan("")), std::invalid_argument);
    EXPECT_THROW(OrderedValue::real(INFINITY), std::invalid_argument);
    EXPECT_LT(OrderedValue::unbounded_low(), OrderedValue::integer(std::numeric_limits<std::int64_t>::min()));
    EXPECT_LT(OrderedValue::real(-1e308), OrderedValue::integer(-5));
    // Large integers keep exact ordering even where doubles would collapse.
    EXPECT_LT(OrderedValue::integer((1ll << 60) + 1), OrderedValue::integer((1ll << 60) + 2));
}

TEST(ValidateDataset, WellFormed) {
    EXPECT_TRUE(validate_dataset(fixtures::random_raw(20, 5, 2)).empty());
}

TEST(ValidateDataset, ShortVectorNamesItem) {
    auto raw = fixtures::random_raw(10, 5, 2);
    raw.items[7].vector.pop_back();
    const auto v = validate_dataset(raw);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].item_id, 7);
    EXPECT_THROW(Dataset::from_raw(raw), InvalidDatasetError);
}

TEST(ValidateDataset, DuplicateIdAndGap) {
    auto raw = fixtures::random_raw(10, 5, 2);
    raw.items[4].id = 3;
    const auto v = validate_dataset(raw);
    EXPECT_GE(v.size(), 2u);  // 3 repeats and 4 is missing
    bool dup = false;
    for (const auto& x : v) dup = dup || (x.item_id == 3 && x.message.find("duplicate") != std::string::npos);
    EXPECT_TRUE(dup);
}

TEST(ValidateDataset, ReportsEveryKind) {
    auto raw = fixtures::random_raw(6, 3, 2);
    raw.items[0].vector[1] = std::nanf("");
    raw.items[1].attributes.pop_back();
    raw.items[2].attributes[0] = OrderedValue::integer(1);
    raw.items[3].attributes[2] = TokenSet{"x", "x"};
    const auto v = validate_dataset(raw);
    std::set<std::int64_t> ids;
    for (const auto& x : v) ids.insert(x.item_id);
    EXPECT_EQ(ids, (std::set<std::int64_t>{0, 1, 2, 3}));
}

TEST(DatasetTest, RoundTripsThroughColumns) {
    const auto raw = fixtures::random_raw(40, 6, 8);
    const auto ds = Dataset::from_raw(raw);
    const auto back = ds.to_raw();
    ASSERT_EQ(back.items.size(), raw.items.size());
    for (std::size_t i = 0; i < raw.items.size(); ++i) {
        EXPECT_EQ(back.items[i].vector, raw.items[i].vector);
        EXPECT_EQ(back.items[i].attributes, raw.items[i].attributes);
    }
}
