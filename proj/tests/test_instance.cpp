// Copyright 2026 The Roam Authors
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

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "roam/instance.hpp"
#include "roam/json_io.hpp"

using namespace roam;
using roam::testing::make_assortment;
using roam::testing::worked_instance;

TEST_CASE("worked instance validates without relabeling", "[instance]") {
    Instance inst = worked_instance();
    REQUIRE(inst.n == 4);
    REQUIRE(inst.revenues == std::vector<double>{0, 10, 20, 30, 100});
    for (int i = 1; i <= 4; ++i) REQUIRE(inst.original_label[static_cast<size_t>(i)] == i);
    REQUIRE(inst.past[0] == make_assortment(4, {0, 2, 3, 4}));
    REQUIRE(inst.v[1][1] == 0.3);
}

TEST_CASE("ingest relabels products into ascending revenue order", "[instance]") {
    RawInstance raw;
    raw.n = 3;
    raw.revenues = {30, 10, 20};  // original products 1,2,3
    raw.past_assortments = {{0, 1, 2, 3}};
    raw.sales = {{{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}}};
    Instance inst = validate_instance(raw);
    REQUIRE(inst.revenues == std::vector<double>{0, 10, 20, 30});
    REQUIRE(inst.original_label == std::vector<int>{0, 2, 3, 1});
    // v follows the relabeling: internal product 3 is original product 1
    REQUIRE(inst.v[0][3] == 0.25);
}

TEST_CASE("validation errors carry their codes", "[instance]") {
    RawInstance base;
    base.n = 2;
    base.revenues = {1.0, 2.0};
    base.past_assortments = {{0, 1, 2}};
    base.sales = {{{0, 0.5}, {1, 0.25}, {2, 0.25}}};

    SECTION("missing no-purchase option") {
        RawInstance raw = base;
        raw.past_assortments = {{1, 2}};
        raw.sales = {{{1, 0.5}, {2, 0.5}}};
        REQUIRE_THROWS_MATCHES(validate_instance(raw), Error, Catch::Matchers::MessageMatches(
                                                                 Catch::Matchers::ContainsSubstring("MissingNoPurchase")));
    }
    SECTION("frequency sum violation") {
        RawInstance raw = base;
        raw.sales = {{{0, 0.5}, {1, 0.25}, {2, 0.24}}};
        REQUIRE_THROWS_MATCHES(validate_instance(raw), Error, Catch::Matchers::MessageMatches(
                                                                 Catch::Matchers::ContainsSubstring("FrequencySumViolation")));
    }
    SECTION("duplicate revenue") {
        RawInstance raw = base;
        raw.revenues = {2.0, 2.0};
        REQUIRE_THROWS_AS(validate_instance(raw), Error);
    }
    SECTION("nonpositive revenue") {
        RawInstance raw = base;
        raw.revenues = {0.0, 2.0};
        REQUIRE_THROWS_AS(validate_instance(raw), Error);
    }
    SECTION("negative eta") {
        RawInstance raw = base;
        raw.eta = -0.1;
        REQUIRE_THROWS_AS(validate_instance(raw), Error);
    }
    SECTION("frequency outside the assortment") {
        RawInstance raw = base;
        raw.past_assortments = {{0, 1}};
        raw.sales = {{{0, 0.5}, {2, 0.5}}};
        REQUIRE_THROWS_AS(validate_instance(raw), Error);
    }
    SECTION("frequency out of range") {
        RawInstance raw = base;
        raw.sales = {{{0, 1.5}, {1, -0.25}, {2, -0.25}}};
        REQUIRE_THROWS_AS(validate_instance(raw), Error);
    }
}

TEST_CASE("duplicate past assortments deduplicate only when sales agree", "[instance]") {
    RawInstance raw;
    raw.n = 1;
    raw.revenues = {5.0};
    raw.past_assortments = {{0, 1}, {0, 1}};
    raw.sales = {{{0, 0.5}, {1, 0.5}}, {{0, 0.5}, {1, 0.5}}};
    Instance same = validate_instance(raw);
    REQUIRE(same.num_assortments() == 1);
    REQUIRE_FALSE(same.warnings.empty());

    raw.sales = {{{0, 0.5}, {1, 0.5}}, {{0, 0.4}, {1, 0.6}}};
    Instance conflict = validate_instance(raw);
    REQUIRE(conflict.num_assortments() == 2);
}

TEST_CASE("past revenues of the worked instance", "[instance]") {
    Instance inst = worked_instance();
    REQUIRE_THAT(past_revenue(inst, 1), Catch::Matchers::WithinAbs(25.0, 1e-12));
    REQUIRE_THAT(past_revenue(inst, 2), Catch::Matchers::WithinAbs(35.0, 1e-12));
    REQUIRE_THROWS_AS(past_revenue(inst, 3), Error);

    RawInstance raw;
    raw.n = 2;
    raw.revenues = {1.0, 2.0};
    raw.past_assortments = {{0, 1, 2}};
    raw.sales = {{{0, 1.0}}};
    REQUIRE(past_revenue(validate_instance(raw), 1) == 0.0);
}

TEST_CASE("restrict_to_offered drops never-offered products", "[instance]") {
    Instance inst = worked_instance();
    SECTION("identity when everything is offered") {
        Instance r = restrict_to_offered(inst);
        REQUIRE(r.n == inst.n);
        REQUIRE(r.revenues == inst.revenues);
    }
    SECTION("drops an unoffered product and is idempotent") {
        RawInstance raw;
        raw.n = 5;
        raw.revenues = {10, 20, 30, 100, 200};
        raw.past_assortments = {{0, 2, 3, 4}, {0, 1, 2, 4}};
        raw.sales = {{{0, 0.3}, {2, 0.3}, {3, 0.3}, {4, 0.1}}, {{0, 0.3}, {1, 0.3}, {2, 0.1}, {4, 0.3}}};
        Instance big = validate_instance(raw);
        Instance r = restrict_to_offered(big);
        REQUIRE(r.n == 4);
        REQUIRE(r.revenues == std::vector<double>{0, 10, 20, 30, 100});
        Instance r2 = restrict_to_offered(r);
        REQUIRE(r2.n == r.n);
        REQUIRE(r2.past == r.past);
    }
    SECTION("single past assortment {0,n}") {
        RawInstance raw;
        raw.n = 3;
        raw.revenues = {1, 2, 3};
        raw.past_assortments = {{0, 3}};
        raw.sales = {{{0, 0.5}, {3, 0.5}}};
        Instance r = restrict_to_offered(validate_instance(raw));
        REQUIRE(r.n == 1);
        REQUIRE(r.original_label == std::vector<int>{0, 3});
    }
}

TEST_CASE("structure classification", "[instance]") {
    SECTION("revenue-ordered complete") {
        RawInstance raw;
        raw.n = 4;
        raw.revenues = {1, 2, 3, 4};
        for (int m = 1; m <= 4; ++m) {
            std::vector<int> s = {0};
            std::map<int, double> freq;
            for (int i = m; i <= 4; ++i) s.push_back(i);
            double w = 1.0 / static_cast<double>(s.size());
            for (int i : s) freq[i] = w;
            raw.past_assortments.push_back(s);
            raw.sales.push_back(freq);
        }
        StructureTag tag = classify_structure(validate_instance(raw));
        REQUIRE(tag.kind == Structure::RevenueOrderedComplete);
        REQUIRE(tag.is_nested);
    }
    SECTION("nested chain") {
        RawInstance raw;
        raw.n = 3;
        raw.revenues = {1, 2, 3};
        raw.past_assortments = {{0, 1, 3}, {0, 3}, {0, 1, 2, 3}};
        raw.sales = {{{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}};
        StructureTag tag = classify_structure(validate_instance(raw));
        REQUIRE(tag.kind == Structure::Nested);
        REQUIRE(tag.chain_order == std::vector<int>{1, 0, 2});
    }
    SECTION("the worked instance is two-assortment, not nested") {
        StructureTag tag = classify_structure(worked_instance());
        REQUIRE(tag.kind == Structure::TwoAssortments);
        REQUIRE_FALSE(tag.is_nested);
        REQUIRE(tag.covers_all_products);
    }
}

TEST_CASE("JSON round trip is the identity on valid instances", "[instance][json]") {
    Instance inst = worked_instance(Norm::L1, 0.05);
    json j = instance_to_json(inst);
    Instance back = validate_instance(parse_raw_instance(j));
    REQUIRE(back.n == inst.n);
    REQUIRE(back.revenues == inst.revenues);
    REQUIRE(back.past == inst.past);
    REQUIRE(back.v == inst.v);
    REQUIRE(back.eta == inst.eta);
    REQUIRE(back.norm == inst.norm);
}

TEST_CASE("unknown JSON fields are rejected", "[instance][json]") {
    json j = instance_to_json(worked_instance());
    j["surprise"] = 1;
    REQUIRE_THROWS_AS(parse_raw_instance(j), Error);
}
