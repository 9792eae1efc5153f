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
#include "roam/oracle.hpp"
#include "roam/robust.hpp"
#include "roam/rng.hpp"

using namespace roam;
using roam::testing::make_assortment;
using roam::testing::worked_instance;

namespace {

Instance model_generated_instance(Rng& rng, int n, int m_count, double eta, Norm norm, int atoms = 4) {
    RawInstance raw;
    raw.n = n;
    for (int i = 0; i < n; ++i) raw.revenues.push_back(1.0 + i + rng.uniform() * 0.5);
    RankingModel model;
    std::vector<double> w = rng.simplex(atoms);
    for (int a = 0; a < atoms; ++a) {
        Ranking sigma(rng.permutation(n + 1));
        bool merged = false;
        for (auto& [cs, cw] : model.atoms)
            if (cs == sigma) {
                cw += w[static_cast<size_t>(a)];
                merged = true;
            }
        if (!merged) model.atoms.push_back({sigma, w[static_cast<size_t>(a)]});
    }
    for (int m = 0; m < m_count; ++m) {
        std::vector<int> members = {0};
        for (int i = 1; i <= n; ++i)
            if (rng.uniform() < 0.65) members.push_back(i);
        raw.past_assortments.push_back(members);
        Assortment s(n);
        for (int i : members) s.insert(i);
        std::vector<double> d = demand(model, s, n);
        std::map<int, double> freq;
        for (int i : members) freq[i] = std::min(1.0, d[static_cast<size_t>(i)]);
        raw.sales.push_back(freq);
    }
    raw.eta = eta;
    raw.norm = norm;
    return validate_instance(raw);
}

}  // namespace

TEST_CASE("worked instance worst-case table", "[robust]") {
    Instance inst = worked_instance();
    struct GoldenRow {
        std::initializer_list<int> s;
        double value;
    };
    const GoldenRow table[] = {
        {{0, 4}, 30},          {{0, 1, 4}, 33},    {{0, 2, 4}, 36},    {{0, 3, 4}, 19},
        {{0, 1, 2, 4}, 35},    {{0, 1, 3, 4}, 12}, {{0, 2, 3, 4}, 25}, {{0, 1, 2, 3, 4}, 14},
    };
    for (const auto& row : table) {
        Assortment s = make_assortment(4, row.s);
        INFO("S = " << s.to_string());
        REQUIRE_THAT(worst_case_revenue(inst, s).value, Catch::Matchers::WithinAbs(row.value, 1e-6));
        REQUIRE_THAT(oracle_worst_case(inst, s), Catch::Matchers::WithinAbs(row.value, 1e-6));
        REQUIRE_THAT(worst_case_two_flow(inst, s).value, Catch::Matchers::WithinAbs(row.value, 1e-7));
    }
}

TEST_CASE("past assortments are pinned at eta = 0", "[robust]") {
    Instance inst = worked_instance();
    RobustValue wc = worst_case_revenue(inst, inst.past[1]);
    RobustValue bc = best_case_revenue(inst, inst.past[1]);
    REQUIRE_THAT(wc.value, Catch::Matchers::WithinAbs(35.0, 1e-7));
    REQUIRE_THAT(bc.value, Catch::Matchers::WithinAbs(35.0, 1e-7));
    REQUIRE_THAT(worst_case_revenue(inst, inst.past[0]).value, Catch::Matchers::WithinAbs(25.0, 1e-7));
}

TEST_CASE("best case of {0,4} reaches at least the hat model", "[robust]") {
    Instance inst = worked_instance();
    Assortment s04 = make_assortment(4, {0, 4});
    RobustValue bc = best_case_revenue(inst, s04);
    REQUIRE(bc.value >= 70.0 - 1e-7);
    REQUIRE(bc.value <= 100.0 + 1e-9);
    REQUIRE_THAT(bc.value, Catch::Matchers::WithinAbs(oracle_best_case(inst, s04), 1e-6));
    REQUIRE(best_case_revenue(inst, make_assortment(4, {0})).value == 0.0);
}

TEST_CASE("witness converts to a consistent ranking model attaining the value", "[robust]") {
    Instance inst = worked_instance();
    for (auto items : {std::initializer_list<int>{0, 2, 4}, {0, 3, 4}, {0, 1, 2, 3, 4}}) {
        Assortment s = make_assortment(4, items);
        RobustValue rv = worst_case_revenue(inst, s);
        RankingModel witness = witness_ranking_model(inst, s, rv);
        REQUIRE(consistency_residual(witness, inst).norm_value <= inst.eta + 1e-6);
        REQUIRE_THAT(expected_revenue(witness, inst.revenues, s), Catch::Matchers::WithinAbs(rv.value, 1e-6));
    }
}

TEST_CASE("min consistency radius", "[robust]") {
    REQUIRE_THAT(min_consistency_radius(worked_instance()), Catch::Matchers::WithinAbs(0.0, 1e-9));

    // contradictory data on S_1 = S_2 = {0,n}
    RawInstance raw;
    raw.n = 2;
    raw.revenues = {1, 2};
    raw.past_assortments = {{0, 2}, {0, 2}};
    raw.sales = {{{0, 1.0}, {2, 0.0}}, {{0, 0.0}, {2, 1.0}}};
    Instance inst = validate_instance(raw);
    double radius = min_consistency_radius(inst);
    REQUIRE(radius > 0.1);
    REQUIRE_THAT(radius, Catch::Matchers::WithinAbs(oracle_min_radius_bisection(inst), 1e-6));

    // at eta below the radius the worst case must report inconsistency
    REQUIRE_THROWS_AS(worst_case_revenue(inst, inst.full_assortment()), Error);
    Instance relaxed = inst;
    relaxed.eta = radius + 1e-6;
    REQUIRE_NOTHROW(worst_case_revenue(relaxed, relaxed.full_assortment()));
}

TEST_CASE("fast evaluations agree with the full-ranking oracle", "[robust][property]") {
    Rng rng(20260810);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform_below(3));  // n <= 4
        int m_count = 1 + static_cast<int>(rng.uniform_below(3));
        double eta = rng.uniform() < 0.5 ? 0.0 : 0.05;
        Norm norm = rng.uniform() < 0.5 ? Norm::L1 : Norm::LInf;
        Instance inst = model_generated_instance(rng, n, m_count, eta, norm);
        for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
            Assortment s(n);
            s.insert(0);
            for (int i = 1; i <= n; ++i)
                if ((mask >> (i - 1)) & 1) s.insert(i);
            double wc = worst_case_revenue(inst, s).value;
            double bc = best_case_revenue(inst, s).value;
            REQUIRE_THAT(wc, Catch::Matchers::WithinAbs(oracle_worst_case(inst, s), 1e-6));
            REQUIRE_THAT(bc, Catch::Matchers::WithinAbs(oracle_best_case(inst, s), 1e-6));
            REQUIRE(wc <= bc + 1e-9);
            REQUIRE(wc >= -1e-9);
            REQUIRE(bc <= inst.top_revenue() + 1e-9);
            ++checked;
        }
    }
    REQUIRE(checked > 100);
}

TEST_CASE("two-assortment flow route equals the LP route", "[robust][property]") {
    Rng rng(31337);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 3 + static_cast<int>(rng.uniform_below(8));
        Instance inst = model_generated_instance(rng, n, 2, 0.0, Norm::LInf, 5);
        if (inst.num_assortments() != 2) continue;
        Instance r = restrict_to_offered(inst);
        for (int k = 0; k < 6; ++k) {
            Assortment s(r.n);
            s.insert(0);
            for (int i = 1; i <= r.n; ++i)
                if (rng.uniform() < 0.5) s.insert(i);
            double via_flow = worst_case_two_flow(r, s).value;
            double via_lp = worst_case_revenue(r, s).value;
            REQUIRE_THAT(via_flow, Catch::Matchers::WithinAbs(via_lp, 1e-7));
        }
    }
}

TEST_CASE("figure-topology two-assortment family", "[robust]") {
    // S_1 = {0,1,2,5}, S_2 = {0,3,4,5}
    Rng rng(5);
    Instance inst = [&] {
        RawInstance raw;
        raw.n = 5;
        raw.revenues = {1, 2, 3, 4, 5};
        raw.past_assortments = {{0, 1, 2, 5}, {0, 3, 4, 5}};
        RankingModel model;
        std::vector<double> w = rng.simplex(4);
        for (int a = 0; a < 4; ++a) model.atoms.push_back({Ranking(rng.permutation(6)), w[static_cast<size_t>(a)]});
        for (auto& members : raw.past_assortments) {
            Assortment s(5);
            for (int i : members) s.insert(i);
            std::vector<double> d = demand(model, s, 5);
            std::map<int, double> freq;
            for (int i : members) freq[i] = d[static_cast<size_t>(i)];
            raw.sales.push_back(freq);
        }
        return validate_instance(raw);
    }();
    for (uint64_t mask = 0; mask < 32; ++mask) {
        Assortment s(5);
        s.insert(0);
        for (int i = 1; i <= 5; ++i)
            if ((mask >> (i - 1)) & 1) s.insert(i);
        REQUIRE_THAT(worst_case_two_flow(inst, s).value,
                     Catch::Matchers::WithinAbs(worst_case_revenue(inst, s).value, 1e-7));
    }
}

TEST_CASE("worst case shrinks and best case grows with eta", "[robust][property]") {
    Rng rng(808);
    Instance base = model_generated_instance(rng, 4, 2, 0.0, Norm::LInf);
    Assortment s = make_assortment(4, {0, 2, 4});
    double prev_wc = worst_case_revenue(base, s).value;
    double prev_bc = best_case_revenue(base, s).value;
    for (double eta : {0.02, 0.05, 0.1, 0.3}) {
        Instance inst = base;
        inst.eta = eta;
        double wc = worst_case_revenue(inst, s).value;
        double bc = best_case_revenue(inst, s).value;
        REQUIRE(wc <= prev_wc + 1e-8);
        REQUIRE(bc >= prev_bc - 1e-8);
        prev_wc = wc;
        prev_bc = bc;
    }
}

TEST_CASE("two-flow preconditions", "[robust]") {
    Instance inst = worked_instance(Norm::LInf, 0.1);
    REQUIRE_THROWS_AS(worst_case_two_flow(inst, make_assortment(4, {0, 4})), Error);  // eta > 0
    RawInstance raw;
    raw.n = 1;
    raw.revenues = {1};
    raw.past_assortments = {{0, 1}};
    raw.sales = {{{0, 0.5}, {1, 0.5}}};
    REQUIRE_THROWS_AS(worst_case_two_flow(validate_instance(raw), make_assortment(1, {0})), Error);  // M = 1
}
