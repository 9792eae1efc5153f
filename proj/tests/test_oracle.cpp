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
#include "roam/candidates.hpp"
#include "roam/oracle.hpp"
#include "roam/rng.hpp"

using namespace roam;
using roam::testing::make_assortment;
using roam::testing::worked_instance;

namespace {

Instance random_consistent(Rng& rng, int n, int m_count, double eta, Norm norm) {
    RawInstance raw;
    raw.n = n;
    for (int i = 0; i < n; ++i) raw.revenues.push_back(1.0 + i + rng.uniform() * 0.5);
    RankingModel model;
    std::vector<double> w = rng.simplex(3);
    for (int a = 0; a < 3; ++a) {
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
            if (rng.uniform() < 0.6) members.push_back(i);
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

TEST_CASE("oracle sizes on small fixtures", "[oracle]") {
    // M = 1 single assortment {0,1}: two singleton tuples
    RawInstance raw;
    raw.n = 1;
    raw.revenues = {5};
    raw.past_assortments = {{0, 1}};
    raw.sales = {{{0, 0.4}, {1, 0.6}}};
    Instance single = validate_instance(raw);
    REQUIRE(oracle_feasible_tuples(single).tuples == std::vector<Tuple>{{0}, {1}});
    REQUIRE(oracle_rho({0}, make_assortment(1, {0}), single) == 0.0);

    Instance e = worked_instance();
    REQUIRE(oracle_feasible_tuples(e).size() == 10);
}

TEST_CASE("oracle RO on the worked instance is unique", "[oracle]") {
    Instance inst = worked_instance();
    auto [winners, value] = oracle_ro(inst);
    REQUIRE(winners.size() == 1);
    REQUIRE(winners[0] == make_assortment(4, {0, 2, 4}));
    REQUIRE_THAT(value, Catch::Matchers::WithinAbs(36.0, 1e-6));
}

TEST_CASE("degenerate all-no-purchase data pins the value at zero", "[oracle]") {
    RawInstance raw;
    raw.n = 2;
    raw.revenues = {1, 2};
    raw.past_assortments = {{0, 1, 2}};
    raw.sales = {{{0, 1.0}, {1, 0.0}, {2, 0.0}}};
    Instance inst = validate_instance(raw);
    auto [winners, value] = oracle_ro(inst);
    REQUIRE_THAT(value, Catch::Matchers::WithinAbs(0.0, 1e-9));
}

TEST_CASE("an RO optimum always exists inside the candidate collection", "[oracle][property]") {
    Rng rng(20260810);
    int trials_done = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform_below(4));  // n <= 5
        int m_count = 1 + static_cast<int>(rng.uniform_below(3));
        double eta = trial % 2 ? 0.05 : 0.0;
        Norm norm = trial % 4 < 2 ? Norm::LInf : Norm::L1;
        Instance inst = random_consistent(rng, n, m_count, eta, norm);
        auto [winners, value] = oracle_ro(inst);
        Instance r = restrict_to_offered(inst);
        CandidateSet cands = enumerate_candidates(r);
        // lift candidates back into the full universe before comparing
        bool intersects = false;
        for (const auto& c : cands.assortments) {
            Assortment lifted(inst.n);
            for (int i : c.members()) lifted.insert(r.original_label[static_cast<size_t>(i)]);
            // a candidate of the restricted instance is optimal iff its
            // worst case matches the oracle optimum
            if (std::abs(oracle_worst_case(inst, lifted) - value) <= 1e-6) intersects = true;
        }
        REQUIRE(intersects);
        ++trials_done;
    }
    REQUIRE(trials_done == 60);
}

TEST_CASE("the RO value ignores never-offered products", "[oracle]") {
    Rng rng(1618);
    Instance inst = random_consistent(rng, 3, 2, 0.0, Norm::LInf);
    auto [w1, v1] = oracle_ro(inst);

    // append a never-offered expensive product
    RawInstance raw;
    raw.n = 4;
    for (int i = 1; i <= 3; ++i) raw.revenues.push_back(inst.revenues[static_cast<size_t>(i)]);
    raw.revenues.push_back(inst.revenues[3] + 5.0);
    for (int m = 0; m < inst.num_assortments(); ++m) {
        raw.past_assortments.push_back(inst.past[static_cast<size_t>(m)].members());
        std::map<int, double> freq;
        for (int i : inst.past[static_cast<size_t>(m)].members())
            freq[i] = inst.v[static_cast<size_t>(m)][static_cast<size_t>(i)];
        raw.sales.push_back(freq);
    }
    Instance bigger = validate_instance(raw);
    auto [w2, v2] = oracle_ro(bigger);
    REQUIRE_THAT(v2, Catch::Matchers::WithinAbs(v1, 1e-7));
}

TEST_CASE("oracle guards fire on oversized inputs", "[oracle]") {
    Rng rng(8);
    Instance inst = random_consistent(rng, 6, 1, 0.0, Norm::LInf);
    REQUIRE_THROWS_AS(oracle_worst_case(inst, inst.full_assortment()), Error);
    REQUIRE_THROWS_AS(oracle_ro(inst), Error);
    REQUIRE_NOTHROW(oracle_feasible_tuples(inst));
}
