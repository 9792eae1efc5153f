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
#include "roam/json_io.hpp"
#include "roam/ranking.hpp"
#include "roam/rng.hpp"

using namespace roam;
using roam::testing::make_assortment;
using roam::testing::ranking_prefix;
using roam::testing::worked_instance;

TEST_CASE("top choice follows the rank array", "[choice]") {
    // sigma^2 of the worked example: 1 > 2 > 4 > 0 (> 3)
    Ranking sigma2 = ranking_prefix(4, {1, 2, 4, 0});
    REQUIRE(sigma2.rank_of(1) == 0);
    REQUIRE(sigma2.rank_of(2) == 1);
    REQUIRE(sigma2.rank_of(4) == 2);
    REQUIRE(sigma2.rank_of(0) == 3);
    REQUIRE(top_choice(sigma2, make_assortment(4, {0, 2, 3, 4})) == 2);
    REQUIRE(top_choice(sigma2, make_assortment(4, {0})) == 0);

    Ranking identity = ranking_prefix(4, {});
    REQUIRE(top_choice(identity, make_assortment(4, {0, 2, 4})) == 0);
}

TEST_CASE("demand of the worked models matches the data", "[choice]") {
    Instance inst = worked_instance();
    RankingModel hat = roam::testing::worked_model_hat();
    std::vector<double> d1 = demand(hat, inst.past[0], inst.n);
    REQUIRE_THAT(d1[0], Catch::Matchers::WithinAbs(0.3, 1e-12));
    REQUIRE_THAT(d1[2], Catch::Matchers::WithinAbs(0.3, 1e-12));
    REQUIRE_THAT(d1[3], Catch::Matchers::WithinAbs(0.3, 1e-12));
    REQUIRE_THAT(d1[4], Catch::Matchers::WithinAbs(0.1, 1e-12));
    std::vector<double> d2 = demand(hat, inst.past[1], inst.n);
    REQUIRE_THAT(d2[0], Catch::Matchers::WithinAbs(0.3, 1e-12));
    REQUIRE_THAT(d2[1], Catch::Matchers::WithinAbs(0.3, 1e-12));
    REQUIRE_THAT(d2[2], Catch::Matchers::WithinAbs(0.1, 1e-12));
    REQUIRE_THAT(d2[4], Catch::Matchers::WithinAbs(0.3, 1e-12));

    RankingModel single;
    single.atoms = {{ranking_prefix(4, {}), 1.0}};
    std::vector<double> d = demand(single, make_assortment(4, {0}), 4);
    REQUIRE(d[0] == 1.0);
}

TEST_CASE("expected revenue of {0,4} under the two worked models", "[choice]") {
    Instance inst = worked_instance();
    Assortment s04 = make_assortment(4, {0, 4});
    REQUIRE_THAT(expected_revenue(roam::testing::worked_model_hat(), inst.revenues, s04),
                 Catch::Matchers::WithinAbs(70.0, 1e-12));
    REQUIRE_THAT(expected_revenue(roam::testing::worked_model_bar(), inst.revenues, s04),
                 Catch::Matchers::WithinAbs(30.0, 1e-12));
    REQUIRE(expected_revenue(roam::testing::worked_model_hat(), inst.revenues, make_assortment(4, {0})) == 0.0);
}

TEST_CASE("consistency residuals", "[choice]") {
    Instance inst = worked_instance();
    REQUIRE_THAT(consistency_residual(roam::testing::worked_model_hat(), inst).norm_value,
                 Catch::Matchers::WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(consistency_residual(roam::testing::worked_model_bar(), inst).norm_value,
                 Catch::Matchers::WithinAbs(0.0, 1e-12));

    RankingModel identity;
    identity.atoms = {{ranking_prefix(4, {}), 1.0}};
    ConsistencyResidual res = consistency_residual(identity, inst);
    REQUIRE_THAT(res.norm_value, Catch::Matchers::WithinAbs(0.7, 1e-12));  // D_0 = 1 vs v_{1,0} = 0.3
    REQUIRE_FALSE(res.within(0.0));
    REQUIRE(res.within(0.7));
}

TEST_CASE("ranking enumeration counts and guard", "[choice]") {
    int count = 0;
    enumerate_rankings(1, [&](const Ranking&) { ++count; });
    REQUIRE(count == 2);
    count = 0;
    enumerate_rankings(3, [&](const Ranking&) { ++count; });
    REQUIRE(count == 24);
    count = 0;
    std::vector<Ranking> seen;
    enumerate_rankings(4, [&](const Ranking& r) {
        ++count;
        if (!seen.empty()) REQUIRE(seen.back() < r);  // strict lexicographic order
        if (seen.size() < 3 || count > 118) seen.push_back(r);
    });
    REQUIRE(count == 120);
    REQUIRE_THROWS_AS(enumerate_rankings(9, [](const Ranking&) {}), Error);
}

TEST_CASE("demand is a probability vector supported on S", "[choice][property]") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform_below(4));
        RankingModel model;
        int atoms = 1 + static_cast<int>(rng.uniform_below(4));
        std::vector<double> w = rng.simplex(atoms);
        for (int a = 0; a < atoms; ++a) {
            model.atoms.push_back({Ranking(rng.permutation(n + 1)), w[static_cast<size_t>(a)]});
        }
        Assortment s(n);
        s.insert(0);
        for (int i = 1; i <= n; ++i)
            if (rng.uniform() < 0.5) s.insert(i);
        std::vector<double> d = demand(model, s, n);
        double total = 0.0;
        for (int i = 0; i <= n; ++i) {
            total += d[static_cast<size_t>(i)];
            if (!s.contains(i)) REQUIRE(d[static_cast<size_t>(i)] == 0.0);
            REQUIRE(d[static_cast<size_t>(i)] >= 0.0);
        }
        REQUIRE_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("demand is linear in atom weights", "[choice][property]") {
    // convex combination of two models = convex combination of demands
    Instance inst = worked_instance();
    RankingModel a = roam::testing::worked_model_hat();
    RankingModel b = roam::testing::worked_model_bar();
    Assortment s = make_assortment(4, {0, 1, 4});
    double t = 0.3;
    RankingModel mix;
    for (auto [sigma, w] : a.atoms) mix.atoms.push_back({sigma, w * t});
    for (auto [sigma, w] : b.atoms) {
        bool merged = false;
        for (auto& [ms, mw] : mix.atoms)
            if (ms == sigma) {
                mw += w * (1 - t);
                merged = true;
                break;
            }
        if (!merged) mix.atoms.push_back({sigma, w * (1 - t)});
    }
    std::vector<double> da = demand(a, s, 4), db = demand(b, s, 4), dm = demand(mix, s, 4);
    for (int i = 0; i <= 4; ++i)
        REQUIRE_THAT(dm[static_cast<size_t>(i)],
                     Catch::Matchers::WithinAbs(t * da[static_cast<size_t>(i)] + (1 - t) * db[static_cast<size_t>(i)], 1e-12));
}

TEST_CASE("adding a product only reroutes to it", "[choice][property]") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 3;
        Ranking sigma(rng.permutation(n + 1));
        Assortment s(n);
        s.insert(0);
        for (int i = 1; i <= n; ++i)
            if (rng.uniform() < 0.4) s.insert(i);
        int top = top_choice(sigma, s);
        REQUIRE(s.contains(top));
        for (int j = 1; j <= n; ++j) {
            if (s.contains(j)) continue;
            Assortment grown = s;
            grown.insert(j);
            int t2 = top_choice(sigma, grown);
            REQUIRE((t2 == top || t2 == j));
        }
    }
}

TEST_CASE("ranking model JSON round trip", "[choice][json]") {
    RankingModel m = roam::testing::worked_model_hat();
    json j = ranking_model_to_json(m);
    RankingModel back = parse_ranking_model(j, 4);
    REQUIRE(back.atoms.size() == m.atoms.size());
    for (size_t k = 0; k < m.atoms.size(); ++k) {
        REQUIRE(back.atoms[k].first == m.atoms[k].first);
        REQUIRE(back.atoms[k].second == m.atoms[k].second);
    }
}
