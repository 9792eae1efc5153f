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
#include "roam/rng.hpp"
#include "roam/tuples.hpp"

using namespace roam;
using roam::testing::make_assortment;
using roam::testing::worked_instance;

namespace {

Instance three_assortment_family() {
    // S_1 = {0,1,2}, S_2 = {0,1}, S_3 = {0,2} with placeholder data
    RawInstance raw;
    raw.n = 2;
    raw.revenues = {1.0, 2.0};
    raw.past_assortments = {{0, 1, 2}, {0, 1}, {0, 2}};
    raw.sales = {{{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}};
    return validate_instance(raw);
}

Instance reverse_revenue_ordered(int n) {
    RawInstance raw;
    raw.n = n;
    for (int i = 1; i <= n; ++i) raw.revenues.push_back(10.0 * i);
    for (int m = 1; m <= n; ++m) {
        std::vector<int> s = {0, n};
        for (int i = 1; i < m; ++i) s.push_back(i);
        std::sort(s.begin(), s.end());
        std::map<int, double> freq;
        double w = 1.0 / static_cast<double>(s.size());
        for (int i : s) freq[i] = w;
        raw.past_assortments.push_back(s);
        raw.sales.push_back(freq);
    }
    return validate_instance(raw);
}

Instance random_instance(Rng& rng, int n, int m_count, double eta, Norm norm) {
    RawInstance raw;
    raw.n = n;
    for (int i = 0; i < n; ++i) raw.revenues.push_back(1.0 + static_cast<double>(i) + rng.uniform() * 0.5);
    for (int m = 0; m < m_count; ++m) {
        std::vector<int> s = {0};
        for (int i = 1; i <= n; ++i)
            if (rng.uniform() < 0.6) s.push_back(i);
        raw.past_assortments.push_back(s);
        // data from a random 3-atom ranking model keeps eta = 0 feasible
        raw.sales.emplace_back();
    }
    RankingModel model;
    std::vector<double> w = rng.simplex(3);
    for (int a = 0; a < 3; ++a) model.atoms.push_back({Ranking(rng.permutation(n + 1)), w[static_cast<size_t>(a)]});
    // dedupe atoms (the simplex weights merge on collision)
    RankingModel clean;
    for (auto& [sigma, weight] : model.atoms) {
        bool merged = false;
        for (auto& [cs, cw] : clean.atoms)
            if (cs == sigma) {
                cw += weight;
                merged = true;
            }
        if (!merged) clean.atoms.push_back({sigma, weight});
    }
    for (size_t m = 0; m < raw.past_assortments.size(); ++m) {
        Assortment s(n);
        for (int i : raw.past_assortments[m]) s.insert(i);
        std::vector<double> d = demand(clean, s, n);
        for (int i : raw.past_assortments[m]) raw.sales[m][i] = d[static_cast<size_t>(i)];
    }
    raw.eta = eta;
    raw.norm = norm;
    return validate_instance(raw);
}

}  // namespace

TEST_CASE("figure family feasibility", "[tuples]") {
    Instance inst = three_assortment_family();
    REQUIRE(is_feasible_tuple({1, 1, 0}, inst.past, inst.n));
    REQUIRE_FALSE(is_feasible_tuple({1, 0, 0}, inst.past, inst.n));
    REQUIRE_THROWS_AS(is_feasible_tuple({2, 2, 0}, inst.past, inst.n), Error);  // 2 not in S_2

    // M = 1: every singleton tuple is feasible
    RawInstance raw;
    raw.n = 2;
    raw.revenues = {1, 2};
    raw.past_assortments = {{0, 1, 2}};
    raw.sales = {{{0, 1.0}}};
    Instance single = validate_instance(raw);
    for (int i = 0; i <= 2; ++i) REQUIRE(is_feasible_tuple({i}, single.past, single.n));
}

TEST_CASE("the five-tuple family of the three-assortment example", "[tuples]") {
    Instance inst = three_assortment_family();
    FeasibleTupleSet l = build_feasible_tuples(inst);
    std::vector<Tuple> expect = {{0, 0, 0}, {1, 1, 0}, {1, 1, 2}, {2, 0, 2}, {2, 1, 2}};
    REQUIRE(l.tuples == expect);
    REQUIRE(oracle_feasible_tuples(inst).tuples == expect);
}

TEST_CASE("worked instance tuple set via the M=2 closed form", "[tuples]") {
    Instance inst = worked_instance();
    FeasibleTupleSet fast = build_feasible_tuples(inst);
    REQUIRE(fast.size() == 10);
    TupleBuildOptions general;
    general.force_general = true;
    REQUIRE(build_feasible_tuples(inst, general).tuples == fast.tuples);
    REQUIRE(oracle_feasible_tuples(inst).tuples == fast.tuples);
    // the per-(m,i) index is consistent
    for (int m = 0; m < 2; ++m)
        for (int i = 0; i <= 4; ++i)
            for (int t : fast.index[static_cast<size_t>(m)][static_cast<size_t>(i)])
                REQUIRE(fast.tuples[static_cast<size_t>(t)][static_cast<size_t>(m)] == i);
}

TEST_CASE("nested closed form counts |L| = |B_1| prod (1+|B_m|)", "[tuples]") {
    Instance inst = reverse_revenue_ordered(3);
    FeasibleTupleSet l = build_feasible_tuples(inst);
    REQUIRE(l.size() == 8);  // 2 * 2 * 2 >= 2^{M-1}
    TupleBuildOptions general;
    general.force_general = true;
    REQUIRE(build_feasible_tuples(inst, general).tuples == l.tuples);
    REQUIRE(oracle_feasible_tuples(inst).tuples == l.tuples);
}

TEST_CASE("worked instance rho values", "[tuples]") {
    Instance inst = worked_instance();
    Assortment s = make_assortment(4, {0, 2, 4});
    REQUIRE(rho({2, 2}, s, inst) == 20.0);
    REQUIRE(rho({3, 1}, s, inst) == 0.0);
    REQUIRE(rho({3, 4}, s, inst) == 100.0);
    REQUIRE(oracle_rho({2, 2}, s, inst) == 20.0);
    REQUIRE(oracle_rho({3, 1}, s, inst) == 0.0);
    REQUIRE(oracle_rho({3, 4}, s, inst) == 100.0);
    // the M=2 case table agrees
    REQUIRE(rho_two({2, 2}, s, inst) == 20.0);
    REQUIRE(rho_two({3, 1}, s, inst) == 0.0);
    REQUIRE(rho_two({3, 4}, s, inst) == 100.0);
}

TEST_CASE("rho equals the oracle on every tuple and assortment", "[tuples][property]") {
    Rng rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform_below(3));  // n <= 4
        int m_count = 1 + static_cast<int>(rng.uniform_below(3));
        Instance inst = random_instance(rng, n, m_count, 0.0, Norm::LInf);
        FeasibleTupleSet l = build_feasible_tuples(inst);
        REQUIRE(oracle_feasible_tuples(inst).tuples == l.tuples);
        for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
            Assortment s(n);
            s.insert(0);
            for (int i = 1; i <= n; ++i)
                if ((mask >> (i - 1)) & 1) s.insert(i);
            for (const Tuple& t : l.tuples) {
                double fast = rho(t, s, inst);
                REQUIRE(fast == oracle_rho(t, s, inst));
                REQUIRE(rho_max(t, s, inst) == oracle_rho_max(t, s, inst));
            }
        }
        // The M=2 case table applies once everything is offered somewhere.
        if (inst.num_assortments() == 2) {
            Instance r = restrict_to_offered(inst);
            FeasibleTupleSet lr = build_feasible_tuples(r);
            for (uint64_t mask = 0; mask < (uint64_t{1} << r.n); ++mask) {
                Assortment s(r.n);
                s.insert(0);
                for (int i = 1; i <= r.n; ++i)
                    if ((mask >> (i - 1)) & 1) s.insert(i);
                for (const Tuple& t : lr.tuples) REQUIRE(rho_two(t, s, r) == rho(t, s, r));
            }
        }
    }
}

TEST_CASE("nested prefix recursion", "[tuples]") {
    RawInstance raw;
    raw.n = 3;
    raw.revenues = {10, 20, 30};
    raw.past_assortments = {{0, 3}, {0, 1, 3}, {0, 1, 2, 3}};
    raw.sales = {{{0, 0.5}, {3, 0.5}}, {{0, 0.5}, {1, 0.25}, {3, 0.25}}, {{0, 0.5}, {1, 0.25}, {2, 0.25}}};
    Instance inst = validate_instance(raw);

    Assortment s = make_assortment(3, {0, 2, 3});
    REQUIRE(rho_nested_prefix({3, 3, 3}, s, inst) == std::vector<double>{30, 30, 30});
    REQUIRE(rho_nested_prefix({0, 1, 1}, s, inst) == std::vector<double>{0, 0, 0});
    Assortment everything = inst.full_assortment();
    REQUIRE(rho_nested_prefix({3, 1, 2}, everything, inst) == std::vector<double>{30, 10, 20});

    // the last entry matches graph-based rho whenever the union covers all
    FeasibleTupleSet l = build_feasible_tuples(inst);
    for (uint64_t mask = 0; mask < 8; ++mask) {
        Assortment a(3);
        a.insert(0);
        for (int i = 1; i <= 3; ++i)
            if ((mask >> (i - 1)) & 1) a.insert(i);
        for (const Tuple& t : l.tuples) {
            std::vector<double> prefix = rho_nested_prefix(t, a, inst);
            REQUIRE(prefix.back() == rho(t, a, inst));
            // every prefix entry matches rho on the truncated assortment
            for (int m = 0; m < 3; ++m)
                REQUIRE(prefix[static_cast<size_t>(m)] ==
                        rho(t, a.set_intersection(inst.past[static_cast<size_t>(m)]), inst));
        }
    }
    REQUIRE_THROWS_AS(rho_nested_prefix({3, 3, 3}, s, worked_instance()), Error);
}

TEST_CASE("rho is monotone along dominance-closure growth", "[tuples][property]") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 3;
        Instance inst = random_instance(rng, n, 2, 0.0, Norm::LInf);
        auto masks = inst.offering_masks();
        FeasibleTupleSet l = build_feasible_tuples(inst);
        for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
            Assortment s(n);
            s.insert(0);
            for (int i = 1; i <= n; ++i)
                if ((mask >> (i - 1)) & 1) s.insert(i);
            // one closure step: add every product forced by the rule
            Assortment grown = s;
            for (int i = 0; i <= n; ++i) {
                if (grown.contains(i)) continue;
                for (int istar : s.members()) {
                    bool cheaper = inst.revenues[static_cast<size_t>(istar)] < inst.revenues[static_cast<size_t>(i)];
                    bool nested = (masks[static_cast<size_t>(istar)] & ~masks[static_cast<size_t>(i)]) == 0;
                    if (cheaper && nested) {
                        grown.insert(i);
                        break;
                    }
                }
            }
            for (const Tuple& t : l.tuples) REQUIRE(rho(t, s, inst) <= rho(t, grown, inst) + 1e-12);
        }
    }
}

TEST_CASE("only selected vertices can be reached", "[tuples][property]") {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        Instance inst = random_instance(rng, 3, 2, 0.0, Norm::LInf);
        FeasibleTupleSet l = build_feasible_tuples(inst);
        for (const Tuple& t : l.tuples) {
            TupleGraph g(t, inst.past, inst.n);
            for (int v = 0; v <= inst.n; ++v)
                for (int target : g.out_neighbors(v)) {
                    bool selected = false;
                    for (int im : t) selected |= (im == target);
                    REQUIRE(selected);
                }
        }
    }
}

TEST_CASE("tuple set size respects the product bound", "[tuples][property]") {
    Rng rng(51);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform_below(3));
        int m_count = 1 + static_cast<int>(rng.uniform_below(3));
        Instance inst = random_instance(rng, n, m_count, 0.0, Norm::LInf);
        long long cap = 1;
        for (const auto& s : inst.past) cap *= s.size();
        REQUIRE(build_feasible_tuples(inst).size() <= cap);
    }
}

TEST_CASE("explosion guard fires", "[tuples]") {
    Instance inst = worked_instance();
    TupleBuildOptions opts;
    opts.explosion_cap = 3;
    opts.force_general = true;
    REQUIRE_THROWS_AS(build_feasible_tuples(inst, opts), Error);
}
