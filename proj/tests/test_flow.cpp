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

#include "roam/flow.hpp"
#include "roam/rng.hpp"

using namespace roam;

TEST_CASE("two-node network", "[flow]") {
    FlowNetwork net;
    int a = net.add_node(1.0);
    int b = net.add_node(-1.0);
    net.add_arc(a, b, 5.0);
    FlowResult r = solve_min_cost_flow(net);
    REQUIRE(r.status == lp::Status::Optimal);
    REQUIRE_THAT(r.cost, Catch::Matchers::WithinAbs(5.0, 1e-12));
    REQUIRE_THAT(r.flow[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("infeasible when a demand cannot be reached", "[flow]") {
    FlowNetwork net;
    net.add_node(1.0);
    net.add_node(-1.0);
    // no arcs
    FlowResult r = solve_min_cost_flow(net);
    REQUIRE(r.status == lp::Status::Infeasible);
}

TEST_CASE("negative arc costs are handled", "[flow]") {
    FlowNetwork net;
    int a = net.add_node(1.0);
    int b = net.add_node(0.0);
    int c = net.add_node(-1.0);
    net.add_arc(a, c, 1.0);
    net.add_arc(a, b, 2.0);
    net.add_arc(b, c, -4.0);
    FlowResult r = solve_min_cost_flow(net);
    REQUIRE(r.status == lp::Status::Optimal);
    REQUIRE_THAT(r.cost, Catch::Matchers::WithinAbs(-2.0, 1e-10));
}

TEST_CASE("flow matches the LP on random networks", "[flow][property]") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 3 + static_cast<int>(rng.uniform_below(8));
        FlowNetwork net;
        std::vector<double> supply(static_cast<size_t>(n), 0.0);
        double total = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            supply[static_cast<size_t>(i)] = rng.uniform() * 2.0 - 0.7;
            total += supply[static_cast<size_t>(i)];
        }
        supply[static_cast<size_t>(n - 1)] = -total;
        for (double s : supply) net.add_node(s);
        // Acyclic topology (the layered networks this backs are DAGs).
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform() < 0.55) net.add_arc(i, j, rng.uniform() * 4.0 - 1.0);

        FlowResult fr = solve_min_cost_flow(net);
        lp::Solution ls = lp::solve(flow_to_lp(net));
        if (fr.status == lp::Status::Infeasible) {
            REQUIRE(ls.status == lp::Status::Infeasible);
            continue;
        }
        REQUIRE(ls.status == lp::Status::Optimal);
        REQUIRE_THAT(fr.cost, Catch::Matchers::WithinAbs(ls.value, 1e-9));
    }
}
