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

#ifndef ROAM_FLOW_HPP
#define ROAM_FLOW_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "roam/common.hpp"
#include "roam/lp.hpp"

namespace roam {

/// Uncapacitated minimum-cost flow instance: node balances (positive =
/// supply, negative = demand) and directed arcs with real costs.
struct FlowNetwork {
    int num_nodes = 0;
    std::vector<double> balance;  // size num_nodes, sums to ~0
    struct Arc {
        int from = 0, to = 0;
        double cost = 0.0;
    };
    std::vector<Arc> arcs;

    int add_node(double b) {
        balance.push_back(b);
        return num_nodes++;
    }
    int add_arc(int from, int to, double cost) {
        arcs.push_back({from, to, cost});
        return static_cast<int>(arcs.size()) - 1;
    }
};

struct FlowResult {
    lp::Status status = lp::Status::Infeasible;
    double cost = 0.0;
    std::vector<double> flow;  // per arc
};

/// Successive shortest paths with potentials (Bellman-Ford bootstrap for the
/// negative costs, Dijkstra afterwards). Arcs are uncapacitated, so each
/// augmentation exhausts a supply or a demand node.
inline FlowResult solve_min_cost_flow(const FlowNetwork& net) {
    const double eps = 1e-12;
    double total_supply = 0.0, imbalance = 0.0;
    for (double b : net.balance) {
        imbalance += b;
        if (b > 0) total_supply += b;
    }
    if (std::abs(imbalance) > kSumTol) fail(ErrorCode::BadInput, "unbalanced flow network");

    // Internal graph with a supersource and supersink.
    const int n = net.num_nodes;
    const int src = n, dst = n + 1, N = n + 2;
    struct IArc {
        int to;
        double cap, cost;
        int rev;
    };
    std::vector<std::vector<IArc>> g(static_cast<size_t>(N));
    auto add = [&](int a, int b, double cap, double cost) {
        g[static_cast<size_t>(a)].push_back({b, cap, cost, static_cast<int>(g[static_cast<size_t>(b)].size())});
        g[static_cast<size_t>(b)].push_back({a, 0.0, -cost, static_cast<int>(g[static_cast<size_t>(a)].size()) - 1});
    };
    std::vector<std::pair<int, int>> arc_slot;  // (node, offset) of each original arc
    for (const auto& arc : net.arcs) {
        arc_slot.push_back({arc.from, static_cast<int>(g[static_cast<size_t>(arc.from)].size())});
        add(arc.from, arc.to, total_supply + 1.0, arc.cost);
    }
    for (int i = 0; i < n; ++i) {
        if (net.balance[static_cast<size_t>(i)] > eps) add(src, i, net.balance[static_cast<size_t>(i)], 0.0);
        else if (net.balance[static_cast<size_t>(i)] < -eps) add(i, dst, -net.balance[static_cast<size_t>(i)], 0.0);
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> pot(static_cast<size_t>(N), 0.0);
    // Bellman-Ford once to absorb negative arc costs into the potentials.
    {
        std::vector<double> dist(static_cast<size_t>(N), inf);
        dist[static_cast<size_t>(src)] = 0.0;
        bool changed = true;
        for (int pass = 0; pass <= N && changed; ++pass) {
            changed = false;
            for (int u = 0; u < N; ++u) {
                if (dist[static_cast<size_t>(u)] == inf) continue;
                for (const auto& a : g[static_cast<size_t>(u)]) {
                    if (a.cap <= eps) continue;
                    double nd = dist[static_cast<size_t>(u)] + a.cost;
                    if (nd < dist[static_cast<size_t>(a.to)] - 1e-15) {
                        dist[static_cast<size_t>(a.to)] = nd;
                        changed = true;
                    }
                }
            }
        }
        if (changed) fail(ErrorCode::BadInput, "negative-cost cycle in flow network");
        for (int u = 0; u < N; ++u)
            if (dist[static_cast<size_t>(u)] < inf) pot[static_cast<size_t>(u)] = dist[static_cast<size_t>(u)];
    }

    double pushed = 0.0;
    std::vector<double> dist(static_cast<size_t>(N));
    std::vector<int> prev_node(static_cast<size_t>(N)), prev_arc(static_cast<size_t>(N));
    while (total_supply - pushed > 1e-11) {
        dist.assign(static_cast<size_t>(N), inf);
        dist[static_cast<size_t>(src)] = 0.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        heap.push({0.0, src});
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[static_cast<size_t>(u)] + 1e-15) continue;
            for (int k = 0; k < static_cast<int>(g[static_cast<size_t>(u)].size()); ++k) {
                const auto& a = g[static_cast<size_t>(u)][static_cast<size_t>(k)];
                if (a.cap <= eps) continue;
                double rc = a.cost + pot[static_cast<size_t>(u)] - pot[static_cast<size_t>(a.to)];
                if (rc < 0) rc = 0;  // guard tiny negative drift
                double nd = d + rc;
                if (nd < dist[static_cast<size_t>(a.to)] - 1e-15) {
                    dist[static_cast<size_t>(a.to)] = nd;
                    prev_node[static_cast<size_t>(a.to)] = u;
                    prev_arc[static_cast<size_t>(a.to)] = k;
                    heap.push({nd, a.to});
                }
            }
        }
        if (dist[static_cast<size_t>(dst)] == inf) {
            FlowResult r;
            r.status = lp::Status::Infeasible;
            return r;
        }
        for (int u = 0; u < N; ++u)
            if (dist[static_cast<size_t>(u)] < inf) pot[static_cast<size_t>(u)] += dist[static_cast<size_t>(u)];
        double amount = total_supply - pushed;
        for (int v = dst; v != src; v = prev_node[static_cast<size_t>(v)])
            amount = std::min(amount, g[static_cast<size_t>(prev_node[static_cast<size_t>(v)])]
                                          [static_cast<size_t>(prev_arc[static_cast<size_t>(v)])].cap);
        for (int v = dst; v != src; v = prev_node[static_cast<size_t>(v)]) {
            auto& a = g[static_cast<size_t>(prev_node[static_cast<size_t>(v)])][static_cast<size_t>(prev_arc[static_cast<size_t>(v)])];
            a.cap -= amount;
            g[static_cast<size_t>(v)][static_cast<size_t>(a.rev)].cap += amount;
        }
        pushed += amount;
    }

    FlowResult r;
    r.status = lp::Status::Optimal;
    r.flow.assign(net.arcs.size(), 0.0);
    for (size_t e = 0; e < net.arcs.size(); ++e) {
        auto [node, off] = arc_slot[e];
        const auto& fwd = g[static_cast<size_t>(node)][static_cast<size_t>(off)];
        double f = g[static_cast<size_t>(fwd.to)][static_cast<size_t>(fwd.rev)].cap;
        r.flow[e] = f;
        r.cost += f * net.arcs[e].cost;
    }
    return r;
}

/// The same flow problem as an explicit LP (used for cross-validation).
inline lp::Model flow_to_lp(const FlowNetwork& net) {
    lp::Model m;
    for (const auto& arc : net.arcs) m.add_var(0.0, lp::kInf, arc.cost);
    std::vector<std::vector<std::pair<int, double>>> rows(static_cast<size_t>(net.num_nodes));
    for (int e = 0; e < static_cast<int>(net.arcs.size()); ++e) {
        rows[static_cast<size_t>(net.arcs[static_cast<size_t>(e)].from)].push_back({e, 1.0});
        rows[static_cast<size_t>(net.arcs[static_cast<size_t>(e)].to)].push_back({e, -1.0});
    }
    for (int i = 0; i < net.num_nodes; ++i)
        m.add_row(lp::Rel::EQ, net.balance[static_cast<size_t>(i)], std::move(rows[static_cast<size_t>(i)]));
    return m;
}

}  // namespace roam

#endif  // ROAM_FLOW_HPP
