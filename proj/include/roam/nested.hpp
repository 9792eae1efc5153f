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

#ifndef ROAM_NESTED_HPP
#define ROAM_NESTED_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "roam/candidates.hpp"
#include "roam/common.hpp"
#include "roam/instance.hpp"
#include "roam/lp.hpp"
#include "roam/milp.hpp"
#include "roam/robust.hpp"
#include "roam/tuples.hpp"

namespace roam {

/// Layered graph for nested chains: one vertex (m, i, kappa) per layer m,
/// top choice i in S_m, and worst-revenue-so-far kappa in {r_j : j in S_m};
/// edges advance one layer with i' in {i} u B_{m+1} and kappa' in
/// {kappa} u {r_j : j in B_{m+1}}.
struct LayeredGraph {
    struct Vertex {
        int m;      // 0-based layer
        int i;      // top choice
        int kprod;  // kappa identified by the product whose revenue it is
    };
    struct Edge {
        int from, to;
    };
    int n = 0;
    int layers = 0;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> blocks;  // B_1..B_M
    std::map<std::tuple<int, int, int>, int> id_of;

    int vertex_id(int m, int i, int kprod) const {
        auto it = id_of.find({m, i, kprod});
        return it == id_of.end() ? -1 : it->second;
    }
};

inline void require_canonical_chain(const Instance& inst) {
    for (int k = 0; k + 1 < inst.num_assortments(); ++k) {
        const auto& a = inst.past[static_cast<size_t>(k)];
        const auto& b = inst.past[static_cast<size_t>(k + 1)];
        if (a.size() >= b.size() || !a.is_subset_of(b))
            fail(ErrorCode::NotNested, "past assortments are not an ascending chain");
    }
}

inline LayeredGraph build_layered_graph(const Instance& inst) {
    require_canonical_chain(inst);
    LayeredGraph g;
    g.n = inst.n;
    g.layers = inst.num_assortments();
    g.blocks = nested_blocks(inst);
    for (int m = 0; m < g.layers; ++m)
        for (int i : inst.past[static_cast<size_t>(m)].members())
            for (int k : inst.past[static_cast<size_t>(m)].members()) {
                g.id_of[{m, i, k}] = static_cast<int>(g.vertices.size());
                g.vertices.push_back({m, i, k});
            }
    for (int id = 0; id < static_cast<int>(g.vertices.size()); ++id) {
        const auto& v = g.vertices[static_cast<size_t>(id)];
        if (v.m + 1 >= g.layers) continue;
        std::vector<int> next_i = {v.i};
        std::vector<int> next_k = {v.kprod};
        for (int j : g.blocks[static_cast<size_t>(v.m + 1)]) {
            next_i.push_back(j);
            next_k.push_back(j);
        }
        for (int i2 : next_i)
            for (int k2 : next_k) {
                int to = g.vertex_id(v.m + 1, i2, k2);
                if (to >= 0) g.edges.push_back({id, to});
            }
    }
    return g;
}

/// Vertex conditions that must carry no throughput when pricing S:
///   (a) i in S, i in B_m, kappa != r_i
///   (b) i in S, i not in B_m, kappa in r(B_m)
///   (c) kappa in r(B_m \ S)
inline std::vector<char> forbidden_vertices(const LayeredGraph& g, const Instance& inst, const Assortment& s) {
    (void)inst;
    std::vector<char> forb(g.vertices.size(), 0);
    for (int id = 0; id < static_cast<int>(g.vertices.size()); ++id) {
        const auto& v = g.vertices[static_cast<size_t>(id)];
        bool i_in_block = false, k_in_block = false;
        for (int j : g.blocks[static_cast<size_t>(v.m)]) {
            i_in_block |= (j == v.i);
            k_in_block |= (j == v.kprod);
        }
        bool bad = false;
        if (s.contains(v.i) && i_in_block && v.kprod != v.i) bad = true;
        if (s.contains(v.i) && !i_in_block && k_in_block) bad = true;
        if (k_in_block && !s.contains(v.kprod)) bad = true;
        forb[static_cast<size_t>(id)] = bad;
    }
    return forb;
}

/// A feasible point of the layered LP.
struct LayeredFlow {
    std::vector<double> g;
    std::vector<double> f;
    std::vector<std::vector<double>> epsilon;
    double value = 0.0;
};

/// Strips a layered flow into weighted layer-1 to layer-M paths along
/// maximal-residual edges; weights below 1e-12 are discarded. Termination is
/// guaranteed by the layer structure (each strip zeroes an edge or a source).
template <typename Visit>
inline void decompose_paths(const LayeredGraph& g, LayeredFlow& flow, Visit visit) {
    if (flow.f.size() != g.edges.size() || flow.g.size() != g.vertices.size())
        fail(ErrorCode::NonConservativeFlow, "flow does not match the layered graph");
    std::vector<double> out_sum(g.vertices.size(), 0.0), in_sum(g.vertices.size(), 0.0);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        out_sum[static_cast<size_t>(g.edges[e].from)] += flow.f[e];
        in_sum[static_cast<size_t>(g.edges[e].to)] += flow.f[e];
    }
    for (size_t id = 0; id < g.vertices.size(); ++id) {
        int m = g.vertices[id].m;
        if (m <= g.layers - 2 && std::abs(out_sum[id] - flow.g[id]) > 1e-6)
            fail(ErrorCode::NonConservativeFlow, "outflow mismatch at a vertex");
        if (m >= 1 && std::abs(in_sum[id] - flow.g[id]) > 1e-6)
            fail(ErrorCode::NonConservativeFlow, "inflow mismatch at a vertex");
    }
    std::vector<std::vector<int>> out_edges(g.vertices.size());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        out_edges[static_cast<size_t>(g.edges[static_cast<size_t>(e)].from)].push_back(e);

    std::vector<double> rg = flow.g;
    std::vector<double> rf = flow.f;
    for (;;) {
        int start = -1;
        double best = 1e-12;
        for (size_t id = 0; id < g.vertices.size(); ++id)
            if (g.vertices[id].m == 0 && rg[id] > best) {
                best = rg[id];
                start = static_cast<int>(id);
            }
        if (start < 0) break;
        std::vector<int> path = {start};
        std::vector<int> path_edges;
        double weight = rg[static_cast<size_t>(start)];
        int cur = start;
        bool dead_end = false;
        for (int m = 0; m < g.layers - 1; ++m) {
            int pick = -1;
            double most = 1e-12;
            for (int e : out_edges[static_cast<size_t>(cur)])
                if (rf[static_cast<size_t>(e)] > most) {
                    most = rf[static_cast<size_t>(e)];
                    pick = e;
                }
            if (pick < 0) {
                dead_end = true;  // residual mass below tolerance
                break;
            }
            weight = std::min(weight, rf[static_cast<size_t>(pick)]);
            path_edges.push_back(pick);
            cur = g.edges[static_cast<size_t>(pick)].to;
            path.push_back(cur);
        }
        if (dead_end) {
            rg[static_cast<size_t>(start)] = 0.0;
            continue;
        }
        for (int e : path_edges) rf[static_cast<size_t>(e)] -= weight;
        for (int id : path) rg[static_cast<size_t>(id)] -= weight;
        visit(path, weight);
    }
}

namespace nested_detail {

struct CompactLp {
    lp::Model model;
    std::vector<int> g_vars, f_vars;
    std::vector<std::vector<int>> eps_vars;
};

/// The layered LP (worst case when minimized): marginal rows with
/// residuals, conservation both ways, unit mass at the last layer, and the
/// norm ball. Forbidden vertices, when given, are fixed through bounds.
inline CompactLp build_compact_lp(const LayeredGraph& g, const Instance& inst, const std::vector<char>* forbidden) {
    CompactLp out;
    lp::Model& m = out.model;
    const double scale = inst.top_revenue();
    for (int id = 0; id < static_cast<int>(g.vertices.size()); ++id) {
        const auto& v = g.vertices[static_cast<size_t>(id)];
        double cost = v.m == g.layers - 1 ? inst.revenues[static_cast<size_t>(v.kprod)] / scale : 0.0;
        double hi = (forbidden && (*forbidden)[static_cast<size_t>(id)]) ? 0.0 : lp::kInf;
        out.g_vars.push_back(m.add_var(0.0, hi, cost));
    }
    for (size_t e = 0; e < g.edges.size(); ++e) out.f_vars.push_back(m.add_var(0.0, lp::kInf, 0.0));

    std::vector<int> all_eps;
    out.eps_vars.assign(static_cast<size_t>(g.layers), std::vector<int>(static_cast<size_t>(inst.n) + 1, -1));
    std::vector<std::vector<std::pair<int, double>>> marginal(static_cast<size_t>(g.layers) *
                                                              (static_cast<size_t>(inst.n) + 1));
    for (int id = 0; id < static_cast<int>(g.vertices.size()); ++id) {
        const auto& v = g.vertices[static_cast<size_t>(id)];
        marginal[static_cast<size_t>(v.m) * (static_cast<size_t>(inst.n) + 1) + static_cast<size_t>(v.i)].push_back(
            {out.g_vars[static_cast<size_t>(id)], 1.0});
    }
    for (int mm = 0; mm < g.layers; ++mm)
        for (int i : inst.past[static_cast<size_t>(mm)].members()) {
            int e = m.add_var(-lp::kInf, lp::kInf, 0.0);
            out.eps_vars[static_cast<size_t>(mm)][static_cast<size_t>(i)] = e;
            all_eps.push_back(e);
            auto row = marginal[static_cast<size_t>(mm) * (static_cast<size_t>(inst.n) + 1) + static_cast<size_t>(i)];
            row.push_back({e, -1.0});
            m.add_row(lp::Rel::EQ, inst.v[static_cast<size_t>(mm)][static_cast<size_t>(i)], std::move(row));
        }

    std::vector<std::vector<std::pair<int, double>>> out_rows(g.vertices.size()), in_rows(g.vertices.size());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        out_rows[static_cast<size_t>(g.edges[static_cast<size_t>(e)].from)].push_back(
            {out.f_vars[static_cast<size_t>(e)], 1.0});
        in_rows[static_cast<size_t>(g.edges[static_cast<size_t>(e)].to)].push_back(
            {out.f_vars[static_cast<size_t>(e)], 1.0});
    }
    for (int id = 0; id < static_cast<int>(g.vertices.size()); ++id) {
        const auto& v = g.vertices[static_cast<size_t>(id)];
        if (v.m <= g.layers - 2) {
            auto row = out_rows[static_cast<size_t>(id)];
            row.push_back({out.g_vars[static_cast<size_t>(id)], -1.0});
            m.add_row(lp::Rel::EQ, 0.0, std::move(row));
        }
        if (v.m >= 1) {
            auto row = in_rows[static_cast<size_t>(id)];
            row.push_back({out.g_vars[static_cast<size_t>(id)], -1.0});
            m.add_row(lp::Rel::EQ, 0.0, std::move(row));
        }
    }
    std::vector<std::pair<int, double>> mass;
    for (int id = 0; id < static_cast<int>(g.vertices.size()); ++id)
        if (g.vertices[static_cast<size_t>(id)].m == g.layers - 1)
            mass.push_back({out.g_vars[static_cast<size_t>(id)], 1.0});
    m.add_row(lp::Rel::EQ, 1.0, std::move(mass));
    lp::linearize_norm_ball(m, all_eps, inst.norm == Norm::L1 ? lp::NormKind::L1 : lp::NormKind::LInf, inst.eta);
    return out;
}

inline std::pair<RobustValue, LayeredFlow> solve_compact(const Instance& chain, const Assortment& s,
                                                         bool best_case) {
    LayeredGraph g = build_layered_graph(chain);
    std::vector<char> forb = forbidden_vertices(g, chain, s);
    CompactLp built = build_compact_lp(g, chain, &forb);
    built.model.sense = best_case ? lp::Sense::Maximize : lp::Sense::Minimize;
    lp::Solution sol = lp::solve(built.model);
    if (sol.status == lp::Status::Infeasible)
        fail(ErrorCode::InconsistentData, "no ranking-based model is consistent at this eta");
    if (sol.status != lp::Status::Optimal) fail(ErrorCode::NumericalFailure, "compact LP did not solve");

    LayeredFlow flow;
    flow.value = sol.value * chain.top_revenue();
    for (int id = 0; id < static_cast<int>(g.vertices.size()); ++id)
        flow.g.push_back(sol.x[static_cast<size_t>(built.g_vars[static_cast<size_t>(id)])]);
    for (size_t e = 0; e < g.edges.size(); ++e)
        flow.f.push_back(sol.x[static_cast<size_t>(built.f_vars[e])]);
    flow.epsilon.assign(static_cast<size_t>(g.layers), std::vector<double>(static_cast<size_t>(chain.n) + 1, 0.0));
    for (int mm = 0; mm < g.layers; ++mm)
        for (int i = 0; i <= chain.n; ++i) {
            int e = built.eps_vars[static_cast<size_t>(mm)][static_cast<size_t>(i)];
            if (e >= 0) flow.epsilon[static_cast<size_t>(mm)][static_cast<size_t>(i)] = sol.x[static_cast<size_t>(e)];
        }

    RobustValue rv;
    rv.value = flow.value;
    rv.epsilon = flow.epsilon;
    LayeredFlow copy = flow;
    std::map<Tuple, double> lambda;
    decompose_paths(g, copy, [&](const std::vector<int>& path, double w) {
        Tuple t;
        for (int id : path) t.push_back(g.vertices[static_cast<size_t>(id)].i);
        lambda[t] += w;
    });
    for (auto& [t, w] : lambda) {
        rv.witness_tuples.push_back(t);
        rv.witness_weights.push_back(w);
    }
    return {rv, flow};
}

}  // namespace nested_detail

/// Worst case through the polynomial-size layered LP (nested chains only).
/// Accepts instances in any order; canonicalizes internally.
inline RobustValue compact_worst_case(const Instance& inst, const Assortment& s) {
    StructureTag tag = classify_structure(inst);
    if (!tag.is_nested) fail(ErrorCode::NotNested, "compact LP needs nested past assortments");
    Instance chain = canonical_nested(inst, tag);
    if (s.set_intersection(chain.past[0]).empty()) fail(ErrorCode::EmptyMinimum, "S must intersect S_1");
    return nested_detail::solve_compact(chain, s, false).first;
}

inline RobustValue compact_best_case(const Instance& inst, const Assortment& s) {
    StructureTag tag = classify_structure(inst);
    if (!tag.is_nested) fail(ErrorCode::NotNested, "compact LP needs nested past assortments");
    Instance chain = canonical_nested(inst, tag);
    if (s.set_intersection(chain.past[0]).empty()) fail(ErrorCode::EmptyMinimum, "S must intersect S_1");
    return nested_detail::solve_compact(chain, s, true).first;
}

inline std::pair<RobustValue, LayeredFlow> compact_worst_case_flow(const Instance& inst, const Assortment& s) {
    StructureTag tag = classify_structure(inst);
    if (!tag.is_nested) fail(ErrorCode::NotNested, "compact LP needs nested past assortments");
    Instance chain = canonical_nested(inst, tag);
    if (s.set_intersection(chain.past[0]).empty()) fail(ErrorCode::EmptyMinimum, "S must intersect S_1");
    return nested_detail::solve_compact(chain, s, false);
}

/// Path decomposition of a layered flow into feasible-tuple weights.
inline std::vector<std::pair<Tuple, double>> decompose_flow_to_lambda(const Instance& inst,
                                                                      const LayeredFlow& flow) {
    StructureTag tag = classify_structure(inst);
    if (!tag.is_nested) fail(ErrorCode::NotNested, "decomposition needs nested past assortments");
    Instance chain = canonical_nested(inst, tag);
    LayeredGraph g = build_layered_graph(chain);
    LayeredFlow copy = flow;
    std::map<Tuple, double> lambda;
    decompose_paths(g, copy, [&](const std::vector<int>& path, double w) {
        Tuple t;
        for (int id : path) t.push_back(g.vertices[static_cast<size_t>(id)].i);
        lambda[t] += w;
    });
    return {lambda.begin(), lambda.end()};
}

// ---------------------------------------------------------------------------
// Dual-based mixed-integer formulations.
// ---------------------------------------------------------------------------

namespace nested_detail {

/// The worst-case certificate as a mixed-integer model: the mechanical dual
/// of the (unrestricted) layered LP, with the forbidden-set handled by big-M
/// penalty terms on the dual rows of the throughput variables. Membership of
/// product 0 is a constant: the printed formulation pins x_0 = 0, which is
/// inconsistent with its own penalty terms, so 0-in-S enters as the constant
/// truth it is. Revenues are pre-scaled by r_n, making every penalty 1.
struct CertificateMilp {
    MilpModel milp;
    std::vector<int> x_of_product;                        // product 1..n -> binary index
    std::vector<std::pair<int, double>> certificate_obj;  // == worst case / r_n
};

inline CertificateMilp build_certificate(const Instance& chain, const LayeredGraph& g) {
    CompactLp primal = build_compact_lp(g, chain, nullptr);
    lp::DualizedModel dd = lp::dualize(primal.model);

    CertificateMilp out;
    out.milp.model = dd.dual;  // sense: Maximize
    lp::Model& m = out.milp.model;
    for (int j = 0; j < m.num_vars(); ++j)
        if (m.obj[static_cast<size_t>(j)] != 0.0)
            out.certificate_obj.push_back({j, m.obj[static_cast<size_t>(j)]});

    out.x_of_product.assign(static_cast<size_t>(chain.n) + 1, -1);
    for (int i = 1; i <= chain.n; ++i) {
        out.x_of_product[static_cast<size_t>(i)] = m.add_var(0.0, 1.0, 0.0);
        out.milp.binaries.push_back(out.x_of_product[static_cast<size_t>(i)]);
    }

    // Per-vertex penalties: the dual row of g_{m,i,kappa} has right side
    // equal to its primal objective coefficient; raising it by M(x) keeps the
    // certificate exact for every 0/1 assortment.
    for (int id = 0; id < static_cast<int>(g.vertices.size()); ++id) {
        const auto& v = g.vertices[static_cast<size_t>(id)];
        lp::Row& row = m.rows[static_cast<size_t>(dd.row_of_var[static_cast<size_t>(primal.g_vars[static_cast<size_t>(id)])])];
        bool i_in_block = false, k_in_block = false;
        for (int j : g.blocks[static_cast<size_t>(v.m)]) {
            i_in_block |= (j == v.i);
            k_in_block |= (j == v.kprod);
        }
        bool membership_cond = (i_in_block && v.kprod != v.i) || (!i_in_block && k_in_block);
        if (membership_cond) {
            if (v.i == 0)
                row.rhs += 1.0;  // 0 in S always
            else
                row.coeffs.push_back({out.x_of_product[static_cast<size_t>(v.i)], -1.0});
        }
        if (k_in_block && v.kprod != 0) {
            row.rhs += 1.0;
            row.coeffs.push_back({out.x_of_product[static_cast<size_t>(v.kprod)], 1.0});
        }
    }
    return out;
}

}  // namespace nested_detail

/// Robust assortment optimization for nested chains as a MILP with n binary
/// variables. A second stage minimizes the assortment mask at the optimal
/// value, implementing the smallest-mask tie rule.
inline std::pair<Assortment, double> solve_ro_milp(const Instance& inst) {
    StructureTag tag = classify_structure(inst);
    if (!tag.is_nested) fail(ErrorCode::NotNested, "RO MILP needs nested past assortments");
    Instance chain = canonical_nested(inst, tag);
    LayeredGraph g = build_layered_graph(chain);
    const double scale = chain.top_revenue();

    // Detect an empty consistency set up front (certificate duals explode
    // otherwise).
    compact_worst_case(chain, chain.full_assortment());

    nested_detail::CertificateMilp cm = nested_detail::build_certificate(chain, g);

    // Restricting the binaries to the candidate collection is valid for the
    // robust objective and pins the tie rule to the same family the brute
    // routes search; as closure rows x_{i*} <= x_i it also tightens the
    // relaxation.
    {
        DominanceGraph dom = build_dominance_graph(chain);
        for (int a = 0; a <= chain.n; ++a)
            for (int b : dom.out_edges[static_cast<size_t>(a)].members()) {
                if (a == 0)
                    cm.milp.model.add_row(lp::Rel::GE, 1.0,
                                          {{cm.x_of_product[static_cast<size_t>(b)], 1.0}});
                else
                    cm.milp.model.add_row(lp::Rel::LE, 0.0,
                                          {{cm.x_of_product[static_cast<size_t>(a)], 1.0},
                                           {cm.x_of_product[static_cast<size_t>(b)], -1.0}});
            }
    }

    std::vector<double> hint(static_cast<size_t>(chain.n), 0.0);
    {
        int best_m = 1;
        for (int m = 2; m <= chain.num_assortments(); ++m)
            if (past_revenue(chain, m) > past_revenue(chain, best_m)) best_m = m;
        for (int i = 1; i <= chain.n; ++i)
            if (chain.past[static_cast<size_t>(best_m - 1)].contains(i)) hint[static_cast<size_t>(i - 1)] = 1.0;
    }
    MilpOptions opts;
    opts.hint = &hint;
    MilpResult first = solve_milp(cm.milp, opts);
    if (first.status != lp::Status::Optimal) fail(ErrorCode::NumericalFailure, "RO MILP did not solve");
    double value = first.value * scale;

    std::vector<int> bits(static_cast<size_t>(chain.n) + 1, 0);
    for (int i = 1; i <= chain.n; ++i)
        bits[static_cast<size_t>(i)] =
            first.x[static_cast<size_t>(cm.x_of_product[static_cast<size_t>(i)])] > 0.5 ? 1 : 0;

    // Tie handling for the smallest-mask rule. A single probe (exclude the
    // found optimum, demand the optimal value) decides whether another
    // optimum exists at all; only then does a per-bit descent pin the
    // lexicographic minimum. The certificate objective keeps every one of
    // these solves well-conditioned.
    const double floor_row = first.value - 1e-9;
    auto with_floor = [&]() {
        MilpModel m = cm.milp;
        m.model.add_row(lp::Rel::GE, floor_row, cm.certificate_obj);
        return m;
    };
    bool tie = false;
    {
        MilpModel probe = with_floor();
        std::vector<std::pair<int, double>> cut;
        int ones = 0;
        for (int i = 1; i <= chain.n; ++i) {
            cut.push_back({cm.x_of_product[static_cast<size_t>(i)], bits[static_cast<size_t>(i)] ? -1.0 : 1.0});
            ones += bits[static_cast<size_t>(i)];
        }
        probe.model.add_row(lp::Rel::GE, 1.0 - ones, std::move(cut));
        try {
            MilpResult r = solve_milp(probe);
            if (r.status == lp::Status::Optimal) {
                tie = true;
                // adopt immediately if the probe's optimum is already smaller
                std::vector<int> other(static_cast<size_t>(chain.n) + 1, 0);
                for (int i = 1; i <= chain.n; ++i)
                    other[static_cast<size_t>(i)] =
                        r.x[static_cast<size_t>(cm.x_of_product[static_cast<size_t>(i)])] > 0.5 ? 1 : 0;
                for (int i = chain.n; i >= 1; --i) {
                    if (other[static_cast<size_t>(i)] != bits[static_cast<size_t>(i)]) {
                        if (!other[static_cast<size_t>(i)]) bits = other;
                        break;
                    }
                }
            }
        } catch (const Error&) {
            tie = false;  // probe guard tripped: keep the found optimum
        }
    }
    if (tie) {
        for (int i = chain.n; i >= 1; --i) {
            if (!bits[static_cast<size_t>(i)]) continue;
            MilpModel trial = with_floor();
            for (int j = i; j <= chain.n; ++j) {
                double val = j == i ? 0.0 : static_cast<double>(bits[static_cast<size_t>(j)]);
                trial.model.add_row(lp::Rel::EQ, val, {{cm.x_of_product[static_cast<size_t>(j)], 1.0}});
            }
            try {
                MilpResult r = solve_milp(trial);
                if (r.status == lp::Status::Optimal)
                    for (int j = 1; j <= chain.n; ++j)
                        bits[static_cast<size_t>(j)] =
                            r.x[static_cast<size_t>(cm.x_of_product[static_cast<size_t>(j)])] > 0.5 ? 1 : 0;
            } catch (const Error&) {
                break;  // keep the current bits
            }
        }
    }

    Assortment s(chain.n);
    s.insert(0);
    for (int i = 1; i <= chain.n; ++i)
        if (bits[static_cast<size_t>(i)]) s.insert(i);
    double check = compact_worst_case(chain, s).value;
    if (std::abs(check - value) > 1e-6 * std::max(1.0, scale))
        fail(ErrorCode::NumericalFailure, "MILP optimum does not re-evaluate to its value");
    return {s, value};
}

struct ParetoSolution {
    Assortment assortment;
    double best_case = 0.0;
    double worst_case = 0.0;
};

/// RO-Pareto for nested chains: maximize the best case subject to the
/// dual-certified worst case clearing theta. The best-case side is the
/// primal layered LP with binary-linked forbidden rows.
inline ParetoSolution solve_pareto_milp(const Instance& inst, double theta) {
    StructureTag tag = classify_structure(inst);
    if (!tag.is_nested) fail(ErrorCode::NotNested, "Pareto MILP needs nested past assortments");
    Instance chain = canonical_nested(inst, tag);
    LayeredGraph g = build_layered_graph(chain);
    const double scale = chain.top_revenue();

    compact_worst_case(chain, chain.full_assortment());  // consistency check

    nested_detail::CertificateMilp cm = nested_detail::build_certificate(chain, g);
    lp::Model& m = cm.milp.model;
    // Certificate floor.
    m.add_row(lp::Rel::GE, theta / scale, cm.certificate_obj);
    for (auto& c : m.obj) c = 0.0;

    // Best-case primal side.
    nested_detail::CompactLp primal = nested_detail::build_compact_lp(g, chain, nullptr);
    int offset = m.num_vars();
    for (int j = 0; j < primal.model.num_vars(); ++j)
        m.add_var(primal.model.lower[static_cast<size_t>(j)], primal.model.upper[static_cast<size_t>(j)],
                  primal.model.obj[static_cast<size_t>(j)]);
    for (const auto& row : primal.model.rows) {
        std::vector<std::pair<int, double>> shifted;
        for (auto [j, a] : row.coeffs) shifted.push_back({j + offset, a});
        m.add_row(row.rel, row.rhs, std::move(shifted));
    }
    // Forbidden-vertex linking against the binaries (throughput is at most
    // one, so unit big-Ms are exact).
    for (int id = 0; id < static_cast<int>(g.vertices.size()); ++id) {
        const auto& v = g.vertices[static_cast<size_t>(id)];
        int gv = primal.g_vars[static_cast<size_t>(id)] + offset;
        bool i_in_block = false, k_in_block = false;
        for (int j : g.blocks[static_cast<size_t>(v.m)]) {
            i_in_block |= (j == v.i);
            k_in_block |= (j == v.kprod);
        }
        bool membership_cond = (i_in_block && v.kprod != v.i) || (!i_in_block && k_in_block);
        if (membership_cond) {
            if (v.i == 0)
                m.add_row(lp::Rel::LE, 0.0, {{gv, 1.0}});
            else
                m.add_row(lp::Rel::LE, 1.0, {{gv, 1.0}, {cm.x_of_product[static_cast<size_t>(v.i)], 1.0}});
        }
        if (k_in_block && v.kprod != 0)
            m.add_row(lp::Rel::LE, 0.0, {{gv, 1.0}, {cm.x_of_product[static_cast<size_t>(v.kprod)], -1.0}});
    }
    m.sense = lp::Sense::Maximize;

    MilpResult r = solve_milp(cm.milp);
    if (r.status == lp::Status::Infeasible) fail(ErrorCode::ThetaInfeasible, "theta exceeds the robust optimum");
    if (r.status != lp::Status::Optimal) fail(ErrorCode::NumericalFailure, "Pareto MILP did not solve");

    ParetoSolution out;
    Assortment s(chain.n);
    s.insert(0);
    for (int i = 1; i <= chain.n; ++i)
        if (r.x[static_cast<size_t>(cm.x_of_product[static_cast<size_t>(i)])] > 0.5) s.insert(i);
    out.assortment = s;
    out.best_case = r.value * scale;
    out.worst_case = compact_worst_case(chain, s).value;
    if (out.worst_case < theta - 1e-6 * std::max(1.0, scale))
        fail(ErrorCode::NumericalFailure, "certified worst case violates theta");
    return out;
}

}  // namespace roam

#endif  // ROAM_NESTED_HPP
