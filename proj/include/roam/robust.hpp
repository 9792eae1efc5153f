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

#ifndef ROAM_ROBUST_HPP
#define ROAM_ROBUST_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "roam/candidates.hpp"
#include "roam/common.hpp"
#include "roam/flow.hpp"
#include "roam/instance.hpp"
#include "roam/lp.hpp"
#include "roam/ranking.hpp"
#include "roam/tuples.hpp"

namespace roam {

/// Result of a robust evaluation: the optimal value, the adversarial tuple
/// weights that certify it, and the residuals they use.
struct RobustValue {
    double value = 0.0;
    std::vector<Tuple> witness_tuples;
    std::vector<double> witness_weights;       // aligned with witness_tuples
    std::vector<std::vector<double>> epsilon;  // per (m, i)
};

namespace robust_detail {

inline lp::NormKind norm_kind(const Instance& inst) {
    return inst.norm == Norm::L1 ? lp::NormKind::L1 : lp::NormKind::LInf;
}

/// The tuple-marginal LP feasible set shared by worst and best case:
/// per-(m,i) marginals with residuals, a total-mass row, and the norm ball.
struct TupleLp {
    lp::Model model;
    std::vector<int> lambda_vars;
    std::vector<std::vector<int>> eps_vars;  // [m][i] or -1
};

inline TupleLp build_tuple_lp(const Instance& inst, const FeasibleTupleSet& l) {
    TupleLp out;
    lp::Model& m = out.model;
    for (int t = 0; t < l.size(); ++t) out.lambda_vars.push_back(m.add_var(0.0, lp::kInf, 0.0));
    std::vector<int> all_eps;
    out.eps_vars.assign(static_cast<size_t>(inst.num_assortments()),
                        std::vector<int>(static_cast<size_t>(inst.n) + 1, -1));
    for (int mm = 0; mm < inst.num_assortments(); ++mm)
        for (int i : inst.past[static_cast<size_t>(mm)].members()) {
            int e = m.add_var(-lp::kInf, lp::kInf, 0.0);
            out.eps_vars[static_cast<size_t>(mm)][static_cast<size_t>(i)] = e;
            all_eps.push_back(e);
            std::vector<std::pair<int, double>> row;
            for (int t : l.index[static_cast<size_t>(mm)][static_cast<size_t>(i)])
                row.push_back({out.lambda_vars[static_cast<size_t>(t)], 1.0});
            row.push_back({e, -1.0});
            m.add_row(lp::Rel::EQ, inst.v[static_cast<size_t>(mm)][static_cast<size_t>(i)], std::move(row));
        }
    std::vector<std::pair<int, double>> ones;
    for (int v : out.lambda_vars) ones.push_back({v, 1.0});
    m.add_row(lp::Rel::EQ, 1.0, std::move(ones));
    lp::linearize_norm_ball(m, all_eps, norm_kind(inst), inst.eta);
    return out;
}

inline RobustValue extract(const Instance& inst, const FeasibleTupleSet& l, const TupleLp& built,
                           const lp::Solution& sol, double value) {
    RobustValue out;
    out.value = value;
    for (int t = 0; t < l.size(); ++t) {
        double w = sol.x[static_cast<size_t>(built.lambda_vars[static_cast<size_t>(t)])];
        if (w > 1e-12) {
            out.witness_tuples.push_back(l.tuples[static_cast<size_t>(t)]);
            out.witness_weights.push_back(w);
        }
    }
    out.epsilon.assign(static_cast<size_t>(inst.num_assortments()),
                       std::vector<double>(static_cast<size_t>(inst.n) + 1, 0.0));
    for (int mm = 0; mm < inst.num_assortments(); ++mm)
        for (int i = 0; i <= inst.n; ++i) {
            int e = built.eps_vars[static_cast<size_t>(mm)][static_cast<size_t>(i)];
            if (e >= 0) out.epsilon[static_cast<size_t>(mm)][static_cast<size_t>(i)] = sol.x[static_cast<size_t>(e)];
        }
    return out;
}

inline double solve_objective(const Instance& inst, const FeasibleTupleSet& l, TupleLp& built,
                              const std::vector<double>& coeff, bool maximize, RobustValue* witness) {
    const double scale = inst.top_revenue();
    built.model.sense = maximize ? lp::Sense::Maximize : lp::Sense::Minimize;
    for (int t = 0; t < l.size(); ++t)
        built.model.obj[static_cast<size_t>(built.lambda_vars[static_cast<size_t>(t)])] =
            coeff[static_cast<size_t>(t)] / scale;
    lp::Solution sol = lp::solve(built.model);
    if (sol.status == lp::Status::Infeasible)
        fail(ErrorCode::InconsistentData, "no ranking-based model is consistent at this eta");
    if (sol.status != lp::Status::Optimal) fail(ErrorCode::NumericalFailure, "tuple LP did not solve");
    double value = sol.value * scale;
    if (witness) *witness = extract(inst, l, built, sol, value);
    return value;
}

}  // namespace robust_detail

struct RobustEvalOptions {
    long long explosion_cap = 10'000'000;
};

/// Fallbacks defined in nested.hpp (compact layered LP) for instances whose
/// tuple set exceeds the guard; this header includes nested.hpp at the end
/// so both are always available together.
inline RobustValue compact_worst_case(const Instance& inst, const Assortment& s);
inline RobustValue compact_best_case(const Instance& inst, const Assortment& s);

/// min over consistent models of the expected revenue of S, by the LP over
/// feasible-tuple weights with rho costs.
inline RobustValue worst_case_revenue(const Instance& inst, const Assortment& s,
                                      const RobustEvalOptions& opts = {}) {
    FeasibleTupleSet l;
    try {
        l = build_feasible_tuples(inst, {opts.explosion_cap});
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ExplosionGuard && classify_structure(inst).is_nested)
            return compact_worst_case(inst, s);
        throw;
    }
    robust_detail::TupleLp built = robust_detail::build_tuple_lp(inst, l);
    std::vector<double> coeff;
    for (const Tuple& t : l.tuples) coeff.push_back(rho(t, s, inst));
    RobustValue out;
    robust_detail::solve_objective(inst, l, built, coeff, false, &out);
    return out;
}

/// max over consistent models, via the rho_max analog of the worst-case LP.
/// Cross-checked against the revenue-flip route (r_n minus the worst case
/// under complemented revenues) on every call.
inline RobustValue best_case_revenue(const Instance& inst, const Assortment& s,
                                     const RobustEvalOptions& opts = {}) {
    FeasibleTupleSet l;
    try {
        l = build_feasible_tuples(inst, {opts.explosion_cap});
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ExplosionGuard && classify_structure(inst).is_nested)
            return compact_best_case(inst, s);
        throw;
    }
    robust_detail::TupleLp built = robust_detail::build_tuple_lp(inst, l);
    std::vector<double> coeff;
    for (const Tuple& t : l.tuples) coeff.push_back(rho_max(t, s, inst));
    RobustValue out;
    double direct = robust_detail::solve_objective(inst, l, built, coeff, true, &out);

    // Flip route: minimize sum (r_n - rho_max) lambda and complement.
    const double top = inst.top_revenue();
    std::vector<double> flipped;
    for (double c : coeff) flipped.push_back(top - c);
    double via_flip = top - robust_detail::solve_objective(inst, l, built, flipped, false, nullptr);
    if (std::abs(direct - via_flip) > 1e-7 * std::max(1.0, top))
        fail(ErrorCode::NumericalFailure, "best-case routes disagree");
    return out;
}

/// Minimal consistency radius: the smallest ||eps|| admitting a model whose
/// tuple marginals match the data. Zero iff a perfectly consistent model
/// exists. Solved as a single LP (bisection retained as a test oracle).
inline double min_consistency_radius(const Instance& inst, const RobustEvalOptions& opts = {}) {
    FeasibleTupleSet l = build_feasible_tuples(inst, {opts.explosion_cap});
    lp::Model m;
    std::vector<int> lambda_vars;
    for (int t = 0; t < l.size(); ++t) lambda_vars.push_back(m.add_var(0.0, lp::kInf, 0.0));
    std::vector<int> eps_vars;
    for (int mm = 0; mm < inst.num_assortments(); ++mm)
        for (int i : inst.past[static_cast<size_t>(mm)].members()) {
            int e = m.add_var(-lp::kInf, lp::kInf, 0.0);
            eps_vars.push_back(e);
            std::vector<std::pair<int, double>> row;
            for (int t : l.index[static_cast<size_t>(mm)][static_cast<size_t>(i)])
                row.push_back({lambda_vars[static_cast<size_t>(t)], 1.0});
            row.push_back({e, -1.0});
            m.add_row(lp::Rel::EQ, inst.v[static_cast<size_t>(mm)][static_cast<size_t>(i)], std::move(row));
        }
    std::vector<std::pair<int, double>> ones;
    for (int v : lambda_vars) ones.push_back({v, 1.0});
    m.add_row(lp::Rel::EQ, 1.0, std::move(ones));
    if (inst.norm == Norm::LInf) {
        int t = m.add_var(0.0, lp::kInf, 1.0);
        for (int e : eps_vars) {
            m.add_row(lp::Rel::GE, 0.0, {{t, 1.0}, {e, -1.0}});
            m.add_row(lp::Rel::GE, 0.0, {{t, 1.0}, {e, 1.0}});
        }
    } else {
        for (int e : eps_vars) {
            int t = m.add_var(0.0, lp::kInf, 1.0);
            m.add_row(lp::Rel::GE, 0.0, {{t, 1.0}, {e, -1.0}});
            m.add_row(lp::Rel::GE, 0.0, {{t, 1.0}, {e, 1.0}});
        }
    }
    lp::Solution sol = lp::solve(m);
    if (sol.status != lp::Status::Optimal) fail(ErrorCode::NumericalFailure, "radius LP did not solve");
    return std::max(0.0, sol.value);
}

/// Worst case for M = 2 at eta = 0 as a minimum-cost network flow: the
/// constant term over the intersection plus shifted-cost arcs. Intersection
/// products are split so that the eliminated diagonal weights keep their
/// sign constraint. Augments internally when n is offered in only one of
/// the two assortments.
inline RobustValue worst_case_two_flow(const Instance& original, const Assortment& s_orig) {
    if (original.num_assortments() != 2) fail(ErrorCode::NotApplicable, "two-flow needs M = 2");
    if (original.eta != 0.0) fail(ErrorCode::NotApplicable, "two-flow needs eta = 0");
    bool augmented = !(original.past[0].contains(original.n) && original.past[1].contains(original.n));
    Instance inst = augmented ? augment_with_fictitious_top(original) : original;
    Assortment s(inst.n);
    for (int i : s_orig.members()) s.insert(i);

    const Assortment& s1 = inst.past[0];
    const Assortment& s2 = inst.past[1];
    std::vector<int> left = s1.set_difference(s2).members();
    std::vector<int> right = s2.set_difference(s1).members();
    std::vector<int> mid = s1.set_intersection(s2).members();

    double constant = 0.0;
    for (int i : mid)
        constant += rho_two({i, i}, s, inst) * inst.v[0][static_cast<size_t>(i)];

    FlowNetwork net;
    std::vector<int> left_node(static_cast<size_t>(inst.n) + 1, -1);
    std::vector<int> right_node(static_cast<size_t>(inst.n) + 1, -1);
    std::vector<int> mid_out(static_cast<size_t>(inst.n) + 1, -1), mid_in(static_cast<size_t>(inst.n) + 1, -1);
    for (int i : left) left_node[static_cast<size_t>(i)] = net.add_node(inst.v[0][static_cast<size_t>(i)]);
    for (int i : right) right_node[static_cast<size_t>(i)] = net.add_node(-inst.v[1][static_cast<size_t>(i)]);
    for (int i : mid) {
        mid_out[static_cast<size_t>(i)] = net.add_node(inst.v[0][static_cast<size_t>(i)]);
        mid_in[static_cast<size_t>(i)] = net.add_node(-inst.v[1][static_cast<size_t>(i)]);
    }
    for (int i1 : left) {
        for (int i : mid) net.add_arc(left_node[static_cast<size_t>(i1)], mid_in[static_cast<size_t>(i)],
                                      rho_two({i1, i}, s, inst));
        for (int i2 : right) net.add_arc(left_node[static_cast<size_t>(i1)], right_node[static_cast<size_t>(i2)],
                                         rho_two({i1, i2}, s, inst));
    }
    for (int i : mid) {
        double diag = rho_two({i, i}, s, inst);
        for (int i2 : right) net.add_arc(mid_out[static_cast<size_t>(i)], right_node[static_cast<size_t>(i2)],
                                         rho_two({i, i2}, s, inst) - diag);
        net.add_arc(mid_out[static_cast<size_t>(i)], mid_in[static_cast<size_t>(i)], 0.0);
    }
    FlowResult fr = solve_min_cost_flow(net);
    if (fr.status == lp::Status::Infeasible)
        fail(ErrorCode::InconsistentData, "no consistent model at eta = 0");
    RobustValue out;
    out.value = constant + fr.cost;
    // Recover tuple weights from the arc flows (diagonal mass from the
    // pass-through arcs).
    size_t arc = 0;
    for (int i1 : left) {
        for (int i : mid) {
            if (fr.flow[arc] > 1e-12) {
                out.witness_tuples.push_back({i1, i});
                out.witness_weights.push_back(fr.flow[arc]);
            }
            ++arc;
        }
        for (int i2 : right) {
            if (fr.flow[arc] > 1e-12) {
                out.witness_tuples.push_back({i1, i2});
                out.witness_weights.push_back(fr.flow[arc]);
            }
            ++arc;
        }
    }
    for (int i : mid) {
        for (int i2 : right) {
            if (fr.flow[arc] > 1e-12) {
                out.witness_tuples.push_back({i, i2});
                out.witness_weights.push_back(fr.flow[arc]);
            }
            ++arc;
        }
        if (fr.flow[arc] > 1e-12) {
            out.witness_tuples.push_back({i, i});
            out.witness_weights.push_back(fr.flow[arc]);
        }
        ++arc;
    }
    if (augmented) {
        // The fictitious product carries zero frequency, so no witness mass
        // lands on it; drop its coordinate bookkeeping by leaving tuples in
        // the augmented labels only when they avoid the extra product.
        for (const Tuple& t : out.witness_tuples)
            for (int im : t)
                if (im > original.n) fail(ErrorCode::NumericalFailure, "mass on the fictitious product");
    }
    return out;
}

/// Lifts a tuple-weight witness to an explicit ranking model achieving the
/// worst-case value at S: each tuple becomes one ranking consistent with its
/// preference graph that tops S at the rho-attaining product.
inline RankingModel witness_ranking_model(const Instance& inst, const Assortment& s, const RobustValue& rv,
                                          bool best_case = false) {
    RankingModel model;
    for (size_t k = 0; k < rv.witness_tuples.size(); ++k) {
        const Tuple& t = rv.witness_tuples[k];
        TupleGraph g(t, inst.past, inst.n);
        std::vector<char> marked = g.mark_ancestors_of_selected(s);
        int target = -1;
        double target_r = best_case ? -1.0 : std::numeric_limits<double>::infinity();
        for (int i : s.members())
            if (!marked[static_cast<size_t>(i)]) {
                double r = inst.revenues[static_cast<size_t>(i)];
                if (best_case ? r > target_r : r < target_r) {
                    target_r = r;
                    target = i;
                }
            }
        if (target < 0) fail(ErrorCode::EmptyMinimum, "witness tuple admits no top choice in S");

        // Preference edges: target above everything else in S, plus the
        // tuple graph's own ordering. Kahn over the transpose yields ranks.
        std::vector<std::vector<int>> prefer(static_cast<size_t>(inst.n) + 1);  // prefer[a] = {b: a above b}
        std::vector<int> above_count(static_cast<size_t>(inst.n) + 1, 0);
        auto add_edge = [&](int lower, int higher) {
            prefer[static_cast<size_t>(higher)].push_back(lower);
            ++above_count[static_cast<size_t>(lower)];
        };
        for (int v = 0; v <= inst.n; ++v)
            for (int w : g.out_neighbors(v)) add_edge(v, w);  // edge (v, i_m): i_m preferred
        for (int j : s.members())
            if (j != target) add_edge(j, target);

        std::vector<int> order;
        std::vector<int> ready;
        for (int v = inst.n; v >= 0; --v)
            if (above_count[static_cast<size_t>(v)] == 0) ready.push_back(v);
        while (!ready.empty()) {
            int v = ready.back();
            ready.pop_back();
            order.push_back(v);
            for (int w : prefer[static_cast<size_t>(v)])
                if (--above_count[static_cast<size_t>(w)] == 0) ready.push_back(w);
        }
        if (order.size() != static_cast<size_t>(inst.n) + 1)
            fail(ErrorCode::NumericalFailure, "witness graph has a cycle");
        Ranking sigma = Ranking::from_order(order);

        bool merged = false;
        for (auto& [ms, mw] : model.atoms)
            if (ms == sigma) {
                mw += rv.witness_weights[k];
                merged = true;
                break;
            }
        if (!merged) model.atoms.push_back({sigma, rv.witness_weights[k]});
    }
    // Normalize away the LP's 1e-9-level drift so the model validates.
    double total = 0.0;
    for (auto& [sigma, w] : model.atoms) total += w;
    for (auto& [sigma, w] : model.atoms) w /= total;
    model.check();
    return model;
}

}  // namespace roam

#include "roam/nested.hpp"  // definitions of the compact-LP fallbacks

#endif  // ROAM_ROBUST_HPP
