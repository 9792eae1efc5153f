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

#ifndef ROAM_MILP_HPP
#define ROAM_MILP_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <vector>

#include "roam/common.hpp"
#include "roam/lp.hpp"

namespace roam {

struct MilpModel {
    lp::Model model;
    std::vector<int> binaries;  // variable indices restricted to {0,1}
};

struct MilpResult {
    lp::Status status = lp::Status::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    int nodes = 0;
};

struct MilpOptions {
    double int_tol = 1e-6;
    int max_nodes = 2'000'000;
    /// Optional starting incumbent: a feasible binary assignment (values for
    /// every binary variable, in `binaries` order) used to seed pruning.
    const std::vector<double>* hint = nullptr;
};

/// Plug point for an external MILP solver behind the same contract. The
/// built-in branch-and-bound below is the default backend and the one the
/// test suite runs against.
class MilpBackend {
  public:
    virtual ~MilpBackend() = default;
    virtual MilpResult solve(const MilpModel& milp, const MilpOptions& opts) = 0;
};

namespace milp_detail {

/// Compares binary assignments as assortment masks: entry k of `binaries`
/// is bit k, higher bits more significant.
inline bool mask_less(const std::vector<double>& a, const std::vector<double>& b, const std::vector<int>& binaries,
                      double tol) {
    for (size_t k = binaries.size(); k-- > 0;) {
        bool abit = a[static_cast<size_t>(binaries[k])] > 0.5;
        bool bbit = b[static_cast<size_t>(binaries[k])] > 0.5;
        if (abit != bbit) return !abit;
    }
    (void)tol;
    return false;
}

}  // namespace milp_detail

/// Best-first branch and bound over the binary variables, with bounds from
/// the LP relaxation. The relaxation is solved through its explicit dual so
/// that branching (a bound change) becomes an objective change there, which
/// keeps the parent basis primal feasible for warm starts. Branching picks
/// the lowest-index fractional variable; the floor child is explored first.
/// Equal-value incumbents resolve to the smallest assortment mask.
inline MilpResult solve_milp(const MilpModel& milp, const MilpOptions& opts = {}) {
    if (static_cast<int>(milp.binaries.size()) > 32)
        fail(ErrorCode::GuardExceeded, "built-in solver handles at most 32 binaries");
    for (int j : milp.binaries)
        if (j < 0 || j >= milp.model.num_vars()) fail(ErrorCode::BadInput, "binary index out of range");

    const bool maximize = milp.model.sense == lp::Sense::Maximize;

    // Canonical minimization copy; bounds of the binaries narrow per node.
    lp::Model base = milp.model;
    if (maximize) {
        base.sense = lp::Sense::Minimize;
        for (auto& c : base.obj) c = -c;
    }
    for (int j : milp.binaries) {
        base.lower[static_cast<size_t>(j)] = 0.0;
        base.upper[static_cast<size_t>(j)] = 1.0;
    }

    lp::DualizedModel dd = lp::dualize(base);

    struct Node {
        double bound = 0.0;  // minimization bound
        uint32_t fixed_mask = 0;
        uint32_t fixed_vals = 0;
        long long id = 0;
        std::shared_ptr<lp::Basis> warm;
    };
    struct NodeOrder {
        bool operator()(const Node& a, const Node& b) const {
            if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
            return a.id > b.id;
        }
    };

    // Solving a node: fix binaries per mask by rewriting the dual objective
    // coefficients of the bound multipliers l*v - u*w.
    auto solve_node = [&](const Node& node, lp::Solution& out) {
        lp::Model dual = dd.dual;
        for (size_t k = 0; k < milp.binaries.size(); ++k) {
            if (!(node.fixed_mask & (1u << k))) continue;
            double val = (node.fixed_vals & (1u << k)) ? 1.0 : 0.0;
            int j = milp.binaries[k];
            int v = dd.v_of_var[static_cast<size_t>(j)];
            int w = dd.w_of_var[static_cast<size_t>(j)];
            dual.obj[static_cast<size_t>(v)] = val;    // lower bound value
            dual.obj[static_cast<size_t>(w)] = -val;   // minus upper bound value
        }
        lp::SolveOptions so;
        so.allow_dualize = false;
        if (node.warm) so.warm = node.warm.get();
        out = lp::solve(dual, so);
        if (out.status == lp::Status::IterationLimit) fail(ErrorCode::NumericalFailure, "node LP hit iteration cap");
    };

    auto recover_x = [&](const lp::Solution& ds) {
        std::vector<double> x(static_cast<size_t>(base.num_vars()), 0.0);
        for (int j = 0; j < base.num_vars(); ++j)
            x[static_cast<size_t>(j)] = ds.row_duals[static_cast<size_t>(dd.row_of_var[static_cast<size_t>(j)])];
        return x;
    };

    MilpResult result;
    double incumbent = std::numeric_limits<double>::infinity();  // min orientation
    std::vector<double> incumbent_x;
    bool have_incumbent = false;

    if (opts.hint && opts.hint->size() == milp.binaries.size() && !milp.binaries.empty()) {
        Node leaf;
        leaf.fixed_mask = milp.binaries.size() >= 32 ? 0xFFFFFFFFu
                                                     : (uint32_t{1} << milp.binaries.size()) - 1;
        for (size_t k = 0; k < milp.binaries.size(); ++k)
            if ((*opts.hint)[k] > 0.5) leaf.fixed_vals |= (1u << k);
        lp::Solution ls;
        solve_node(leaf, ls);
        if (ls.status == lp::Status::Optimal) {
            incumbent = ls.value;
            incumbent_x = recover_x(ls);
            for (size_t k = 0; k < milp.binaries.size(); ++k)
                incumbent_x[static_cast<size_t>(milp.binaries[k])] = (leaf.fixed_vals & (1u << k)) ? 1.0 : 0.0;
            have_incumbent = true;
        }
    }

    // The node relaxation is solved through the dual: a dual-unbounded node
    // is a primal-infeasible branch; a dual-infeasible node needs one primal
    // feasibility run to tell "branch infeasible" from "MILP unbounded".
    auto primal_feasible = [&](const Node& node) {
        lp::Model prim = base;
        for (size_t k = 0; k < milp.binaries.size(); ++k) {
            if (!(node.fixed_mask & (1u << k))) continue;
            double val = (node.fixed_vals & (1u << k)) ? 1.0 : 0.0;
            prim.lower[static_cast<size_t>(milp.binaries[k])] = val;
            prim.upper[static_cast<size_t>(milp.binaries[k])] = val;
        }
        lp::SolveOptions so;
        so.phase1_only = true;
        so.allow_dualize = false;
        return lp::solve(prim, so).status == lp::Status::Optimal;
    };

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long long next_id = 0;
    {
        Node root;
        root.id = next_id++;
        lp::Solution rs;
        solve_node(root, rs);
        ++result.nodes;
        if (rs.status == lp::Status::Unbounded) {
            result.status = lp::Status::Infeasible;
            return result;
        }
        if (rs.status == lp::Status::Infeasible) {
            result.status = primal_feasible(root) ? lp::Status::Unbounded : lp::Status::Infeasible;
            if (result.status == lp::Status::Unbounded || !have_incumbent) return result;
        }
        if (rs.status == lp::Status::Optimal) {
            root.bound = rs.value;
            root.warm = std::make_shared<lp::Basis>(rs.basis);
            open.push(root);
        }
    }

    auto node_fractional = [&](const std::vector<double>& x, const Node& node) {
        for (size_t k = 0; k < milp.binaries.size(); ++k) {
            double v = x[static_cast<size_t>(milp.binaries[k])];
            if (node.fixed_mask & (1u << k)) continue;
            if (std::abs(v - std::round(v)) > opts.int_tol) return static_cast<int>(k);
        }
        return -1;
    };

    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (have_incumbent && node.bound > incumbent - 1e-9) continue;
        if (result.nodes >= opts.max_nodes) fail(ErrorCode::GuardExceeded, "branch-and-bound node cap");

        lp::Solution ls;
        solve_node(node, ls);
        ++result.nodes;
        if (ls.status == lp::Status::Infeasible && primal_feasible(node)) {
            result.status = lp::Status::Unbounded;
            return result;
        }
        if (ls.status != lp::Status::Optimal) continue;  // infeasible branch
        if (have_incumbent && ls.value > incumbent - 1e-9) continue;
        std::vector<double> x = recover_x(ls);
        int frac = node_fractional(x, node);
        if (frac < 0) {
            // Integral: round the binaries exactly and accept as incumbent.
            for (size_t k = 0; k < milp.binaries.size(); ++k) {
                double& v = x[static_cast<size_t>(milp.binaries[k])];
                if (node.fixed_mask & (1u << k)) v = (node.fixed_vals & (1u << k)) ? 1.0 : 0.0;
                else v = std::round(v);
            }
            bool better = !have_incumbent || ls.value < incumbent - 1e-9;
            bool tie = have_incumbent && std::abs(ls.value - incumbent) <= 1e-9;
            if (better || (tie && milp_detail::mask_less(x, incumbent_x, milp.binaries, opts.int_tol))) {
                incumbent = better ? ls.value : std::min(incumbent, ls.value);
                incumbent_x = x;
                have_incumbent = true;
            }
            continue;
        }
        for (int branch_val : {0, 1}) {  // floor branch first
            Node child = node;
            child.id = next_id++;
            child.fixed_mask |= (1u << frac);
            if (branch_val)
                child.fixed_vals |= (1u << frac);
            else
                child.fixed_vals &= ~(1u << frac);
            child.bound = ls.value;
            child.warm = std::make_shared<lp::Basis>(ls.basis);
            open.push(child);
        }
    }

    if (!have_incumbent) {
        result.status = lp::Status::Infeasible;
        return result;
    }
    result.status = lp::Status::Optimal;
    result.value = maximize ? -incumbent : incumbent;
    result.x = std::move(incumbent_x);
    return result;
}

class BuiltinMilpBackend : public MilpBackend {
  public:
    MilpResult solve(const MilpModel& milp, const MilpOptions& opts) override { return solve_milp(milp, opts); }
};

}  // namespace roam

#endif  // ROAM_MILP_HPP
