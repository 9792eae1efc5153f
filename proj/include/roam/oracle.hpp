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

#ifndef ROAM_ORACLE_HPP
#define ROAM_ORACLE_HPP

#include <algorithm>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "roam/common.hpp"
#include "roam/instance.hpp"
#include "roam/lp.hpp"
#include "roam/ranking.hpp"
#include "roam/tuples.hpp"

namespace roam {

// Brute-force recomputations straight from the definitions over the full
// ranking space (or all assortments). These share no code with the fast
// paths they check: tuples come from top choices of enumerated rankings and
// the worst case comes from an LP with one column per ranking.

/// L recomputed by collecting the top-choice tuple of every ranking.
inline FeasibleTupleSet oracle_feasible_tuples(const Instance& inst) {
    if (inst.n > 6) fail(ErrorCode::TooLarge, "oracle limited to n <= 6");
    std::set<Tuple> seen;
    enumerate_rankings(inst.n, [&](const Ranking& sigma) {
        Tuple t;
        for (const auto& s : inst.past) t.push_back(top_choice(sigma, s));
        seen.insert(std::move(t));
    });
    FeasibleTupleSet out;
    out.tuples.assign(seen.begin(), seen.end());
    out.build_index(inst.num_assortments(), inst.n);
    return out;
}

/// rho recomputed per its definition: the cheapest product of S that is the
/// top choice of some ranking inducing the tuple.
inline double oracle_rho(const Tuple& tuple, const Assortment& s, const Instance& inst) {
    if (inst.n > 6) fail(ErrorCode::TooLarge, "oracle limited to n <= 6");
    double best = std::numeric_limits<double>::infinity();
    enumerate_rankings(inst.n, [&](const Ranking& sigma) {
        for (int m = 0; m < inst.num_assortments(); ++m)
            if (top_choice(sigma, inst.past[static_cast<size_t>(m)]) != tuple[static_cast<size_t>(m)]) return;
        best = std::min(best, inst.revenues[static_cast<size_t>(top_choice(sigma, s))]);
    });
    if (!(best < std::numeric_limits<double>::infinity()))
        fail(ErrorCode::EmptyMinimum, "no ranking induces the tuple");
    return best;
}

inline double oracle_rho_max(const Tuple& tuple, const Assortment& s, const Instance& inst) {
    if (inst.n > 6) fail(ErrorCode::TooLarge, "oracle limited to n <= 6");
    double best = -1.0;
    enumerate_rankings(inst.n, [&](const Ranking& sigma) {
        for (int m = 0; m < inst.num_assortments(); ++m)
            if (top_choice(sigma, inst.past[static_cast<size_t>(m)]) != tuple[static_cast<size_t>(m)]) return;
        best = std::max(best, inst.revenues[static_cast<size_t>(top_choice(sigma, s))]);
    });
    if (best < 0.0) fail(ErrorCode::EmptyMinimum, "no ranking induces the tuple");
    return best;
}

namespace oracle_detail {

/// LP over one lambda_sigma per ranking, marginal rows from the definitions.
inline lp::Model ranking_space_lp(const Instance& inst, const Assortment& s, bool best_case) {
    lp::Model m;
    m.sense = best_case ? lp::Sense::Maximize : lp::Sense::Minimize;
    std::vector<Ranking> rankings = all_rankings(inst.n);
    const double scale = inst.top_revenue();
    for (const auto& sigma : rankings)
        m.add_var(0.0, lp::kInf, inst.revenues[static_cast<size_t>(top_choice(sigma, s))] / scale);

    std::vector<int> eps_vars;
    std::vector<std::vector<std::pair<int, double>>> marginal_rows;
    for (int mm = 0; mm < inst.num_assortments(); ++mm)
        for (int i : inst.past[static_cast<size_t>(mm)].members()) {
            std::vector<std::pair<int, double>> row;
            for (int k = 0; k < static_cast<int>(rankings.size()); ++k)
                if (top_choice(rankings[static_cast<size_t>(k)], inst.past[static_cast<size_t>(mm)]) == i)
                    row.push_back({k, 1.0});
            int e = m.add_var(-lp::kInf, lp::kInf, 0.0);
            eps_vars.push_back(e);
            row.push_back({e, -1.0});
            m.add_row(lp::Rel::EQ, inst.v[static_cast<size_t>(mm)][static_cast<size_t>(i)], std::move(row));
        }
    std::vector<std::pair<int, double>> ones;
    for (int k = 0; k < static_cast<int>(rankings.size()); ++k) ones.push_back({k, 1.0});
    m.add_row(lp::Rel::EQ, 1.0, std::move(ones));
    lp::linearize_norm_ball(m, eps_vars, inst.norm == Norm::L1 ? lp::NormKind::L1 : lp::NormKind::LInf, inst.eta);
    return m;
}

}  // namespace oracle_detail

/// Worst-case expected revenue straight from the full-ranking-space LP.
inline double oracle_worst_case(const Instance& inst, const Assortment& s) {
    if (inst.n > 5) fail(ErrorCode::TooLarge, "ranking-space LP limited to n <= 5");
    lp::Solution sol = lp::solve(oracle_detail::ranking_space_lp(inst, s, false));
    if (sol.status != lp::Status::Optimal) fail(ErrorCode::InconsistentData, "empty consistency set");
    return sol.value * inst.top_revenue();
}

inline double oracle_best_case(const Instance& inst, const Assortment& s) {
    if (inst.n > 5) fail(ErrorCode::TooLarge, "ranking-space LP limited to n <= 5");
    lp::Solution sol = lp::solve(oracle_detail::ranking_space_lp(inst, s, true));
    if (sol.status != lp::Status::Optimal) fail(ErrorCode::InconsistentData, "empty consistency set");
    return sol.value * inst.top_revenue();
}

/// Minimal radius by bisection on eta (retained as a check of the direct LP).
inline double oracle_min_radius_bisection(const Instance& inst, double hi = 2.0, double tol = 1e-9) {
    if (inst.n > 5) fail(ErrorCode::TooLarge, "ranking-space LP limited to n <= 5");
    auto feasible = [&](double eta) {
        Instance trial = inst;
        trial.eta = eta;
        lp::Model m = oracle_detail::ranking_space_lp(trial, trial.full_assortment(), false);
        lp::SolveOptions so;
        so.phase1_only = true;
        return lp::solve(m, so).status == lp::Status::Optimal;
    };
    double lo = 0.0;
    if (feasible(0.0)) return 0.0;
    while (!feasible(hi)) hi *= 2.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

/// All robust-optimal assortments over every subset containing 0.
inline std::pair<std::vector<Assortment>, double> oracle_ro(const Instance& inst) {
    if (inst.n > 5) fail(ErrorCode::TooLarge, "assortment enumeration limited to n <= 5");
    double best = -1.0;
    std::vector<std::pair<Assortment, double>> table;
    for (uint64_t mask = 0; mask < (uint64_t{1} << inst.n); ++mask) {
        Assortment s(inst.n);
        s.insert(0);
        for (int i = 1; i <= inst.n; ++i)
            if ((mask >> (i - 1)) & 1) s.insert(i);
        double wc = oracle_worst_case(inst, s);
        table.push_back({s, wc});
        best = std::max(best, wc);
    }
    std::vector<Assortment> winners;
    for (auto& [s, wc] : table)
        if (wc >= best - 1e-6) winners.push_back(s);
    std::sort(winners.begin(), winners.end());
    return {winners, best};
}

}  // namespace roam

#endif  // ROAM_ORACLE_HPP
