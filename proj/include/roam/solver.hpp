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

#ifndef ROAM_SOLVER_HPP
#define ROAM_SOLVER_HPP

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "roam/candidates.hpp"
#include "roam/generators.hpp"
#include "roam/instance.hpp"
#include "roam/nested.hpp"
#include "roam/robust.hpp"

namespace roam {

enum class SolveMethod { Auto, ClosedForm, Brute, NestedMilp, TwoFlow };

inline const char* method_name(SolveMethod m) {
    switch (m) {
        case SolveMethod::Auto: return "auto";
        case SolveMethod::ClosedForm: return "closed-form";
        case SolveMethod::Brute: return "brute";
        case SolveMethod::NestedMilp: return "nested-milp";
        case SolveMethod::TwoFlow: return "two-flow";
    }
    return "?";
}

struct CandidateRow {
    Assortment assortment;
    double worst = 0.0;
    double best = 0.0;
    bool has_best = false;
};

struct SolveReport {
    SolveMethod method_used = SolveMethod::Auto;
    Assortment optimal;       // in the (restricted) instance's labels
    double value = 0.0;       // the robust optimum
    double best_past = 0.0;
    std::vector<CandidateRow> table;
    double seconds = 0.0;
    /// Map from the solver's internal product labels back to the labels of
    /// the instance the caller passed in (identity unless products had to be
    /// dropped as never-offered).
    std::vector<int> label_map;
};

namespace solver_detail {

inline Assortment map_back(const Assortment& s, const std::vector<int>& label_map, int n_out) {
    Assortment out(n_out);
    for (int i : s.members()) out.insert(label_map[static_cast<size_t>(i)]);
    return out;
}

inline bool better_row(double value, const Assortment& s, double best_value, const Assortment& best_s,
                       double scale) {
    if (value > best_value + 1e-9 * scale) return true;
    if (value < best_value - 1e-9 * scale) return false;
    return ProductSet::compare_masks(s, best_s) < 0;
}

}  // namespace solver_detail

/// Solves the robust problem. The automatic dispatch follows the structure:
/// revenue-ordered complete data at eta = 0 has the closed-form optimum (the
/// best past assortment); nested chains go through the MILP; two-assortment
/// instances at eta = 0 run the flow evaluation over the closed-form
/// candidate family; everything else evaluates the candidate collection by
/// LP. Ties break to the smallest assortment mask.
inline SolveReport solve_ro(const Instance& input, SolveMethod method = SolveMethod::Auto,
                            bool fill_best_column = true) {
    auto t0 = std::chrono::steady_clock::now();
    Instance inst = restrict_to_offered(input);

    // label_map: restricted label -> the caller's label space, matched
    // through the (unique) raw-file labels both instances carry.
    std::vector<int> label_map(static_cast<size_t>(inst.n) + 1, 0);
    for (int i = 0; i <= inst.n; ++i) {
        int orig = inst.original_label[static_cast<size_t>(i)];
        for (int j = 0; j < static_cast<int>(input.original_label.size()); ++j)
            if (input.original_label[static_cast<size_t>(j)] == orig) {
                label_map[static_cast<size_t>(i)] = j;
                break;
            }
    }

    StructureTag tag = classify_structure(inst);
    SolveReport report;
    report.label_map = label_map;
    report.best_past = best_past_revenue(inst);
    const double scale = inst.top_revenue();

    SolveMethod chosen = method;
    if (method == SolveMethod::Auto) {
        if (tag.kind == Structure::RevenueOrderedComplete && inst.eta == 0.0)
            chosen = SolveMethod::ClosedForm;
        else if (tag.is_nested && inst.num_assortments() >= 1)
            chosen = SolveMethod::NestedMilp;
        else if (inst.num_assortments() == 2 && inst.eta == 0.0)
            chosen = SolveMethod::TwoFlow;
        else
            chosen = SolveMethod::Brute;
    }
    report.method_used = chosen;

    switch (chosen) {
        case SolveMethod::ClosedForm: {
            if (tag.kind != Structure::RevenueOrderedComplete || inst.eta != 0.0)
                fail(ErrorCode::NotApplicable, "closed form needs revenue-ordered complete data at eta = 0");
            Assortment best_s(inst.n);
            double best = -1.0;
            for (int m = 1; m <= inst.num_assortments(); ++m) {
                double value = past_revenue(inst, m);
                const Assortment& s = inst.past[static_cast<size_t>(m - 1)];
                report.table.push_back({s, value, value, true});
                if (solver_detail::better_row(value, s, best, best_s, scale)) {
                    best = value;
                    best_s = s;
                }
            }
            report.value = best;
            report.optimal = best_s;
            break;
        }
        case SolveMethod::NestedMilp: {
            if (!tag.is_nested) fail(ErrorCode::NotNested, "nested MILP needs a chain");
            auto [s, value] = solve_ro_milp(inst);
            report.value = value;
            report.optimal = s;
            CandidateRow row{s, value, 0.0, false};
            if (fill_best_column) {
                row.best = compact_best_case(inst, s).value;
                row.has_best = true;
            }
            report.table.push_back(row);
            break;
        }
        case SolveMethod::TwoFlow: {
            if (inst.num_assortments() != 2) fail(ErrorCode::NotTwoAssortments, "two-flow needs M = 2");
            if (inst.eta != 0.0) fail(ErrorCode::NotApplicable, "two-flow needs eta = 0");
            CandidateSet cands = candidates_two(inst);
            Assortment best_s(inst.n);
            double best = -1.0;
            for (const auto& s : cands.assortments) {
                double wc = worst_case_two_flow(inst, s).value;
                CandidateRow row{s, wc, 0.0, false};
                if (fill_best_column) {
                    row.best = best_case_revenue(inst, s).value;
                    row.has_best = true;
                }
                report.table.push_back(row);
                if (solver_detail::better_row(wc, s, best, best_s, scale)) {
                    best = wc;
                    best_s = s;
                }
            }
            report.value = best;
            report.optimal = best_s;
            break;
        }
        case SolveMethod::Brute: {
            CandidateSet cands = enumerate_candidates(inst);
            Assortment best_s(inst.n);
            double best = -1.0;
            for (const auto& s : cands.assortments) {
                double wc = worst_case_revenue(inst, s).value;
                CandidateRow row{s, wc, 0.0, false};
                if (fill_best_column) {
                    row.best = best_case_revenue(inst, s).value;
                    row.has_best = true;
                }
                report.table.push_back(row);
                if (solver_detail::better_row(wc, s, best, best_s, scale)) {
                    best = wc;
                    best_s = s;
                }
            }
            report.value = best;
            report.optimal = best_s;
            break;
        }
        case SolveMethod::Auto:
            fail(ErrorCode::BadParams, "unreachable");
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

struct ParetoPoint {
    double theta = 0.0;
    Assortment assortment;
    double best_case = 0.0;
    double worst_case = 0.0;
};

enum class ParetoRoute { Auto, Milp, Enumerate };

/// Sweeps theta = q * RO over the grid and reports one point per unique
/// assortment, sorted by worst case. The enumeration route scores every
/// assortment containing 0 (the Pareto optimum need not be a candidate, so
/// the full space is required); the MILP route solves one mixed-integer
/// program per grid point and covers nested chains of any width.
inline std::vector<ParetoPoint> pareto_sweep(const Instance& input, const std::vector<double>& q_grid,
                                             ParetoRoute route = ParetoRoute::Auto,
                                             long long enumerate_cap = 4096) {
    Instance inst = restrict_to_offered(input);
    StructureTag tag = classify_structure(inst);
    SolveReport ro = solve_ro(inst, SolveMethod::Auto, false);
    const double scale = inst.top_revenue();

    ParetoRoute chosen = route;
    if (route == ParetoRoute::Auto) {
        bool enumerable = inst.n <= 24 && (1LL << inst.n) <= enumerate_cap;
        chosen = enumerable ? ParetoRoute::Enumerate : ParetoRoute::Milp;
        if (chosen == ParetoRoute::Milp && !tag.is_nested)
            fail(ErrorCode::ExplosionGuard, "no applicable route for the Pareto sweep");
    }

    std::vector<ParetoPoint> points;
    if (chosen == ParetoRoute::Enumerate) {
        if (inst.n > 24) fail(ErrorCode::TooLarge, "enumeration route limited to n <= 24");
        std::vector<CandidateRow> rows;
        for (uint64_t mask = 0; mask < (uint64_t{1} << inst.n); ++mask) {
            CandidateRow row;
            Assortment s(inst.n);
            s.insert(0);
            for (int i = 1; i <= inst.n; ++i)
                if ((mask >> (i - 1)) & 1) s.insert(i);
            row.assortment = s;
            row.worst = worst_case_revenue(inst, s).value;
            row.best = best_case_revenue(inst, s).value;
            rows.push_back(row);
        }
        for (double q : q_grid) {
            double theta = q * ro.value;
            const CandidateRow* pick = nullptr;
            for (const auto& row : rows) {
                if (row.worst < theta - 1e-9 * scale) continue;
                if (!pick || row.best > pick->best + 1e-9 * scale ||
                    (std::abs(row.best - pick->best) <= 1e-9 * scale &&
                     ProductSet::compare_masks(row.assortment, pick->assortment) < 0))
                    pick = &row;
            }
            if (!pick) continue;  // theta marginally above RO on the grid tip
            points.push_back({theta, pick->assortment, pick->best, pick->worst});
        }
    } else {
        if (!tag.is_nested) fail(ErrorCode::NotNested, "MILP route needs nested past assortments");
        for (double q : q_grid) {
            double theta = q * ro.value;
            ParetoSolution p = solve_pareto_milp(inst, std::min(theta, ro.value));
            points.push_back({theta, p.assortment, p.best_case, p.worst_case});
        }
    }

    // one point per unique assortment, sorted by worst case
    std::sort(points.begin(), points.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        if (a.worst_case != b.worst_case) return a.worst_case < b.worst_case;
        return ProductSet::compare_masks(a.assortment, b.assortment) < 0;
    });
    std::vector<ParetoPoint> unique;
    for (const auto& p : points) {
        bool seen = false;
        for (const auto& u : unique) seen |= (u.assortment == p.assortment);
        if (!seen) unique.push_back(p);
    }
    return unique;
}

struct EtoResult {
    Assortment chosen;      // S' from maximizing the estimated model
    double worst = 0.0;     // min over U of R(S')
    double best = 0.0;      // max over U of R(S')
    double best_past = 0.0;
    RankingModel estimate;
};

/// Estimate-then-optimize with an injected estimate (the random-cost LP
/// estimate lives in eto_baseline below). The optimizer enumerates all
/// assortments containing 0, so the estimate's recommendation is exact.
inline EtoResult eto_core(const Instance& inst, const RankingModel& estimate) {
    if (inst.n > 20) fail(ErrorCode::TooLarge, "assortment enumeration limited to n <= 20");
    EtoResult out;
    out.estimate = estimate;
    out.best_past = best_past_revenue(inst);
    Assortment best_s(inst.n);
    double best = -1.0;
    for (uint64_t mask = 0; mask < (uint64_t{1} << inst.n); ++mask) {
        Assortment s(inst.n);
        s.insert(0);
        for (int i = 1; i <= inst.n; ++i)
            if ((mask >> (i - 1)) & 1) s.insert(i);
        double value = expected_revenue(estimate, inst.revenues, s);
        if (value > best + 1e-12 || (value > best - 1e-12 && ProductSet::compare_masks(s, best_s) < 0)) {
            best = std::max(best, value);
            best_s = s;
        }
    }
    out.chosen = best_s;
    out.worst = worst_case_revenue(inst, best_s).value;
    out.best = best_case_revenue(inst, best_s).value;
    return out;
}

/// The full estimate-then-optimize baseline: estimate the model as the
/// minimizer of a uniformly random cost vector over the consistency set
/// (an LP over the full ranking space, guarded to n <= 6), then optimize.
inline EtoResult eto_baseline(const Instance& inst, uint64_t seed) {
    if (inst.n > 6) fail(ErrorCode::TooLarge, "full-ranking-space estimation limited to n <= 6");
    Rng rng(seed);
    std::vector<Ranking> rankings = all_rankings(inst.n);

    lp::Model m;
    std::vector<int> lambda_vars;
    for (size_t k = 0; k < rankings.size(); ++k) lambda_vars.push_back(m.add_var(0.0, lp::kInf, rng.uniform()));
    std::vector<int> eps_vars;
    for (int mm = 0; mm < inst.num_assortments(); ++mm)
        for (int i : inst.past[static_cast<size_t>(mm)].members()) {
            std::vector<std::pair<int, double>> row;
            for (size_t k = 0; k < rankings.size(); ++k)
                if (top_choice(rankings[k], inst.past[static_cast<size_t>(mm)]) == i)
                    row.push_back({lambda_vars[k], 1.0});
            int e = m.add_var(-lp::kInf, lp::kInf, 0.0);
            eps_vars.push_back(e);
            row.push_back({e, -1.0});
            m.add_row(lp::Rel::EQ, inst.v[static_cast<size_t>(mm)][static_cast<size_t>(i)], std::move(row));
        }
    std::vector<std::pair<int, double>> ones;
    for (int v : lambda_vars) ones.push_back({v, 1.0});
    m.add_row(lp::Rel::EQ, 1.0, std::move(ones));
    lp::linearize_norm_ball(m, eps_vars, inst.norm == Norm::L1 ? lp::NormKind::L1 : lp::NormKind::LInf, inst.eta);

    lp::Solution sol = lp::solve(m);
    if (sol.status != lp::Status::Optimal) fail(ErrorCode::InconsistentData, "estimation LP infeasible");
    RankingModel estimate;
    double total = 0.0;
    for (size_t k = 0; k < rankings.size(); ++k) {
        double w = sol.x[static_cast<size_t>(lambda_vars[k])];
        if (w > 1e-10) {
            estimate.atoms.push_back({rankings[k], w});
            total += w;
        }
    }
    for (auto& [sigma, w] : estimate.atoms) w /= total;
    return eto_core(inst, estimate);
}

}  // namespace roam

#endif  // ROAM_SOLVER_HPP
