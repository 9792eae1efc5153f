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

#ifndef ROAM_EXPERIMENTS_HPP
#define ROAM_EXPERIMENTS_HPP

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "roam/generators.hpp"
#include "roam/solver.hpp"

namespace roam {

// Experiment drivers behind the `experiment` CLI subcommand. Each emits one
// CSV (documented column sets; see the README) and is reproducible
// bit-for-bit from its master seed: replication k uses Rng::stream(seed, k).

struct ExperimentParams {
    int reps = 100;
    uint64_t seed = 1;
    int n = 0;  // 0 = the desk-scale default of the experiment
    int m = 0;
    int k = 0;
    int grid = 101;
};

namespace exp_detail {

inline uint64_t rep_seed(uint64_t master, int rep) {
    Rng derive = Rng::stream(master, static_cast<uint64_t>(rep));
    return derive.next_u64();
}

}  // namespace exp_detail

/// Estimate-then-optimize on revenue-ordered histories: worst/best case of
/// the recommended assortment against the best past revenue.
/// Columns: rep,best_past,worst_new,best_new
inline std::string run_fig1_2(const ExperimentParams& params) {
    std::ostringstream csv;
    csv << "rep,best_past,worst_new,best_new\n";
    int n = params.n > 0 ? params.n : 4;
    for (int rep = 0; rep < params.reps; ++rep) {
        uint64_t seed = exp_detail::rep_seed(params.seed, rep);
        GeneratorParams gp;
        gp.n = n;
        GeneratedInstance gen = generate(GeneratorKind::RevenueOrdered, gp, seed);
        EtoResult eto = eto_baseline(gen.instance, seed ^ 0x9e3779b97f4a7c15ULL);
        csv << rep << "," << eto.best_past << "," << eto.worst << "," << eto.best << "\n";
    }
    return csv.str();
}

/// Robust optimization on two-assortment histories with sparse base models.
/// Columns: rep,best_past,worst_new,best_new
inline std::string run_fig3(const ExperimentParams& params) {
    std::ostringstream csv;
    csv << "rep,best_past,worst_new,best_new\n";
    int n = params.n > 0 ? params.n : 10;
    int k = params.k > 0 ? params.k : 10;
    for (int rep = 0; rep < params.reps; ++rep) {
        uint64_t seed = exp_detail::rep_seed(params.seed, rep);
        GeneratorParams gp;
        gp.n = n;
        gp.k = k;
        GeneratedInstance gen = generate(GeneratorKind::TwoAssortments, gp, seed);
        SolveReport report = solve_ro(gen.instance, SolveMethod::Auto, false);
        double best_new = best_case_revenue(restrict_to_offered(gen.instance), report.optimal).value;
        csv << rep << "," << report.best_past << "," << report.value << "," << best_new << "\n";
    }
    return csv.str();
}

/// Timing of the two-assortment solve as n grows (K = 1000 base models).
/// Columns: rep,n,seconds
inline std::string run_fig4(const ExperimentParams& params) {
    std::ostringstream csv;
    csv << "rep,n,seconds\n";
    int n_hi = params.n > 0 ? params.n : 40;
    int k = params.k > 0 ? params.k : 1000;
    for (int n = 10; n <= n_hi; n += 10) {
        for (int rep = 0; rep < std::max(1, params.reps / 20); ++rep) {
            uint64_t seed = exp_detail::rep_seed(params.seed, n * 1000 + rep);
            GeneratorParams gp;
            gp.n = n;
            gp.k = k;
            GeneratedInstance gen = generate(GeneratorKind::TwoAssortments, gp, seed);
            SolveReport report = solve_ro(gen.instance, SolveMethod::TwoFlow, false);
            csv << rep << "," << n << "," << report.seconds << "\n";
        }
    }
    return csv.str();
}

/// Timing of the nested MILP as M grows.
/// Columns: rep,m,seconds
inline std::string run_fig5(const ExperimentParams& params) {
    std::ostringstream csv;
    csv << "rep,m,seconds\n";
    int n = params.n > 0 ? params.n : 10;
    int m_hi = params.m > 0 ? params.m : std::min(10, n);
    int k = params.k > 0 ? params.k : 80;
    for (int m = 2; m <= m_hi; m += 2) {
        for (int rep = 0; rep < std::max(1, params.reps / 20); ++rep) {
            uint64_t seed = exp_detail::rep_seed(params.seed, m * 1000 + rep);
            GeneratorParams gp;
            gp.n = n;
            gp.m = m;
            gp.k = k;
            GeneratedInstance gen = generate(GeneratorKind::Nested, gp, seed);
            SolveReport report = solve_ro(gen.instance, SolveMethod::NestedMilp, false);
            csv << rep << "," << m << "," << report.seconds << "\n";
        }
    }
    return csv.str();
}

/// Pareto frontiers for the three nested history families: revenue-ordered,
/// reverse revenue-ordered, and a structured five-assortment chain.
/// Columns: family,rep,theta_q,theta,assortment,worst,best,pi_lo,pi_hi
inline std::string run_fig6(const ExperimentParams& params) {
    std::ostringstream csv;
    csv << "family,rep,theta_q,theta,assortment,worst,best,pi_lo,pi_hi\n";
    int reps = std::max(1, params.reps / 10);
    int grid = params.grid;

    auto run_family = [&](const std::string& family, const Instance& inst, double ro_value, int rep) {
        std::vector<double> qs;
        for (int g = 0; g < grid; ++g) qs.push_back(static_cast<double>(g) / (grid - 1));
        std::vector<ParetoPoint> points = pareto_sweep(inst, qs);
        double best_past = best_past_revenue(restrict_to_offered(inst));
        for (const auto& p : points) {
            double pi_lo = 100.0 * (p.worst_case - best_past) / best_past;
            double pi_hi = 100.0 * (p.best_case - best_past) / best_past;
            std::string members;
            for (int i : p.assortment.members()) members += (members.empty() ? "" : " ") + std::to_string(i);
            csv << family << "," << rep << "," << p.theta / (ro_value > 0 ? ro_value : 1.0) << "," << p.theta << ",\""
                << members << "\"," << p.worst_case << "," << p.best_case << "," << pi_lo << "," << pi_hi << "\n";
        }
    };

    for (int rep = 0; rep < reps; ++rep) {
        uint64_t seed = exp_detail::rep_seed(params.seed, rep);

        // (a) revenue-ordered chain at n = 10 with sparse-model data
        {
            int n = params.n > 0 ? params.n : 10;
            RawInstance raw;
            raw.n = n;
            Rng rng(seed ^ 0xa5a5a5a5ULL);
            raw.revenues = gen_detail::distinct_integer_revenues(rng, n, 10000);
            RankingModel base = gen_detail::sparse_model(rng, n, params.k > 0 ? params.k : 80);
            for (int m = 1; m <= n; ++m) {
                std::vector<int> members = {0};
                for (int i = m; i <= n; ++i) members.push_back(i);
                raw.past_assortments.push_back(members);
            }
            gen_detail::fill_sales_from_model(raw, base);
            Instance inst = validate_instance(raw);
            SolveReport ro = solve_ro(inst, SolveMethod::Auto, false);
            run_family("revorder", inst, ro.value, rep);
        }
        // (b) reverse revenue-ordered via the adversarial history shape with
        // sparse-model data
        {
            int n = params.n > 0 ? params.n : 10;
            GeneratorParams gp;
            gp.n = n;
            gp.m = n;
            gp.k = params.k > 0 ? params.k : 80;
            // nested generator with M = n cuts gives the full flag chain;
            // rebuild as the reverse revenue-ordered family explicitly
            RawInstance raw;
            raw.n = n;
            Rng rng(seed);
            raw.revenues = gen_detail::distinct_integer_revenues(rng, n, 10000);
            RankingModel base = gen_detail::sparse_model(rng, n, gp.k);
            for (int m = 1; m <= n; ++m) {
                std::vector<int> members = {0, n};
                for (int i = 1; i < m; ++i) members.push_back(i);
                std::sort(members.begin(), members.end());
                raw.past_assortments.push_back(members);
            }
            gen_detail::fill_sales_from_model(raw, base);
            Instance inst = validate_instance(raw);
            SolveReport ro = solve_ro(inst, SolveMethod::Auto, false);
            run_family("revrevorder", inst, ro.value, rep);
        }
        // (c) structured nested chain (five assortments)
        {
            GeneratorParams gp;
            gp.n = params.n > 0 ? params.n : 15;
            gp.m = 5;
            gp.k = params.k > 0 ? params.k : 80;
            GeneratedInstance gen = generate(GeneratorKind::Nested, gp, seed);
            SolveReport ro = solve_ro(gen.instance, SolveMethod::Auto, false);
            run_family("nested5", gen.instance, ro.value, rep);
        }
    }
    return csv.str();
}

inline std::string run_experiment(const std::string& name, const ExperimentParams& params) {
    if (name == "fig1_2") return run_fig1_2(params);
    if (name == "fig3") return run_fig3(params);
    if (name == "fig4") return run_fig4(params);
    if (name == "fig5") return run_fig5(params);
    if (name == "fig6") return run_fig6(params);
    fail(ErrorCode::BadParams, "unknown experiment \"" + name + "\"");
}

}  // namespace roam

#endif  // ROAM_EXPERIMENTS_HPP
