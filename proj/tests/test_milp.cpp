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

#include "roam/milp.hpp"
#include "roam/rng.hpp"

using namespace roam;
using roam::lp::Rel;
using roam::lp::Sense;
using roam::lp::Status;

TEST_CASE("max x1+x2 with x1+x2 <= 1 binary", "[milp]") {
    MilpModel m;
    m.model.sense = Sense::Maximize;
    int a = m.model.add_var(0, 1, 1.0);
    int b = m.model.add_var(0, 1, 1.0);
    m.model.add_row(Rel::LE, 1.0, {{a, 1.0}, {b, 1.0}});
    m.binaries = {a, b};
    MilpResult r = solve_milp(m);
    REQUIRE(r.status == Status::Optimal);
    REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(1.0, 1e-9));
    // exactly one of the tied optima is picked, deterministically
    int chosen = (r.x[static_cast<size_t>(a)] > 0.5 ? 1 : 0) + (r.x[static_cast<size_t>(b)] > 0.5 ? 1 : 0);
    REQUIRE(chosen == 1);
}

TEST_CASE("infeasible binary system", "[milp]") {
    MilpModel m;
    int a = m.model.add_var(0, 1, 1.0);
    m.model.add_row(Rel::GE, 0.5, {{a, 1.0}});
    m.model.add_row(Rel::LE, 0.5, {{a, 1.0}});
    m.binaries = {a};
    MilpResult r = solve_milp(m);
    REQUIRE(r.status == Status::Infeasible);
}

namespace {

struct RandomMilp {
    MilpModel milp;
    int k;
};

RandomMilp random_milp(Rng& rng, int k, int extra_cont) {
    RandomMilp out;
    out.k = k;
    auto& m = out.milp.model;
    m.sense = rng.uniform() < 0.5 ? Sense::Maximize : Sense::Minimize;
    for (int j = 0; j < k; ++j) out.milp.binaries.push_back(m.add_var(0, 1, rng.uniform() * 4.0 - 2.0));
    for (int j = 0; j < extra_cont; ++j) m.add_var(0.0, 2.0, rng.uniform() * 2.0 - 1.0);
    int rows = 2 + static_cast<int>(rng.uniform_below(4));
    for (int i = 0; i < rows; ++i) {
        std::vector<std::pair<int, double>> coeffs;
        for (int j = 0; j < m.num_vars(); ++j)
            if (rng.uniform() < 0.7) coeffs.push_back({j, rng.uniform() * 4.0 - 2.0});
        if (coeffs.empty()) coeffs.push_back({0, 1.0});
        m.add_row(rng.uniform() < 0.7 ? Rel::LE : Rel::GE, rng.uniform() * 3.0, std::move(coeffs));
    }
    return out;
}

/// Exhaustive reference: tries all 2^k assignments, solving the continuous
/// remainder by LP.
std::pair<Status, double> brute_force(const MilpModel& milp) {
    int k = static_cast<int>(milp.binaries.size());
    bool maximize = milp.model.sense == Sense::Maximize;
    double best = 0.0;
    bool found = false;
    for (uint32_t mask = 0; mask < (1u << k); ++mask) {
        lp::Model fixed = milp.model;
        for (int j = 0; j < k; ++j) {
            double val = (mask >> j) & 1 ? 1.0 : 0.0;
            fixed.lower[static_cast<size_t>(milp.binaries[static_cast<size_t>(j)])] = val;
            fixed.upper[static_cast<size_t>(milp.binaries[static_cast<size_t>(j)])] = val;
        }
        lp::Solution s = lp::solve(fixed);
        if (s.status == Status::Unbounded) return {Status::Unbounded, 0.0};
        if (s.status != Status::Optimal) continue;
        if (!found || (maximize ? s.value > best : s.value < best)) best = s.value;
        found = true;
    }
    return {found ? Status::Optimal : Status::Infeasible, best};
}

}  // namespace

TEST_CASE("branch and bound matches exhaustive enumeration", "[milp][property]") {
    Rng rng(20260810);
    for (int trial = 0; trial < 120; ++trial) {
        int k = 2 + static_cast<int>(rng.uniform_below(7));
        RandomMilp rm = random_milp(rng, k, static_cast<int>(rng.uniform_below(3)));
        auto [ref_status, ref_value] = brute_force(rm.milp);
        MilpResult got = solve_milp(rm.milp);
        INFO("trial " << trial << "\n" << rm.milp.model.dump());
        REQUIRE(got.status == ref_status);
        if (ref_status == Status::Optimal) REQUIRE_THAT(got.value, Catch::Matchers::WithinAbs(ref_value, 1e-7));
    }
}

TEST_CASE("bound sandwich: milp value never beats the relaxation", "[milp][property]") {
    Rng rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        RandomMilp rm = random_milp(rng, 4, 2);
        lp::Solution relax = lp::solve(rm.milp.model);
        MilpResult got = solve_milp(rm.milp);
        if (relax.status != Status::Optimal || got.status != Status::Optimal) continue;
        if (rm.milp.model.sense == Sense::Maximize)
            REQUIRE(got.value <= relax.value + 1e-7);
        else
            REQUIRE(got.value >= relax.value - 1e-7);
    }
}

TEST_CASE("incumbent hint only prunes, never changes the answer", "[milp]") {
    Rng rng(5);
    RandomMilp rm = random_milp(rng, 6, 1);
    MilpResult plain = solve_milp(rm.milp);
    if (plain.status != Status::Optimal) return;
    std::vector<double> hint;
    for (int j : rm.milp.binaries) hint.push_back(plain.x[static_cast<size_t>(j)]);
    MilpOptions opts;
    opts.hint = &hint;
    MilpResult seeded = solve_milp(rm.milp, opts);
    REQUIRE(seeded.status == Status::Optimal);
    REQUIRE_THAT(seeded.value, Catch::Matchers::WithinAbs(plain.value, 1e-9));
    REQUIRE(seeded.nodes <= plain.nodes + 1);
}
