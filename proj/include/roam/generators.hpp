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

#ifndef ROAM_GENERATORS_HPP
#define ROAM_GENERATORS_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "roam/common.hpp"
#include "roam/instance.hpp"
#include "roam/ranking.hpp"
#include "roam/rng.hpp"

namespace roam {

enum class GeneratorKind { RevenueOrdered, TwoAssortments, Nested, Adversarial };

struct GeneratorParams {
    int n = 4;
    int m = 0;        // nested: number of past assortments (defaults to a spread)
    int k = 10;       // sparse model support size (two/nested kinds)
    std::vector<int> sbar;  // adversarial: the target assortment (must contain 0 and n)
    double eta = 0.0;
    Norm norm = Norm::LInf;
};

struct GeneratedInstance {
    Instance instance;
    RankingModel base_model;  // empty atoms for the adversarial kind
};

namespace gen_detail {

/// Dense base model over all (n+1)! rankings, weighted by the log-uniform
/// simplex draw. Guarded by the enumeration limit.
inline RankingModel dense_model(Rng& rng, int n) {
    std::vector<Ranking> rankings = all_rankings(n);
    std::vector<double> w = rng.simplex(static_cast<int>(rankings.size()));
    RankingModel model;
    for (size_t k = 0; k < rankings.size(); ++k) model.atoms.push_back({rankings[k], w[k]});
    return model;
}

/// K distinct rankings drawn uniformly, then weighted on the K-simplex.
/// Fisher-Yates draws with a redraw on collision: collisions are already
/// vanishing at the sizes where sparsity matters, so no rejection cascade
/// ever happens in practice.
inline RankingModel sparse_model(Rng& rng, int n, int k) {
    std::set<std::vector<int>> seen;
    std::vector<Ranking> picks;
    while (static_cast<int>(picks.size()) < k) {
        std::vector<int> perm = rng.permutation(n + 1);
        if (seen.insert(perm).second) picks.push_back(Ranking(perm));
    }
    std::vector<double> w = rng.simplex(k);
    RankingModel model;
    for (int a = 0; a < k; ++a) model.atoms.push_back({picks[static_cast<size_t>(a)], w[static_cast<size_t>(a)]});
    return model;
}

inline std::vector<double> distinct_unit_revenues(Rng& rng, int n) {
    std::set<double> revs;
    while (static_cast<int>(revs.size()) < n) {
        double r = rng.uniform();
        if (r > 0.0) revs.insert(r);
    }
    return {revs.begin(), revs.end()};
}

inline std::vector<double> distinct_integer_revenues(Rng& rng, int n, int hi) {
    std::set<int> revs;
    while (static_cast<int>(revs.size()) < n) revs.insert(1 + static_cast<int>(rng.uniform_below(static_cast<uint64_t>(hi))));
    std::vector<double> out;
    for (int r : revs) out.push_back(static_cast<double>(r));
    return out;
}

inline void fill_sales_from_model(RawInstance& raw, const RankingModel& model) {
    raw.sales.clear();
    for (const auto& members : raw.past_assortments) {
        Assortment s(raw.n);
        for (int i : members) s.insert(i);
        std::vector<double> d = demand(model, s, raw.n);
        std::map<int, double> freq;
        for (int i : members) freq[i] = std::min(1.0, d[static_cast<size_t>(i)]);
        raw.sales.push_back(std::move(freq));
    }
}

}  // namespace gen_detail

/// Deterministic instance construction from (kind, params, seed). Simulation
/// kinds produce sales that are exactly the base model's demand, so the
/// minimal consistency radius is zero by construction.
inline GeneratedInstance generate(GeneratorKind kind, const GeneratorParams& params, uint64_t seed) {
    Rng rng(seed);
    const int n = params.n;
    if (n < 1) fail(ErrorCode::BadParams, "n must be positive");
    RawInstance raw;
    raw.n = n;
    raw.eta = params.eta;
    raw.norm = params.norm;
    GeneratedInstance out;

    switch (kind) {
        case GeneratorKind::RevenueOrdered: {
            if (n > 7) fail(ErrorCode::BadParams, "dense base models need n <= 7");
            raw.revenues = gen_detail::distinct_unit_revenues(rng, n);
            for (int m = 1; m <= n; ++m) {
                std::vector<int> s = {0};
                for (int i = m; i <= n; ++i) s.push_back(i);
                raw.past_assortments.push_back(s);
            }
            out.base_model = gen_detail::dense_model(rng, n);
            gen_detail::fill_sales_from_model(raw, out.base_model);
            break;
        }
        case GeneratorKind::TwoAssortments: {
            raw.revenues = gen_detail::distinct_unit_revenues(rng, n);
            std::vector<int> s1 = {0, n}, s2 = {0, n};
            for (int j = 1; j <= n - 1; ++j) {
                double u = rng.uniform();
                if (u < 1.0 / 3.0) {
                    s1.push_back(j);
                    s2.push_back(j);
                } else if (u < 2.0 / 3.0) {
                    s1.push_back(j);
                } else {
                    s2.push_back(j);
                }
            }
            std::sort(s1.begin(), s1.end());
            std::sort(s2.begin(), s2.end());
            raw.past_assortments = {s1, s2};
            out.base_model = gen_detail::sparse_model(rng, n, params.k);
            gen_detail::fill_sales_from_model(raw, out.base_model);
            break;
        }
        case GeneratorKind::Nested: {
            int m_count = params.m > 0 ? params.m : std::min(4, n);
            if (m_count < 1 || m_count > n) fail(ErrorCode::BadParams, "need 1 <= M <= n");
            raw.revenues = gen_detail::distinct_integer_revenues(rng, n, 10000);
            std::vector<int> perm = rng.permutation(n);  // 0..n-1 representing products 1..n
            std::set<int> cuts;
            while (static_cast<int>(cuts.size()) < m_count - 1)
                cuts.insert(1 + static_cast<int>(rng.uniform_below(static_cast<uint64_t>(n) - 1)));
            std::vector<int> q(cuts.begin(), cuts.end());
            q.push_back(n);  // S_M = everything
            for (int m = 0; m < m_count; ++m) {
                std::vector<int> s = {0};
                for (int k = 0; k < q[static_cast<size_t>(m)]; ++k) s.push_back(perm[static_cast<size_t>(k)] + 1);
                std::sort(s.begin(), s.end());
                raw.past_assortments.push_back(s);
            }
            out.base_model = gen_detail::sparse_model(rng, n, params.k);
            gen_detail::fill_sales_from_model(raw, out.base_model);
            break;
        }
        case GeneratorKind::Adversarial: {
            Assortment sbar(n);
            if (params.sbar.empty()) {
                sbar.insert(0);
                sbar.insert(n);
                for (int i = 1; i < n; ++i)
                    if (rng.uniform() < 0.5) sbar.insert(i);
            } else {
                for (int i : params.sbar) sbar.insert(i);
            }
            if (!sbar.contains(0) || !sbar.contains(n))
                fail(ErrorCode::BadParams, "target assortment must contain 0 and n");
            raw.revenues = gen_detail::distinct_integer_revenues(rng, n, 10000);
            for (int m = 1; m <= n; ++m) {
                std::vector<int> members = {0, n};
                for (int i = 1; i < m; ++i) members.push_back(i);
                std::sort(members.begin(), members.end());
                raw.past_assortments.push_back(members);
                std::map<int, double> freq;
                int inter = 0, diff = 0;
                for (int j = m; j <= n - 1; ++j) (sbar.contains(j) ? inter : diff)++;
                freq[0] = static_cast<double>(inter) / n;
                freq[n] = (1.0 + static_cast<double>(diff)) / n;
                for (int i = 1; i < m; ++i) freq[i] = 1.0 / n;
                raw.sales.push_back(std::move(freq));
            }
            break;
        }
    }
    out.instance = validate_instance(raw);
    return out;
}

inline GeneratorKind parse_generator_kind(const std::string& name) {
    if (name == "revordered") return GeneratorKind::RevenueOrdered;
    if (name == "two") return GeneratorKind::TwoAssortments;
    if (name == "nested") return GeneratorKind::Nested;
    if (name == "adversarial") return GeneratorKind::Adversarial;
    fail(ErrorCode::BadParams, "unknown generator kind \"" + name + "\"");
}

}  // namespace roam

#endif  // ROAM_GENERATORS_HPP
