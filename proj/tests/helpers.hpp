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

#ifndef ROAM_TESTS_HELPERS_HPP
#define ROAM_TESTS_HELPERS_HPP

#include <vector>

#include "roam/instance.hpp"
#include "roam/ranking.hpp"

namespace roam::testing {

/// The worked four-product instance: r = (10, 20, 30, 100),
/// S_1 = {0,2,3,4} with v_1 = (.3, ., .3, .3, .1),
/// S_2 = {0,1,2,4} with v_2 = (.3, .3, .1, ., .3), eta = 0.
inline Instance worked_instance(Norm norm = Norm::LInf, double eta = 0.0) {
    RawInstance raw;
    raw.n = 4;
    raw.revenues = {10, 20, 30, 100};
    raw.past_assortments = {{0, 2, 3, 4}, {0, 1, 2, 4}};
    raw.sales = {{{0, 0.3}, {2, 0.3}, {3, 0.3}, {4, 0.1}}, {{0, 0.3}, {1, 0.3}, {2, 0.1}, {4, 0.3}}};
    raw.eta = eta;
    raw.norm = norm;
    return validate_instance(raw);
}

inline Assortment make_assortment(int n, std::initializer_list<int> items) {
    Assortment s(n);
    for (int i : items) s.insert(i);
    return s;
}

/// Ranking from a partial preference prefix over {0,...,n}; unlisted
/// products follow in ascending order (they sit below the prefix).
inline Ranking ranking_prefix(int n, std::initializer_list<int> prefix) {
    std::vector<int> order(prefix);
    std::vector<char> used(static_cast<size_t>(n) + 1, 0);
    for (int i : order) used[static_cast<size_t>(i)] = 1;
    for (int i = 0; i <= n; ++i)
        if (!used[static_cast<size_t>(i)]) order.push_back(i);
    return Ranking::from_order(order);
}

/// The five-atom model fitting the worked instance's data exactly.
inline RankingModel worked_model_hat() {
    RankingModel m;
    m.atoms = {
        {ranking_prefix(4, {0}), 0.3},
        {ranking_prefix(4, {1, 2, 4, 0}), 0.2},
        {ranking_prefix(4, {1, 4, 0}), 0.1},
        {ranking_prefix(4, {2, 4, 0}), 0.1},
        {ranking_prefix(4, {3, 4, 0}), 0.3},
    };
    m.check();
    return m;
}

/// The seven-atom model that also fits the data but values {0,4} at 30.
inline RankingModel worked_model_bar() {
    RankingModel m;
    m.atoms = {
        {ranking_prefix(4, {0}), 0.2},
        {ranking_prefix(4, {1, 0}), 0.1},
        {ranking_prefix(4, {2, 0}), 0.1},
        {ranking_prefix(4, {3, 0}), 0.1},
        {ranking_prefix(4, {4, 0}), 0.1},
        {ranking_prefix(4, {1, 2, 0}), 0.2},
        {ranking_prefix(4, {3, 4, 0}), 0.2},
    };
    m.check();
    return m;
}

}  // namespace roam::testing

#endif  // ROAM_TESTS_HELPERS_HPP
