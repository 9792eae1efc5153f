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

#ifndef ROAM_RANKING_HPP
#define ROAM_RANKING_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "roam/common.hpp"
#include "roam/instance.hpp"

namespace roam {

/// A preference ranking over {0,...,n}: sigma[i] is the rank of product i,
/// lower rank preferred. Stored as the full position array.
class Ranking {
  public:
    Ranking() = default;
    explicit Ranking(std::vector<int> ranks) : ranks_(std::move(ranks)) { check(); }

    /// Builds a ranking from a preference order (most preferred first).
    static Ranking from_order(const std::vector<int>& order) {
        std::vector<int> ranks(order.size());
        for (int pos = 0; pos < static_cast<int>(order.size()); ++pos)
            ranks[static_cast<size_t>(order[static_cast<size_t>(pos)])] = pos;
        return Ranking(std::move(ranks));
    }

    int rank_of(int product) const { return ranks_[static_cast<size_t>(product)]; }
    int num_products() const { return static_cast<int>(ranks_.size()) - 1; }
    const std::vector<int>& ranks() const { return ranks_; }

    bool prefers(int i, int j) const { return rank_of(i) < rank_of(j); }

    bool operator==(const Ranking& other) const { return ranks_ == other.ranks_; }
    bool operator<(const Ranking& other) const { return ranks_ < other.ranks_; }

  private:
    void check() const {
        std::vector<char> seen(ranks_.size(), 0);
        for (int r : ranks_) {
            if (r < 0 || r >= static_cast<int>(ranks_.size()) || seen[static_cast<size_t>(r)])
                fail(ErrorCode::BadInput, "sigma is not a permutation");
            seen[static_cast<size_t>(r)] = 1;
        }
    }

    std::vector<int> ranks_;
};

/// The product a customer with ranking sigma buys from assortment S.
inline int top_choice(const Ranking& sigma, const Assortment& s) {
    int best = -1;
    int best_rank = std::numeric_limits<int>::max();
    for (int i : s.members()) {
        int r = sigma.rank_of(i);
        if (r < best_rank) {
            best_rank = r;
            best = i;
        }
    }
    if (best < 0) fail(ErrorCode::BadInput, "empty assortment");
    return best;
}

/// Sparse ranking-based choice model: a list of (ranking, weight) atoms with
/// strictly positive weights summing to one.
struct RankingModel {
    std::vector<std::pair<Ranking, double>> atoms;

    void check() const {
        double total = 0.0;
        for (const auto& [sigma, w] : atoms) {
            if (!(w > 0.0)) fail(ErrorCode::BadInput, "atom weights must be positive");
            total += w;
        }
        if (std::abs(total - 1.0) > kSumTol) fail(ErrorCode::BadInput, "atom weights must sum to one");
        for (size_t a = 0; a < atoms.size(); ++a)
            for (size_t b = a + 1; b < atoms.size(); ++b)
                if (atoms[a].first == atoms[b].first) fail(ErrorCode::BadInput, "duplicate ranking atom");
    }
};

/// Predicted purchase frequencies D^lambda(S) over {0,...,n}.
inline std::vector<double> demand(const RankingModel& model, const Assortment& s, int n) {
    std::vector<double> d(static_cast<size_t>(n) + 1, 0.0);
    for (const auto& [sigma, w] : model.atoms) d[static_cast<size_t>(top_choice(sigma, s))] += w;
    return d;
}

inline double expected_revenue(const RankingModel& model, const std::vector<double>& revenues, const Assortment& s) {
    double total = 0.0;
    for (const auto& [sigma, w] : model.atoms) total += w * revenues[static_cast<size_t>(top_choice(sigma, s))];
    return total;
}

struct ConsistencyResidual {
    std::vector<std::vector<double>> epsilon;  // epsilon[m][i] for i in S_m, 0 elsewhere
    double norm_value = 0.0;

    bool within(double eta) const { return norm_value <= eta + kSumTol; }
};

/// Residuals D^lambda(S_m) - v_m and their norm under the instance's norm.
inline ConsistencyResidual consistency_residual(const RankingModel& model, const Instance& inst) {
    ConsistencyResidual out;
    double l1 = 0.0, linf = 0.0;
    for (int m = 0; m < inst.num_assortments(); ++m) {
        std::vector<double> d = demand(model, inst.past[static_cast<size_t>(m)], inst.n);
        std::vector<double> eps(static_cast<size_t>(inst.n) + 1, 0.0);
        for (int i : inst.past[static_cast<size_t>(m)].members()) {
            double e = d[static_cast<size_t>(i)] - inst.v[static_cast<size_t>(m)][static_cast<size_t>(i)];
            eps[static_cast<size_t>(i)] = e;
            l1 += std::abs(e);
            linf = std::max(linf, std::abs(e));
        }
        out.epsilon.push_back(std::move(eps));
    }
    out.norm_value = inst.norm == Norm::L1 ? l1 : linf;
    return out;
}

/// Visits all (n+1)! rankings in lexicographic order of the position array.
/// Guarded to n <= 8.
inline void enumerate_rankings(int n, const std::function<void(const Ranking&)>& visit) {
    if (n > 8) fail(ErrorCode::TooLarge, "ranking enumeration limited to n <= 8");
    std::vector<int> ranks(static_cast<size_t>(n) + 1);
    std::iota(ranks.begin(), ranks.end(), 0);
    do {
        visit(Ranking(ranks));
    } while (std::next_permutation(ranks.begin(), ranks.end()));
}

inline std::vector<Ranking> all_rankings(int n) {
    std::vector<Ranking> out;
    enumerate_rankings(n, [&](const Ranking& r) { out.push_back(r); });
    return out;
}

}  // namespace roam

#endif  // ROAM_RANKING_HPP
