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

#ifndef ROAM_TUPLES_HPP
#define ROAM_TUPLES_HPP

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "roam/common.hpp"
#include "roam/instance.hpp"

namespace roam {

/// A top-choice tuple (i_1,...,i_M) with i_m in S_m.
using Tuple = std::vector<int>;

/// Directed preference graph of a tuple: vertex set {0,...,n}, one edge
/// (i, i_m) for every m and every i in S_m \ {i_m}. The tuple is realizable
/// by some ranking iff this graph is acyclic.
class TupleGraph {
  public:
    TupleGraph(const Tuple& tuple, const std::vector<Assortment>& past, int n)
        : n_(n), tuple_(tuple), past_(&past) {
        for (size_t m = 0; m < tuple.size(); ++m)
            if (!past[m].contains(tuple[m]))
                fail(ErrorCode::TupleOutOfSupport,
                     "i_" + std::to_string(m + 1) + " = " + std::to_string(tuple[m]) + " not offered");
    }

    int num_products() const { return n_; }
    const Tuple& tuple() const { return tuple_; }

    /// Outgoing edge targets of vertex i: the i_m of every assortment that
    /// offered i (excluding i itself).
    std::vector<int> out_neighbors(int i) const {
        std::vector<int> out;
        for (size_t m = 0; m < tuple_.size(); ++m)
            if ((*past_)[m].contains(i) && tuple_[m] != i) out.push_back(tuple_[m]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    bool acyclic() const {
        // Only selected vertices have incoming edges, so any cycle lives in
        // the induced subgraph on the distinct selections. Kahn's algorithm
        // on that (at most M-vertex) subgraph decides acyclicity.
        std::vector<int> sel = tuple_;
        std::sort(sel.begin(), sel.end());
        sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
        const int k = static_cast<int>(sel.size());
        std::vector<std::vector<int>> adj(static_cast<size_t>(k));
        std::vector<int> indeg(static_cast<size_t>(k), 0);
        for (int b = 0; b < k; ++b) {
            for (size_t m = 0; m < tuple_.size(); ++m) {
                if (tuple_[m] != sel[static_cast<size_t>(b)]) continue;
                for (int a = 0; a < k; ++a) {
                    if (a == b || !(*past_)[m].contains(sel[static_cast<size_t>(a)])) continue;
                    bool dup = false;
                    for (int t : adj[static_cast<size_t>(a)])
                        if (t == b) {
                            dup = true;
                            break;
                        }
                    if (!dup) {
                        adj[static_cast<size_t>(a)].push_back(b);
                        ++indeg[static_cast<size_t>(b)];
                    }
                }
            }
        }
        std::vector<int> ready;
        for (int a = 0; a < k; ++a)
            if (indeg[static_cast<size_t>(a)] == 0) ready.push_back(a);
        int removed = 0;
        while (!ready.empty()) {
            int a = ready.back();
            ready.pop_back();
            ++removed;
            for (int b : adj[static_cast<size_t>(a)])
                if (--indeg[static_cast<size_t>(b)] == 0) ready.push_back(b);
        }
        return removed == k;
    }

    /// Marks every vertex that has a directed path to some selected vertex
    /// i_m lying in S (reverse search from those targets). Unmarked vertices
    /// form the set I(S) of possible top choices.
    std::vector<char> mark_ancestors_of_selected(const Assortment& s) const {
        std::vector<char> marked(static_cast<size_t>(n_) + 1, 0);
        std::vector<char> queued(static_cast<size_t>(n_) + 1, 0);
        std::vector<int> stack;
        for (int im : tuple_)
            if (s.contains(im) && !queued[static_cast<size_t>(im)]) {
                queued[static_cast<size_t>(im)] = 1;
                stack.push_back(im);
            }
        // Reverse edges: the in-neighbors of i_m are S_m \ {i_m}.
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (size_t m = 0; m < tuple_.size(); ++m) {
                if (tuple_[m] != v) continue;
                for (int j : (*past_)[m].members()) {
                    if (j == v || marked[static_cast<size_t>(j)]) continue;
                    marked[static_cast<size_t>(j)] = 1;
                    if (!queued[static_cast<size_t>(j)]) {
                        queued[static_cast<size_t>(j)] = 1;
                        stack.push_back(j);
                    }
                }
            }
        }
        // Targets themselves count as reachable-from (a path needs >= 1 edge),
        // so they stay unmarked unless some other selection reaches them.
        return marked;
    }

  private:
    int n_;
    Tuple tuple_;
    const std::vector<Assortment>* past_;
};

inline bool is_feasible_tuple(const Tuple& tuple, const std::vector<Assortment>& past, int n) {
    return TupleGraph(tuple, past, n).acyclic();
}

/// The feasible tuple set L with a per-(m, i) index of member tuples.
struct FeasibleTupleSet {
    std::vector<Tuple> tuples;
    /// index[m][i] = positions in `tuples` with i_m == i.
    std::vector<std::vector<std::vector<int>>> index;

    int size() const { return static_cast<int>(tuples.size()); }

    void build_index(int num_assortments, int n) {
        index.assign(static_cast<size_t>(num_assortments),
                     std::vector<std::vector<int>>(static_cast<size_t>(n) + 1));
        for (int t = 0; t < size(); ++t)
            for (int m = 0; m < num_assortments; ++m)
                index[static_cast<size_t>(m)][static_cast<size_t>(tuples[static_cast<size_t>(t)][static_cast<size_t>(m)])]
                    .push_back(t);
    }
};

namespace detail {

inline void sort_tuples(std::vector<Tuple>& tuples) { std::sort(tuples.begin(), tuples.end()); }

inline std::vector<Tuple> tuples_general(const Instance& inst, long long cap) {
    const int M = inst.num_assortments();
    std::vector<std::vector<int>> supports;
    long long total = 1;
    for (int m = 0; m < M; ++m) {
        supports.push_back(inst.past[static_cast<size_t>(m)].members());
        total *= static_cast<long long>(supports.back().size());
        if (total > cap) fail(ErrorCode::ExplosionGuard, "|S_1 x ... x S_M| exceeds cap");
    }
    std::vector<Tuple> out;
    Tuple current(static_cast<size_t>(M));
    std::vector<int> pos(static_cast<size_t>(M), 0);
    for (;;) {
        for (int m = 0; m < M; ++m)
            current[static_cast<size_t>(m)] = supports[static_cast<size_t>(m)][static_cast<size_t>(pos[static_cast<size_t>(m)])];
        if (is_feasible_tuple(current, inst.past, inst.n)) out.push_back(current);
        int m = M - 1;
        while (m >= 0 && ++pos[static_cast<size_t>(m)] == static_cast<int>(supports[static_cast<size_t>(m)].size())) {
            pos[static_cast<size_t>(m)] = 0;
            --m;
        }
        if (m < 0) break;
    }
    return out;
}

/// M = 2 closed form: ((S1\S2) x S2) u (S1 x (S2\S1)) u {(i,i): i in S1 n S2}.
inline std::vector<Tuple> tuples_two(const Instance& inst) {
    const Assortment& s1 = inst.past[0];
    const Assortment& s2 = inst.past[1];
    std::vector<Tuple> out;
    for (int i1 : s1.set_difference(s2).members())
        for (int i2 : s2.members()) out.push_back({i1, i2});
    for (int i1 : s1.set_intersection(s2).members())
        for (int i2 : s2.set_difference(s1).members()) out.push_back({i1, i2});
    for (int i : s1.set_intersection(s2).members()) out.push_back({i, i});
    sort_tuples(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Nested closed form: i_1 in S_1 and i_{m+1} in {i_m} u B_{m+1}.
inline std::vector<Tuple> tuples_nested(const Instance& inst, const std::vector<std::vector<int>>& blocks,
                                        long long cap) {
    const int M = inst.num_assortments();
    std::vector<Tuple> out;
    Tuple current;
    std::function<void(int)> extend = [&](int m) {
        if (m == M) {
            out.push_back(current);
            if (static_cast<long long>(out.size()) > cap) fail(ErrorCode::ExplosionGuard, "|L| exceeds cap");
            return;
        }
        if (m == 0) {
            for (int i : blocks[0]) {
                current.push_back(i);
                extend(1);
                current.pop_back();
            }
        } else {
            current.push_back(current.back());
            extend(m + 1);
            current.pop_back();
            for (int i : blocks[static_cast<size_t>(m)]) {
                current.push_back(i);
                extend(m + 1);
                current.pop_back();
            }
        }
    };
    extend(0);
    sort_tuples(out);
    return out;
}

}  // namespace detail

/// Blocks B_1 = S_1, B_m = S_m \ S_{m-1} for a canonically ordered chain.
inline std::vector<std::vector<int>> nested_blocks(const Instance& inst) {
    StructureTag tag = classify_structure(inst);
    if (!tag.is_nested) fail(ErrorCode::NotNested, "blocks need nested past assortments");
    std::vector<std::vector<int>> blocks;
    for (int k = 0; k < inst.num_assortments(); ++k) {
        const Assortment& cur = inst.past[static_cast<size_t>(tag.chain_order[static_cast<size_t>(k)])];
        if (k == 0)
            blocks.push_back(cur.members());
        else
            blocks.push_back(
                cur.set_difference(inst.past[static_cast<size_t>(tag.chain_order[static_cast<size_t>(k - 1)])]).members());
    }
    return blocks;
}

struct TupleBuildOptions {
    long long explosion_cap = 10'000'000;
    bool force_general = false;  // skip the closed-form fast paths (tests)
};

/// Builds L per its definition; dispatches to the M = 2 or nested closed
/// forms when they apply (tested equal to the general enumeration).
inline FeasibleTupleSet build_feasible_tuples(const Instance& inst, const TupleBuildOptions& opts = {}) {
    const int M = inst.num_assortments();
    FeasibleTupleSet out;
    StructureTag tag = classify_structure(inst);
    if (!opts.force_general && M == 2 && !tag.is_nested) {
        out.tuples = detail::tuples_two(inst);
    } else if (!opts.force_general && tag.is_nested && M >= 2) {
        Instance chain = canonical_nested(inst, tag);
        std::vector<Tuple> tuples = detail::tuples_nested(chain, nested_blocks(inst), opts.explosion_cap);
        // Map coordinates back to the instance's assortment order.
        std::vector<int> where(static_cast<size_t>(M));
        for (int k = 0; k < M; ++k) where[static_cast<size_t>(tag.chain_order[static_cast<size_t>(k)])] = k;
        for (auto& t : tuples) {
            Tuple reordered(static_cast<size_t>(M));
            for (int m = 0; m < M; ++m) reordered[static_cast<size_t>(m)] = t[static_cast<size_t>(where[static_cast<size_t>(m)])];
            t = std::move(reordered);
        }
        detail::sort_tuples(tuples);
        out.tuples = std::move(tuples);
    } else {
        out.tuples = detail::tuples_general(inst, opts.explosion_cap);
    }
    out.build_index(M, inst.n);
    return out;
}

/// rho(tuple, S): the minimum revenue among products of S that can be the
/// top choice from S under a ranking realizing the tuple. Computed by the
/// ancestor-marking procedure over the tuple graph.
inline double rho(const Tuple& tuple, const Assortment& s, const Instance& inst) {
    TupleGraph g(tuple, inst.past, inst.n);
    std::vector<char> marked = g.mark_ancestors_of_selected(s);
    double best = std::numeric_limits<double>::infinity();
    for (int i : s.members())
        if (!marked[static_cast<size_t>(i)]) best = std::min(best, inst.revenues[static_cast<size_t>(i)]);
    if (!(best < std::numeric_limits<double>::infinity()))
        fail(ErrorCode::EmptyMinimum, "S has no possible top choice for tuple");
    return best;
}

/// Best-case analog: the maximum revenue among possible top choices in S.
inline double rho_max(const Tuple& tuple, const Assortment& s, const Instance& inst) {
    TupleGraph g(tuple, inst.past, inst.n);
    std::vector<char> marked = g.mark_ancestors_of_selected(s);
    double best = -1.0;
    for (int i : s.members())
        if (!marked[static_cast<size_t>(i)]) best = std::max(best, inst.revenues[static_cast<size_t>(i)]);
    if (best < 0.0) fail(ErrorCode::EmptyMinimum, "S has no possible top choice for tuple");
    return best;
}

/// Closed-form rho for M = 2 (the twelve-row case table). Assumes 0 in S and
/// S_1 u S_2 = {0,...,n} (restrict_to_offered first); products offered in
/// neither past assortment would otherwise be free top choices the table
/// never inspects.
inline double rho_two(const Tuple& tuple, const Assortment& s, const Instance& inst) {
    if (inst.num_assortments() != 2) fail(ErrorCode::NotTwoAssortments, "rho_two needs M = 2");
    const Assortment& s1 = inst.past[0];
    const Assortment& s2 = inst.past[1];
    const int i1 = tuple[0], i2 = tuple[1];
    auto r = [&](int i) { return inst.revenues[static_cast<size_t>(i)]; };
    auto min_over = [&](const Assortment& set) {
        double best = std::numeric_limits<double>::infinity();
        for (int j : set.members()) best = std::min(best, r(j));
        return best;
    };
    const bool in1 = s.contains(i1), in2 = s.contains(i2);
    Assortment only1 = s.set_intersection(s1.set_difference(s2));
    Assortment only2 = s.set_intersection(s2.set_difference(s1));

    if (s1.set_intersection(s2).contains(i1) && i1 == i2) return in1 ? r(i1) : 0.0;
    if (s1.set_intersection(s2).contains(i1) && s2.set_difference(s1).contains(i2)) {
        if (in2) return r(i2);
        if (in1) return std::min(r(i1), min_over(only2));
        return 0.0;
    }
    if (s1.set_difference(s2).contains(i1) && s1.set_intersection(s2).contains(i2)) {
        if (in1) return r(i1);
        if (in2) return std::min(r(i2), min_over(only1));
        return 0.0;
    }
    if (s1.set_difference(s2).contains(i1) && s2.set_difference(s1).contains(i2)) {
        if (in1 && in2) return std::min(r(i1), r(i2));
        if (in1) return std::min(r(i1), min_over(only2));
        if (in2) return std::min(r(i2), min_over(only1));
        return 0.0;
    }
    fail(ErrorCode::TupleOutOfSupport, "tuple not in L for M = 2");
}

/// Lemma-style recursion for nested chains: entry m is rho(tuple, S n S_m).
/// The instance must already be in canonical chain order. Minima over empty
/// block intersections are dropped from the min (never a sentinel value).
inline std::vector<double> rho_nested_prefix(const Tuple& tuple, const Assortment& s, const Instance& inst) {
    StructureTag tag = classify_structure(inst);
    if (!tag.is_nested) fail(ErrorCode::NotNested, "rho_nested_prefix needs a nested chain");
    for (int k = 0; k < inst.num_assortments(); ++k)
        if (tag.chain_order[static_cast<size_t>(k)] != k)
            fail(ErrorCode::NotNested, "instance must be in canonical chain order");
    if (s.set_intersection(inst.past[0]).empty())
        fail(ErrorCode::EmptyMinimum, "S must intersect S_1");

    std::vector<std::vector<int>> blocks = nested_blocks(inst);
    const int M = inst.num_assortments();
    std::vector<double> out(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m) {
        int im = tuple[static_cast<size_t>(m)];
        if (s.contains(im)) {
            out[static_cast<size_t>(m)] = inst.revenues[static_cast<size_t>(im)];
            continue;
        }
        std::optional<double> block_min;
        for (int j : blocks[static_cast<size_t>(m)])
            if (s.contains(j)) {
                double rj = inst.revenues[static_cast<size_t>(j)];
                if (!block_min || rj < *block_min) block_min = rj;
            }
        if (m == 0) {
            if (!block_min) fail(ErrorCode::EmptyMinimum, "S n B_1 empty with i_1 not in S");
            out[0] = *block_min;
        } else {
            double prev = out[static_cast<size_t>(m - 1)];
            out[static_cast<size_t>(m)] = block_min ? std::min(*block_min, prev) : prev;
        }
    }
    return out;
}

}  // namespace roam

#endif  // ROAM_TUPLES_HPP
