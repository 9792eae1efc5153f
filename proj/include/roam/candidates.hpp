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

#ifndef ROAM_CANDIDATES_HPP
#define ROAM_CANDIDATES_HPP

#include <algorithm>
#include <cassert>
#include <vector>

#include "roam/common.hpp"
#include "roam/instance.hpp"

namespace roam {

/// Dominance graph over products: an edge (i*, i) whenever r_{i*} < r_i and
/// every past assortment offering i* also offered i. Candidate assortments
/// are exactly the closed vertex sets containing 0. The edge set is its own
/// transitive closure by construction.
struct DominanceGraph {
    int n = 0;
    std::vector<uint64_t> offering;       // M_i as a bitmask over assortments
    std::vector<ProductSet> out_edges;    // out_edges[i] = {j : (i,j) in E}
    std::vector<ProductSet> in_edges;

    bool has_edge(int a, int b) const { return out_edges[static_cast<size_t>(a)].contains(b); }
};

inline DominanceGraph build_dominance_graph(const Instance& inst) {
    DominanceGraph g;
    g.n = inst.n;
    g.offering = inst.offering_masks();
    g.out_edges.assign(static_cast<size_t>(inst.n) + 1, ProductSet(inst.n));
    g.in_edges.assign(static_cast<size_t>(inst.n) + 1, ProductSet(inst.n));
    for (int a = 0; a <= inst.n; ++a)
        for (int b = 0; b <= inst.n; ++b) {
            if (a == b) continue;
            bool cheaper = inst.revenues[static_cast<size_t>(a)] < inst.revenues[static_cast<size_t>(b)];
            bool nested = (g.offering[static_cast<size_t>(a)] & ~g.offering[static_cast<size_t>(b)]) == 0;
            if (cheaper && nested) {
                g.out_edges[static_cast<size_t>(a)].insert(b);
                g.in_edges[static_cast<size_t>(b)].insert(a);
            }
        }
    return g;
}

struct CandidateSet {
    std::vector<Assortment> assortments;  // sorted ascending by mask

    int size() const { return static_cast<int>(assortments.size()); }
};

/// Direct O(n^2) closure test: S is a candidate iff adding-rules never fire.
inline bool is_candidate(const DominanceGraph& g, const Assortment& s) {
    if (!s.contains(0)) return false;
    for (int a : s.members())
        if (!g.out_edges[static_cast<size_t>(a)].is_subset_of(s)) return false;
    return true;
}

inline bool is_candidate(const Instance& inst, const Assortment& s) {
    return is_candidate(build_dominance_graph(inst), s);
}

namespace detail {

#ifndef NDEBUG
inline void assert_transitive_closure(const DominanceGraph& g, const ProductSet& vertices) {
    for (int a : vertices.members())
        for (int b : g.out_edges[static_cast<size_t>(a)].set_intersection(vertices).members())
            for (int c : g.out_edges[static_cast<size_t>(b)].set_intersection(vertices).members())
                assert(g.has_edge(a, c));
}
#endif

enum class PivotPolicy { MaxDegree, MinIndex };

inline void recursive_step(const DominanceGraph& g, const ProductSet& vertices, PivotPolicy policy,
                           long long cap, std::vector<ProductSet>& out) {
#ifndef NDEBUG
    assert_transitive_closure(g, vertices);
#endif
    if (vertices.empty()) {
        out.push_back(ProductSet(g.n));
        if (static_cast<long long>(out.size()) > cap)
            fail(ErrorCode::ExplosionGuard, "candidate collection exceeds cap");
        return;
    }
    // Pivot choice is free for correctness; max degree shrinks both branches.
    int pivot = -1, best_deg = -1;
    for (int v : vertices.members()) {
        if (policy == PivotPolicy::MinIndex) {
            pivot = v;
            break;
        }
        int deg = g.out_edges[static_cast<size_t>(v)].set_intersection(vertices).size() +
                  g.in_edges[static_cast<size_t>(v)].set_intersection(vertices).size();
        if (deg > best_deg) {
            best_deg = deg;
            pivot = v;
        }
    }

    // Branch without the pivot: drop it and everything that forces it in.
    ProductSet without = vertices;
    without.erase(pivot);
    for (int v : g.in_edges[static_cast<size_t>(pivot)].set_intersection(vertices).members()) without.erase(v);
    recursive_step(g, without, policy, cap, out);

    // Branch with the pivot: its closure joins every set from the rest.
    ProductSet forced = g.out_edges[static_cast<size_t>(pivot)].set_intersection(vertices);
    forced.insert(pivot);
    ProductSet with = vertices.set_difference(forced);
    size_t before = out.size();
    recursive_step(g, with, policy, cap, out);
    for (size_t k = before; k < out.size(); ++k) out[k] = out[k].set_union(forced);
}

}  // namespace detail

struct CandidateOptions {
    long long cap = 1 << 24;
    detail::PivotPolicy pivot = detail::PivotPolicy::MaxDegree;
};

/// Enumerates the candidate collection: all closed sets of the dominance
/// graph that contain the no-purchase option. Requires every product to be
/// offered somewhere (restrict_to_offered first).
inline CandidateSet enumerate_candidates(const Instance& inst, const CandidateOptions& opts = {}) {
    DominanceGraph g = build_dominance_graph(inst);
    ProductSet all(inst.n);
    for (int i = 0; i <= inst.n; ++i) all.insert(i);
    std::vector<ProductSet> raw;
    detail::recursive_step(g, all, opts.pivot, opts.cap, raw);
    CandidateSet out;
    for (auto& s : raw)
        if (s.contains(0)) out.assortments.push_back(std::move(s));
    std::sort(out.assortments.begin(), out.assortments.end());
    out.assortments.erase(std::unique(out.assortments.begin(), out.assortments.end()), out.assortments.end());
    return out;
}

/// Instance with a fictitious top-revenue product appended to both past
/// assortments (zero observed frequency). Used to meet the n in S_1 n S_2
/// precondition of the two-assortment closed forms.
inline Instance augment_with_fictitious_top(const Instance& inst) {
    Instance out = inst;
    out.n = inst.n + 1;
    out.revenues.push_back(inst.top_revenue() + 1.0);
    out.original_label.push_back(-1);  // marks the fictitious product
    for (int m = 0; m < inst.num_assortments(); ++m) {
        Assortment grown(out.n);
        for (int i : inst.past[static_cast<size_t>(m)].members()) grown.insert(i);
        grown.insert(out.n);
        out.past[static_cast<size_t>(m)] = grown;
        out.v[static_cast<size_t>(m)].push_back(0.0);
    }
    return out;
}

/// Lemma-style closed form for M = 2: candidates are parameterized by a
/// cutoff in S_1 \ S_2 and one in S_2 \ S_1. Automatically augments with a
/// fictitious product when n is not offered in both assortments and strips
/// it from the reported assortments.
inline CandidateSet candidates_two(const Instance& original) {
    if (original.num_assortments() != 2) fail(ErrorCode::NotTwoAssortments, "candidates_two needs M = 2");
    bool augmented = !(original.past[0].contains(original.n) && original.past[1].contains(original.n));
    Instance inst = augmented ? augment_with_fictitious_top(original) : original;
    const int n = inst.n;
    const Assortment& s1 = inst.past[0];
    const Assortment& s2 = inst.past[1];
    Assortment common = s1.set_intersection(s2);
    std::vector<int> left = s1.set_difference(s2).members();
    std::vector<int> right = s2.set_difference(s1).members();
    left.push_back(n);
    right.push_back(n);

    CandidateSet out;
    for (int i1 : left)
        for (int i2 : right) {
            ProductSet s = common;
            for (int j : s1.set_difference(s2).members())
                if (j >= i1) s.insert(j);
            for (int j : s2.set_difference(s1).members())
                if (j >= i2) s.insert(j);
            if (augmented) {
                ProductSet stripped(original.n);
                for (int j : s.members())
                    if (j <= original.n) stripped.insert(j);
                out.assortments.push_back(std::move(stripped));
            } else {
                out.assortments.push_back(std::move(s));
            }
        }
    std::sort(out.assortments.begin(), out.assortments.end());
    out.assortments.erase(std::unique(out.assortments.begin(), out.assortments.end()), out.assortments.end());
    return out;
}

}  // namespace roam

#endif  // ROAM_CANDIDATES_HPP
