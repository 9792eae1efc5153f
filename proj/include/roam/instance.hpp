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

#ifndef ROAM_INSTANCE_HPP
#define ROAM_INSTANCE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "roam/common.hpp"

namespace roam {

enum class Norm { L1, LInf };

/// An assortment: a subset of {0,...,n} containing the no-purchase option 0.
using Assortment = ProductSet;

/// Raw (pre-validation) instance data, in the caller's product labels.
/// Product 0 is the no-purchase option; products 1..n carry revenues[i-1].
struct RawInstance {
    int n = 0;
    std::vector<double> revenues;                       // revenues[i-1] = r_i
    std::vector<std::vector<int>> past_assortments;     // each must contain 0
    std::vector<std::map<int, double>> sales;           // v_{m,i} keyed by product
    double eta = 0.0;
    Norm norm = Norm::LInf;
};

/// A validated instance. Products are relabeled on ingest so that revenues
/// are strictly ascending: internally r_1 < ... < r_n and r_0 = 0. The map
/// back to the caller's labels is kept for reporting.
class Instance {
  public:
    int n = 0;
    std::vector<double> revenues;          // size n+1, revenues[0] == 0
    std::vector<Assortment> past;          // S_1..S_M, internal labels
    std::vector<std::vector<double>> v;    // v[m][i], size M x (n+1); 0 outside S_m
    double eta = 0.0;
    Norm norm = Norm::LInf;
    std::vector<int> original_label;       // original_label[internal] = caller label
    std::vector<std::string> warnings;

    int num_assortments() const { return static_cast<int>(past.size()); }

    double revenue(int i) const { return revenues[static_cast<size_t>(i)]; }
    double top_revenue() const { return revenues[static_cast<size_t>(n)]; }

    Assortment full_assortment() const {
        Assortment s(n);
        for (int i = 0; i <= n; ++i) s.insert(i);
        return s;
    }

    Assortment offered_union() const {
        Assortment u(n);
        for (const auto& s : past) u = u.set_union(s);
        return u;
    }

    /// Sets of past-assortment indices offering each product (0-based m).
    std::vector<uint64_t> offering_masks() const {
        if (num_assortments() > 64) fail(ErrorCode::TooLarge, "more than 64 past assortments");
        std::vector<uint64_t> masks(static_cast<size_t>(n) + 1, 0);
        for (int m = 0; m < num_assortments(); ++m)
            for (int i : past[static_cast<size_t>(m)].members()) masks[static_cast<size_t>(i)] |= uint64_t{1} << m;
        return masks;
    }
};

/// Validates raw data and produces the canonical ascending-revenue labeling.
inline Instance validate_instance(const RawInstance& raw) {
    const int n = raw.n;
    if (n < 1) fail(ErrorCode::BadInput, "need at least one product");
    if (static_cast<int>(raw.revenues.size()) != n)
        fail(ErrorCode::BadInput, "revenues must have length n");
    if (raw.sales.size() != raw.past_assortments.size())
        fail(ErrorCode::BadInput, "sales must have one entry per past assortment");
    if (raw.eta < 0.0) fail(ErrorCode::NegativeEta, "eta = " + std::to_string(raw.eta));

    for (double r : raw.revenues)
        if (!(r > 0.0)) fail(ErrorCode::NonPositiveRevenue, "revenue " + std::to_string(r));

    // Sort original products 1..n ascending by revenue; reject ties.
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return raw.revenues[static_cast<size_t>(a - 1)] < raw.revenues[static_cast<size_t>(b - 1)];
    });
    for (int k = 1; k < n; ++k) {
        double lo = raw.revenues[static_cast<size_t>(order[static_cast<size_t>(k - 1)] - 1)];
        double hi = raw.revenues[static_cast<size_t>(order[static_cast<size_t>(k)] - 1)];
        if (!(lo < hi)) fail(ErrorCode::DuplicateRevenue, "revenue value " + std::to_string(hi));
    }

    std::vector<int> to_internal(static_cast<size_t>(n) + 1, 0);  // original -> internal
    Instance inst;
    inst.n = n;
    inst.eta = raw.eta;
    inst.norm = raw.norm;
    inst.revenues.assign(static_cast<size_t>(n) + 1, 0.0);
    inst.original_label.assign(static_cast<size_t>(n) + 1, 0);
    for (int k = 0; k < n; ++k) {
        int orig = order[static_cast<size_t>(k)];
        to_internal[static_cast<size_t>(orig)] = k + 1;
        inst.original_label[static_cast<size_t>(k + 1)] = orig;
        inst.revenues[static_cast<size_t>(k + 1)] = raw.revenues[static_cast<size_t>(orig - 1)];
    }

    const int M = static_cast<int>(raw.past_assortments.size());
    for (int m = 0; m < M; ++m) {
        const auto& members = raw.past_assortments[static_cast<size_t>(m)];
        Assortment s(n);
        bool has_zero = false;
        for (int i : members) {
            if (i < 0 || i > n) fail(ErrorCode::IndexOutOfRange, "product " + std::to_string(i));
            if (i == 0) has_zero = true;
            s.insert(i == 0 ? 0 : to_internal[static_cast<size_t>(i)]);
        }
        if (!has_zero)
            fail(ErrorCode::MissingNoPurchase, "past assortment " + std::to_string(m + 1) + " lacks product 0");

        std::vector<double> freq(static_cast<size_t>(n) + 1, 0.0);
        double total = 0.0;
        for (const auto& [orig, val] : raw.sales[static_cast<size_t>(m)]) {
            if (orig < 0 || orig > n) fail(ErrorCode::IndexOutOfRange, "frequency product " + std::to_string(orig));
            int internal = orig == 0 ? 0 : to_internal[static_cast<size_t>(orig)];
            if (!s.contains(internal))
                fail(ErrorCode::FrequencyOutOfRange,
                     "frequency given for product " + std::to_string(orig) + " not offered in assortment " +
                         std::to_string(m + 1));
            if (val < -kSumTol || val > 1.0 + kSumTol)
                fail(ErrorCode::FrequencyOutOfRange, "v = " + std::to_string(val));
            freq[static_cast<size_t>(internal)] = val;
            total += val;
        }
        if (std::abs(total - 1.0) > kSumTol)
            fail(ErrorCode::FrequencySumViolation,
                 "assortment " + std::to_string(m + 1) + " frequencies sum to " + std::to_string(total));

        // Duplicate past assortments with identical sales vectors collapse to
        // one; conflicting duplicates stay (they are extra constraints on U).
        bool duplicate = false;
        for (int m2 = 0; m2 < static_cast<int>(inst.past.size()); ++m2) {
            if (inst.past[static_cast<size_t>(m2)] != s) continue;
            bool same = true;
            for (int i = 0; i <= n; ++i)
                if (std::abs(inst.v[static_cast<size_t>(m2)][static_cast<size_t>(i)] -
                             freq[static_cast<size_t>(i)]) > kSumTol) {
                    same = false;
                    break;
                }
            if (same) {
                duplicate = true;
                inst.warnings.push_back("dropped duplicate past assortment " + std::to_string(m + 1));
                break;
            }
        }
        if (!duplicate) {
            inst.past.push_back(s);
            inst.v.push_back(std::move(freq));
        }
    }
    if (inst.past.empty()) fail(ErrorCode::BadInput, "no past assortments");
    return inst;
}

/// Restricts the product universe to the union of the past assortments.
/// The robust optimum is unchanged (tested against the oracle).
inline Instance restrict_to_offered(const Instance& inst) {
    Assortment offered = inst.offered_union();
    std::vector<int> kept = offered.members();  // ascending, includes 0
    const int new_n = static_cast<int>(kept.size()) - 1;

    std::vector<int> to_new(static_cast<size_t>(inst.n) + 1, -1);
    for (int k = 0; k < static_cast<int>(kept.size()); ++k) to_new[static_cast<size_t>(kept[static_cast<size_t>(k)])] = k;

    Instance out;
    out.n = new_n;
    out.eta = inst.eta;
    out.norm = inst.norm;
    out.revenues.assign(static_cast<size_t>(new_n) + 1, 0.0);
    out.original_label.assign(static_cast<size_t>(new_n) + 1, 0);
    for (int k = 0; k <= new_n; ++k) {
        int old = kept[static_cast<size_t>(k)];
        out.revenues[static_cast<size_t>(k)] = inst.revenues[static_cast<size_t>(old)];
        out.original_label[static_cast<size_t>(k)] = inst.original_label[static_cast<size_t>(old)];
    }
    for (int m = 0; m < inst.num_assortments(); ++m) {
        Assortment s(new_n);
        std::vector<double> freq(static_cast<size_t>(new_n) + 1, 0.0);
        for (int i : inst.past[static_cast<size_t>(m)].members()) {
            int k = to_new[static_cast<size_t>(i)];
            s.insert(k);
            freq[static_cast<size_t>(k)] = inst.v[static_cast<size_t>(m)][static_cast<size_t>(i)];
        }
        out.past.push_back(s);
        out.v.push_back(std::move(freq));
    }
    return out;
}

/// Expected revenue observed under past assortment m (1-based).
inline double past_revenue(const Instance& inst, int m) {
    if (m < 1 || m > inst.num_assortments()) fail(ErrorCode::IndexOutOfRange, "m = " + std::to_string(m));
    double total = 0.0;
    for (int i = 0; i <= inst.n; ++i)
        total += inst.revenues[static_cast<size_t>(i)] * inst.v[static_cast<size_t>(m - 1)][static_cast<size_t>(i)];
    return total;
}

inline double best_past_revenue(const Instance& inst) {
    double best = 0.0;
    for (int m = 1; m <= inst.num_assortments(); ++m) best = std::max(best, past_revenue(inst, m));
    return best;
}

enum class Structure { RevenueOrderedComplete, Nested, TwoAssortments, General };

struct StructureTag {
    Structure kind = Structure::General;
    bool is_nested = false;
    bool covers_all_products = false;
    /// When nested: the 0-based assortment indices in chain order
    /// S_{chain[0]} subset of S_{chain[1]} subset of ...
    std::vector<int> chain_order;
};

inline StructureTag classify_structure(const Instance& inst) {
    StructureTag tag;
    tag.covers_all_products = inst.offered_union().size() == inst.n + 1;

    const int M = inst.num_assortments();
    std::vector<int> order(static_cast<size_t>(M));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        int sa = inst.past[static_cast<size_t>(a)].size(), sb = inst.past[static_cast<size_t>(b)].size();
        if (sa != sb) return sa < sb;
        return a < b;
    });
    bool nested = true;
    for (int k = 0; k + 1 < M && nested; ++k) {
        const auto& a = inst.past[static_cast<size_t>(order[static_cast<size_t>(k)])];
        const auto& b = inst.past[static_cast<size_t>(order[static_cast<size_t>(k + 1)])];
        if (a.size() == b.size() || !a.is_subset_of(b)) nested = false;
    }
    tag.is_nested = nested;
    if (nested) tag.chain_order = order;

    // Revenue-ordered complete: {S_m} equals {{0,m,...,n} : m = 1..n} as a set.
    bool roc = (M == inst.n);
    if (roc) {
        std::vector<Assortment> expected;
        for (int m = 1; m <= inst.n; ++m) {
            Assortment s(inst.n);
            s.insert(0);
            for (int i = m; i <= inst.n; ++i) s.insert(i);
            expected.push_back(s);
        }
        std::vector<Assortment> got = inst.past;
        auto cmp = [](const Assortment& a, const Assortment& b) { return a < b; };
        std::sort(expected.begin(), expected.end(), cmp);
        std::sort(got.begin(), got.end(), cmp);
        for (int k = 0; k < M && roc; ++k)
            if (!(expected[static_cast<size_t>(k)] == got[static_cast<size_t>(k)])) roc = false;
    }

    if (roc)
        tag.kind = Structure::RevenueOrderedComplete;
    else if (nested && M >= 2)
        tag.kind = Structure::Nested;
    else if (M == 2)
        tag.kind = Structure::TwoAssortments;
    else
        tag.kind = Structure::General;
    return tag;
}

/// Instance with past assortments reordered into the canonical nested chain.
inline Instance canonical_nested(const Instance& inst, const StructureTag& tag) {
    if (!tag.is_nested) fail(ErrorCode::NotNested, "past assortments are not a chain");
    Instance out = inst;
    out.past.clear();
    out.v.clear();
    for (int m : tag.chain_order) {
        out.past.push_back(inst.past[static_cast<size_t>(m)]);
        out.v.push_back(inst.v[static_cast<size_t>(m)]);
    }
    return out;
}

}  // namespace roam

#endif  // ROAM_INSTANCE_HPP
