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

#ifndef ROAM_COMMON_HPP
#define ROAM_COMMON_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace roam {

enum class ErrorCode {
    DuplicateRevenue,
    NonPositiveRevenue,
    MissingNoPurchase,
    FrequencyOutOfRange,
    FrequencySumViolation,
    NegativeEta,
    IndexOutOfRange,
    TupleOutOfSupport,
    ExplosionGuard,
    EmptyMinimum,
    NotNested,
    NotTwoAssortments,
    NotApplicable,
    TooLarge,
    NumericalFailure,
    InconsistentData,
    GuardExceeded,
    ThetaInfeasible,
    NonConservativeFlow,
    BadParams,
    BadInput,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DuplicateRevenue: return "DuplicateRevenue";
        case ErrorCode::NonPositiveRevenue: return "NonPositiveRevenue";
        case ErrorCode::MissingNoPurchase: return "MissingNoPurchase";
        case ErrorCode::FrequencyOutOfRange: return "FrequencyOutOfRange";
        case ErrorCode::FrequencySumViolation: return "FrequencySumViolation";
        case ErrorCode::NegativeEta: return "NegativeEta";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::TupleOutOfSupport: return "TupleOutOfSupport";
        case ErrorCode::ExplosionGuard: return "ExplosionGuard";
        case ErrorCode::EmptyMinimum: return "EmptyMinimum";
        case ErrorCode::NotNested: return "NotNested";
        case ErrorCode::NotTwoAssortments: return "NotTwoAssortments";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::InconsistentData: return "InconsistentData";
        case ErrorCode::GuardExceeded: return "GuardExceeded";
        case ErrorCode::ThetaInfeasible: return "ThetaInfeasible";
        case ErrorCode::NonConservativeFlow: return "NonConservativeFlow";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

/// Exception type carrying a structured error code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

/// Set of product indices over the universe {0,...,n}, packed into 64-bit
/// words. Product 0 is the no-purchase option. Universes beyond 64 products
/// are supported (the two-assortment experiments go up to n = 100).
class ProductSet {
  public:
    ProductSet() = default;
    explicit ProductSet(int universe) : universe_(universe), words_((universe + 64) / 64, 0) {}
    ProductSet(int universe, std::initializer_list<int> items) : ProductSet(universe) {
        for (int i : items) insert(i);
    }

    int universe() const { return universe_; }

    bool contains(int i) const {
        if (i < 0 || i > universe_) return false;
        return (words_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
    }

    void insert(int i) {
        if (i < 0 || i > universe_) fail(ErrorCode::IndexOutOfRange, "product index " + std::to_string(i));
        words_[static_cast<size_t>(i) >> 6] |= (uint64_t{1} << (i & 63));
    }

    void erase(int i) {
        if (i < 0 || i > universe_) return;
        words_[static_cast<size_t>(i) >> 6] &= ~(uint64_t{1} << (i & 63));
    }

    int size() const {
        int c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    bool empty() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }

    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(static_cast<size_t>(size()));
        for (size_t k = 0; k < words_.size(); ++k) {
            uint64_t w = words_[k];
            while (w) {
                int b = std::countr_zero(w);
                out.push_back(static_cast<int>(k * 64 + static_cast<size_t>(b)));
                w &= w - 1;
            }
        }
        return out;
    }

    bool is_subset_of(const ProductSet& other) const {
        for (size_t k = 0; k < words_.size(); ++k) {
            uint64_t ow = k < other.words_.size() ? other.words_[k] : 0;
            if (words_[k] & ~ow) return false;
        }
        return true;
    }

    ProductSet set_union(const ProductSet& other) const {
        ProductSet out(std::max(universe_, other.universe_));
        for (size_t k = 0; k < out.words_.size(); ++k) {
            uint64_t a = k < words_.size() ? words_[k] : 0;
            uint64_t b = k < other.words_.size() ? other.words_[k] : 0;
            out.words_[k] = a | b;
        }
        return out;
    }

    ProductSet set_intersection(const ProductSet& other) const {
        ProductSet out(std::max(universe_, other.universe_));
        for (size_t k = 0; k < out.words_.size(); ++k) {
            uint64_t a = k < words_.size() ? words_[k] : 0;
            uint64_t b = k < other.words_.size() ? other.words_[k] : 0;
            out.words_[k] = a & b;
        }
        return out;
    }

    ProductSet set_difference(const ProductSet& other) const {
        ProductSet out(universe_);
        for (size_t k = 0; k < words_.size(); ++k) {
            uint64_t b = k < other.words_.size() ? other.words_[k] : 0;
            out.words_[k] = words_[k] & ~b;
        }
        return out;
    }

    /// Numeric mask comparison (user-visible tie breaking is "smallest mask").
    static int compare_masks(const ProductSet& a, const ProductSet& b) {
        size_t nw = std::max(a.words_.size(), b.words_.size());
        for (size_t k = nw; k-- > 0;) {
            uint64_t aw = k < a.words_.size() ? a.words_[k] : 0;
            uint64_t bw = k < b.words_.size() ? b.words_[k] : 0;
            if (aw != bw) return aw < bw ? -1 : 1;
        }
        return 0;
    }

    bool operator==(const ProductSet& other) const { return compare_masks(*this, other) == 0; }
    bool operator!=(const ProductSet& other) const { return !(*this == other); }
    bool operator<(const ProductSet& other) const { return compare_masks(*this, other) < 0; }

    uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int i : members()) {
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        }
        return s + "}";
    }

  private:
    int universe_ = 0;
    std::vector<uint64_t> words_;
};

constexpr double kFeasTol = 1e-7;
constexpr double kSumTol = 1e-9;

}  // namespace roam

#endif  // ROAM_COMMON_HPP
