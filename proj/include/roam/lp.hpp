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

#ifndef ROAM_LP_HPP
#define ROAM_LP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "roam/common.hpp"

namespace roam::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;    // reduced-cost optimality tolerance
constexpr double kPrimalTol = 1e-7;  // bound/row feasibility tolerance
constexpr double kPivotTol = 1e-10;  // smallest acceptable pivot magnitude

enum class Sense { Minimize, Maximize };
enum class Rel { LE, EQ, GE };

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Row {
    std::vector<std::pair<int, double>> coeffs;
    Rel rel = Rel::EQ;
    double rhs = 0.0;
};

/// A linear program: bounded variables, sparse constraint rows.
struct Model {
    Sense sense = Sense::Minimize;
    std::vector<double> obj;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<Row> rows;

    int num_vars() const { return static_cast<int>(obj.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    int add_var(double lo, double hi, double cost) {
        obj.push_back(cost);
        lower.push_back(lo);
        upper.push_back(hi);
        return num_vars() - 1;
    }

    int add_row(Rel rel, double rhs, std::vector<std::pair<int, double>> coeffs) {
        rows.push_back(Row{std::move(coeffs), rel, rhs});
        return num_rows() - 1;
    }

    /// Plain-text dump, one constraint per line (debugging aid).
    std::string dump() const {
        std::ostringstream os;
        os << (sense == Sense::Minimize ? "min" : "max");
        for (int j = 0; j < num_vars(); ++j) os << " " << obj[static_cast<size_t>(j)] << "*x" << j;
        os << "\n";
        for (const auto& r : rows) {
            bool first = true;
            for (auto [j, a] : r.coeffs) {
                os << (first ? "" : " + ") << a << "*x" << j;
                first = false;
            }
            os << (r.rel == Rel::LE ? " <= " : r.rel == Rel::GE ? " >= " : " = ") << r.rhs << "\n";
        }
        for (int j = 0; j < num_vars(); ++j)
            os << lower[static_cast<size_t>(j)] << " <= x" << j << " <= " << upper[static_cast<size_t>(j)] << "\n";
        return os.str();
    }
};

/// Basis snapshot for warm starts. Column indexing: structural variables
/// first, then one slack per row; entries >= n_struct + n_rows denote the
/// fixed-at-zero artificial of row (entry - n_struct - n_rows).
struct Basis {
    std::vector<int> basic;
    std::vector<uint8_t> state;  // per structural+slack column: 0 lower, 1 upper, 2 free-at-zero, 3 basic
};

struct Solution {
    Status status = Status::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    std::vector<double> row_duals;      // multipliers for the model's own sense
    std::vector<double> reduced_costs;  // structural variables only
    Basis basis;
    int iterations = 0;
};

struct SolveOptions {
    int max_iterations = 500000;
    const Basis* warm = nullptr;
    bool phase1_only = false;   // feasibility check
    bool allow_dualize = true;  // solve via the explicit dual when rows >> cols
};

namespace detail {

/// Dense LU with partial pivoting plus product-form eta updates.
class BasisFactor {
  public:
    void factor(const std::vector<std::vector<std::pair<int, double>>>& cols, const std::vector<int>& basic, int m) {
        m_ = m;
        lu_.assign(static_cast<size_t>(m) * static_cast<size_t>(m), 0.0);
        perm_.resize(static_cast<size_t>(m));
        etas_.clear();
        for (int k = 0; k < m; ++k)
            for (auto [i, a] : cols[static_cast<size_t>(basic[static_cast<size_t>(k)])]) at(i, k) += a;
        // in-place LU with partial pivoting
        for (int k = 0; k < m; ++k) perm_[static_cast<size_t>(k)] = k;
        singular_ = false;
        for (int k = 0; k < m; ++k) {
            int piv = k;
            double best = std::abs(at(k, k));
            for (int i = k + 1; i < m; ++i) {
                double v = std::abs(at(i, k));
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best < 1e-13) {
                singular_ = true;
                at(k, k) = (at(k, k) >= 0 ? 1e-13 : -1e-13);
            } else if (piv != k) {
                for (int j = 0; j < m; ++j) std::swap(at(k, j), at(piv, j));
                std::swap(perm_[static_cast<size_t>(k)], perm_[static_cast<size_t>(piv)]);
            }
            double d = at(k, k);
            for (int i = k + 1; i < m; ++i) {
                double f = at(i, k) / d;
                at(i, k) = f;
                if (f == 0.0) continue;
                const double* rk = &lu_[static_cast<size_t>(k) * static_cast<size_t>(m_)];
                double* ri = &lu_[static_cast<size_t>(i) * static_cast<size_t>(m_)];
                for (int j = k + 1; j < m; ++j) ri[j] -= f * rk[j];
            }
        }
    }

    bool singular() const { return singular_; }
    int eta_count() const { return static_cast<int>(etas_.size()); }

    /// z := B^{-1} v.
    void ftran(std::vector<double>& v) const {
        lu_solve(v);
        for (const auto& e : etas_) apply_eta(v, e);
    }

    /// y := B^{-T} v.
    void btran(std::vector<double>& v) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) apply_eta_transpose(v, *it);
        lu_solve_transpose(v);
    }

    /// Registers the pivot replacing basis position r with a column whose
    /// current representation is w = B^{-1} a. Returns false on a bad pivot.
    bool update(int r, const std::vector<double>& w) {
        if (std::abs(w[static_cast<size_t>(r)]) < kPivotTol) return false;
        Eta e;
        e.r = r;
        e.w = w;
        etas_.push_back(std::move(e));
        return true;
    }

  private:
    struct Eta {
        int r;
        std::vector<double> w;
    };

    double& at(int i, int j) { return lu_[static_cast<size_t>(i) * static_cast<size_t>(m_) + static_cast<size_t>(j)]; }
    double at(int i, int j) const {
        return lu_[static_cast<size_t>(i) * static_cast<size_t>(m_) + static_cast<size_t>(j)];
    }

    void lu_solve(std::vector<double>& v) const {
        std::vector<double> b(static_cast<size_t>(m_));
        for (int i = 0; i < m_; ++i) b[static_cast<size_t>(i)] = v[static_cast<size_t>(perm_[static_cast<size_t>(i)])];
        // Sparse right-hand sides leave a zero prefix untouched in the
        // forward solve.
        int first = 0;
        while (first < m_ && b[static_cast<size_t>(first)] == 0.0) ++first;
        for (int i = first + 1; i < m_; ++i) {
            double s = b[static_cast<size_t>(i)];
            const double* ri = &lu_[static_cast<size_t>(i) * static_cast<size_t>(m_)];
            for (int j = first; j < i; ++j) s -= ri[j] * b[static_cast<size_t>(j)];
            b[static_cast<size_t>(i)] = s;
        }
        for (int i = m_ - 1; i >= 0; --i) {
            double s = b[static_cast<size_t>(i)];
            const double* ri = &lu_[static_cast<size_t>(i) * static_cast<size_t>(m_)];
            for (int j = i + 1; j < m_; ++j) s -= ri[j] * b[static_cast<size_t>(j)];
            b[static_cast<size_t>(i)] = s / ri[i];
        }
        v = std::move(b);
    }

    void lu_solve_transpose(std::vector<double>& v) const {
        // Solve U^T z = v, then L^T q = z, then undo the permutation.
        std::vector<double>& b = v;
        for (int i = 0; i < m_; ++i) {
            double s = b[static_cast<size_t>(i)];
            for (int j = 0; j < i; ++j) s -= at(j, i) * b[static_cast<size_t>(j)];
            b[static_cast<size_t>(i)] = s / at(i, i);
        }
        for (int i = m_ - 1; i >= 0; --i) {
            double s = b[static_cast<size_t>(i)];
            for (int j = i + 1; j < m_; ++j) s -= at(j, i) * b[static_cast<size_t>(j)];
            b[static_cast<size_t>(i)] = s;
        }
        std::vector<double> out(static_cast<size_t>(m_));
        for (int i = 0; i < m_; ++i) out[static_cast<size_t>(perm_[static_cast<size_t>(i)])] = b[static_cast<size_t>(i)];
        v = std::move(out);
    }

    static void apply_eta(std::vector<double>& z, const Eta& e) {
        double zr = z[static_cast<size_t>(e.r)] / e.w[static_cast<size_t>(e.r)];
        if (zr == 0.0 && z[static_cast<size_t>(e.r)] == 0.0) return;
        for (size_t i = 0; i < e.w.size(); ++i) z[i] -= e.w[i] * zr;
        z[static_cast<size_t>(e.r)] = zr;
    }

    static void apply_eta_transpose(std::vector<double>& y, const Eta& e) {
        double s = 0.0;
        for (size_t i = 0; i < e.w.size(); ++i)
            if (static_cast<int>(i) != e.r) s += e.w[i] * y[i];
        y[static_cast<size_t>(e.r)] = (y[static_cast<size_t>(e.r)] - s) / e.w[static_cast<size_t>(e.r)];
    }

    int m_ = 0;
    bool singular_ = false;
    std::vector<double> lu_;
    std::vector<int> perm_;
    std::vector<Eta> etas_;
};

enum : uint8_t { kAtLower = 0, kAtUpper = 1, kFreeZero = 2, kBasic = 3 };

/// Bounded-variable two-phase revised simplex over the slack-augmented
/// equality system. Column layout: structurals, slacks, artificials.
class Simplex {
  public:
    Simplex(const Model& model, const SolveOptions& opts) : opts_(opts) {
        minimize_ = model.sense == Sense::Minimize;
        m_ = model.num_rows();
        n_struct_ = model.num_vars();
        n_ = n_struct_ + m_;            // + slacks
        n_total_ = n_ + m_;             // + artificials
        cols_.resize(static_cast<size_t>(n_total_));
        lower_.assign(static_cast<size_t>(n_total_), 0.0);
        upper_.assign(static_cast<size_t>(n_total_), 0.0);
        cost_.assign(static_cast<size_t>(n_total_), 0.0);
        rhs_.assign(static_cast<size_t>(m_), 0.0);

        for (int j = 0; j < n_struct_; ++j) {
            lower_[static_cast<size_t>(j)] = model.lower[static_cast<size_t>(j)];
            upper_[static_cast<size_t>(j)] = model.upper[static_cast<size_t>(j)];
            double c = model.obj[static_cast<size_t>(j)];
            cost_[static_cast<size_t>(j)] = minimize_ ? c : -c;
        }
        for (int i = 0; i < m_; ++i) {
            const Row& row = model.rows[static_cast<size_t>(i)];
            for (auto [j, a] : row.coeffs)
                if (a != 0.0) cols_[static_cast<size_t>(j)].push_back({i, a});
            int s = n_struct_ + i;
            cols_[static_cast<size_t>(s)].push_back({i, 1.0});
            switch (row.rel) {
                case Rel::LE:
                    lower_[static_cast<size_t>(s)] = 0.0;
                    upper_[static_cast<size_t>(s)] = kInf;
                    break;
                case Rel::GE:
                    lower_[static_cast<size_t>(s)] = -kInf;
                    upper_[static_cast<size_t>(s)] = 0.0;
                    break;
                case Rel::EQ:
                    lower_[static_cast<size_t>(s)] = 0.0;
                    upper_[static_cast<size_t>(s)] = 0.0;
                    break;
            }
            rhs_[static_cast<size_t>(i)] = row.rhs;
            int art = n_ + i;
            cols_[static_cast<size_t>(art)].push_back({i, 1.0});
            lower_[static_cast<size_t>(art)] = 0.0;
            upper_[static_cast<size_t>(art)] = 0.0;  // opened during phase 1 only
        }
    }

    Solution run() {
        Solution sol;
        init_basis();
        int it1 = 0;
        if (needs_phase1_) {
            Status st = iterate(/*phase1=*/true, it1);
            if (st == Status::IterationLimit) {
                sol.status = st;
                sol.iterations = it1;
                return sol;
            }
            double infeas = phase1_objective();
            if (infeas > 1e-8) {
                sol.status = Status::Infeasible;
                sol.iterations = it1;
                return sol;
            }
            // Close the artificials for good.
            for (int i = 0; i < m_; ++i) {
                lower_[static_cast<size_t>(n_ + i)] = 0.0;
                upper_[static_cast<size_t>(n_ + i)] = 0.0;
                set_nonbasic_floor(n_ + i);
            }
        }
        if (opts_.phase1_only) {
            sol.status = Status::Optimal;
            sol.iterations = it1;
            return sol;
        }
        int it2 = 0;
        Status st = iterate(/*phase1=*/false, it2);
        sol.iterations = it1 + it2;
        if (st != Status::Optimal) {
            sol.status = st;
            return sol;
        }
        extract(sol);
        return sol;
    }

  private:
    void set_nonbasic_floor(int j) {
        if (state_[static_cast<size_t>(j)] == kBasic) return;
        state_[static_cast<size_t>(j)] = kAtLower;
    }

    double nonbasic_value(int j) const {
        switch (state_[static_cast<size_t>(j)]) {
            case kAtLower: {
                double l = lower_[static_cast<size_t>(j)];
                if (l > -kInf) return l;
                double u = upper_[static_cast<size_t>(j)];
                return u < kInf ? u : 0.0;
            }
            case kAtUpper: {
                double u = upper_[static_cast<size_t>(j)];
                if (u < kInf) return u;
                double l = lower_[static_cast<size_t>(j)];
                return l > -kInf ? l : 0.0;
            }
            default:
                return 0.0;
        }
    }

    void init_basis() {
        state_.assign(static_cast<size_t>(n_total_), kAtLower);
        basic_.assign(static_cast<size_t>(m_), -1);
        bool warm_ok = false;
        if (opts_.warm && static_cast<int>(opts_.warm->basic.size()) == m_ &&
            static_cast<int>(opts_.warm->state.size()) == n_) {
            warm_ok = true;
            std::vector<char> used(static_cast<size_t>(n_total_), 0);
            for (int r = 0; r < m_ && warm_ok; ++r) {
                int j = opts_.warm->basic[static_cast<size_t>(r)];
                if (j < 0 || j >= n_total_ || used[static_cast<size_t>(j)]) warm_ok = false;
                else used[static_cast<size_t>(j)] = 1;
            }
            if (warm_ok) {
                for (int j = 0; j < n_; ++j) {
                    uint8_t s = opts_.warm->state[static_cast<size_t>(j)];
                    state_[static_cast<size_t>(j)] = s == kBasic ? kAtLower : s;
                    normalize_state(j);
                }
                for (int r = 0; r < m_; ++r) {
                    basic_[static_cast<size_t>(r)] = opts_.warm->basic[static_cast<size_t>(r)];
                    state_[static_cast<size_t>(basic_[static_cast<size_t>(r)])] = kBasic;
                }
                factor_.factor(cols_, basic_, m_);
                if (factor_.singular()) warm_ok = false;
                if (warm_ok) {
                    compute_basic_values();
                    for (int r = 0; r < m_ && warm_ok; ++r) {
                        int j = basic_[static_cast<size_t>(r)];
                        double v = xb_[static_cast<size_t>(r)];
                        if (v < lower_[static_cast<size_t>(j)] - kPrimalTol || v > upper_[static_cast<size_t>(j)] + kPrimalTol)
                            warm_ok = false;
                    }
                }
            }
        }
        if (warm_ok) {
            needs_phase1_ = false;
            return;
        }
        // Cold start: slack basis where slacks are unbounded enough,
        // artificials otherwise; artificials get opened to cover residuals.
        for (int j = 0; j < n_; ++j) {
            state_[static_cast<size_t>(j)] = kAtLower;
            normalize_state(j);
        }
        needs_phase1_ = false;
        std::vector<double> residual = rhs_;
        for (int j = 0; j < n_struct_; ++j) {
            double v = nonbasic_value(j);
            if (v == 0.0) continue;
            for (auto [i, a] : cols_[static_cast<size_t>(j)]) residual[static_cast<size_t>(i)] -= a * v;
        }
        for (int i = 0; i < m_; ++i) {
            int s = n_struct_ + i;
            double r = residual[static_cast<size_t>(i)];
            bool slack_fits =
                r >= lower_[static_cast<size_t>(s)] - kPrimalTol && r <= upper_[static_cast<size_t>(s)] + kPrimalTol;
            if (slack_fits) {
                basic_[static_cast<size_t>(i)] = s;
                state_[static_cast<size_t>(s)] = kBasic;
            } else {
                // Slack sits at its nearest bound; the artificial covers the
                // rest and is temporarily opened.
                double sval = std::clamp(r, lower_[static_cast<size_t>(s)], upper_[static_cast<size_t>(s)]);
                state_[static_cast<size_t>(s)] = sval == lower_[static_cast<size_t>(s)] ? kAtLower : kAtUpper;
                int art = n_ + i;
                double need = r - sval;
                if (need >= 0) {
                    lower_[static_cast<size_t>(art)] = 0.0;
                    upper_[static_cast<size_t>(art)] = kInf;
                } else {
                    lower_[static_cast<size_t>(art)] = -kInf;
                    upper_[static_cast<size_t>(art)] = 0.0;
                }
                basic_[static_cast<size_t>(i)] = art;
                state_[static_cast<size_t>(art)] = kBasic;
                needs_phase1_ = true;
            }
        }
        factor_.factor(cols_, basic_, m_);
        compute_basic_values();
    }

    void normalize_state(int j) {
        if (state_[static_cast<size_t>(j)] == kBasic) return;
        bool lo = lower_[static_cast<size_t>(j)] > -kInf;
        bool hi = upper_[static_cast<size_t>(j)] < kInf;
        if (!lo && !hi) state_[static_cast<size_t>(j)] = kFreeZero;
        else if (state_[static_cast<size_t>(j)] == kAtLower && !lo) state_[static_cast<size_t>(j)] = kAtUpper;
        else if (state_[static_cast<size_t>(j)] == kAtUpper && !hi) state_[static_cast<size_t>(j)] = kAtLower;
    }

    void compute_basic_values() {
        std::vector<double> r = rhs_;
        for (int j = 0; j < n_total_; ++j) {
            if (state_[static_cast<size_t>(j)] == kBasic) continue;
            double v = nonbasic_value(j);
            if (v == 0.0) continue;
            for (auto [i, a] : cols_[static_cast<size_t>(j)]) r[static_cast<size_t>(i)] -= a * v;
        }
        factor_.ftran(r);
        xb_ = std::move(r);
    }

    double phase1_objective() const {
        double total = 0.0;
        for (int r = 0; r < m_; ++r) {
            int j = basic_[static_cast<size_t>(r)];
            if (j >= n_) total += std::abs(xb_[static_cast<size_t>(r)]);
        }
        return total;
    }

    double objective() const {
        double total = 0.0;
        for (int r = 0; r < m_; ++r)
            total += cost_[static_cast<size_t>(basic_[static_cast<size_t>(r)])] * xb_[static_cast<size_t>(r)];
        for (int j = 0; j < n_total_; ++j)
            if (state_[static_cast<size_t>(j)] != kBasic) total += cost_[static_cast<size_t>(j)] * nonbasic_value(j);
        return total;
    }

    std::vector<double> current_costs(bool phase1) const {
        std::vector<double> c(static_cast<size_t>(n_total_), 0.0);
        if (phase1) {
            // minimize sum of artificial infeasibilities: +a for a >= 0 side,
            // -a for the a <= 0 side.
            for (int i = 0; i < m_; ++i) {
                int art = n_ + i;
                if (upper_[static_cast<size_t>(art)] > 0)
                    c[static_cast<size_t>(art)] = 1.0;
                else if (lower_[static_cast<size_t>(art)] < 0)
                    c[static_cast<size_t>(art)] = -1.0;
            }
        } else {
            for (int j = 0; j < n_total_; ++j) c[static_cast<size_t>(j)] = cost_[static_cast<size_t>(j)];
        }
        return c;
    }

    /// Full reduced-cost refresh: y = B^-T c_B, then d_j = c_j - y A_j.
    void recompute_duals(const std::vector<double>& c, std::vector<double>& d) const {
        std::vector<double> y(static_cast<size_t>(m_));
        for (int r = 0; r < m_; ++r) y[static_cast<size_t>(r)] = c[static_cast<size_t>(basic_[static_cast<size_t>(r)])];
        factor_.btran(y);
        d.assign(static_cast<size_t>(n_total_), 0.0);
        for (int j = 0; j < n_total_; ++j) {
            if (state_[static_cast<size_t>(j)] == kBasic) continue;
            double dj = c[static_cast<size_t>(j)];
            for (auto [i, a] : cols_[static_cast<size_t>(j)]) dj -= y[static_cast<size_t>(i)] * a;
            d[static_cast<size_t>(j)] = dj;
        }
    }

    Status iterate(bool phase1, int& iterations) {
        std::vector<double> c = current_costs(phase1);
        // Reduced costs are maintained incrementally along the pivot row
        // (refreshed at every refactorization) and Devex reference weights
        // steer the pricing; a full refresh confirms optimality claims.
        std::vector<double> d;
        recompute_duals(c, d);
        std::vector<double> devex(static_cast<size_t>(n_total_), 1.0);
        int stall = 0;
        bool bland = false;
        double last_obj = kInf;
        for (;;) {
            if (iterations >= opts_.max_iterations) return Status::IterationLimit;

            int enter = -1;
            double best_score = 0.0;
            int direction = +1;
            for (int j = 0; j < n_total_; ++j) {
                uint8_t st = state_[static_cast<size_t>(j)];
                if (st == kBasic) continue;
                if (j >= n_ && upper_[static_cast<size_t>(j)] == 0.0 && lower_[static_cast<size_t>(j)] == 0.0)
                    continue;  // closed artificial
                double dj = d[static_cast<size_t>(j)];
                bool lo_ok = st == kAtLower || st == kFreeZero;
                bool hi_ok = st == kAtUpper || st == kFreeZero;
                int dir = 0;
                if (lo_ok && dj < -kDualTol) dir = +1;
                else if (hi_ok && dj > kDualTol) dir = -1;
                if (dir == 0) continue;
                if (bland) {
                    enter = j;
                    direction = dir;
                    break;
                }
                double score = dj * dj / devex[static_cast<size_t>(j)];
                if (score > best_score) {
                    best_score = score;
                    enter = j;
                    direction = dir;
                }
            }
            if (enter < 0) {
                // Confirm on fresh duals before declaring optimality.
                recompute_duals(c, d);
                for (int j = 0; j < n_total_ && enter < 0; ++j) {
                    uint8_t st = state_[static_cast<size_t>(j)];
                    if (st == kBasic) continue;
                    if (j >= n_ && upper_[static_cast<size_t>(j)] == 0.0 && lower_[static_cast<size_t>(j)] == 0.0)
                        continue;
                    double dj = d[static_cast<size_t>(j)];
                    bool lo_ok = st == kAtLower || st == kFreeZero;
                    bool hi_ok = st == kAtUpper || st == kFreeZero;
                    if (lo_ok && dj < -kDualTol) {
                        enter = j;
                        direction = +1;
                    } else if (hi_ok && dj > kDualTol) {
                        enter = j;
                        direction = -1;
                    }
                }
                if (enter < 0) return Status::Optimal;
            }

            // FTRAN the entering column.
            std::vector<double> w(static_cast<size_t>(m_), 0.0);
            for (auto [i, a] : cols_[static_cast<size_t>(enter)]) w[static_cast<size_t>(i)] = a;
            factor_.ftran(w);

            // Ratio test: how far can the entering variable move?
            double span = upper_[static_cast<size_t>(enter)] - lower_[static_cast<size_t>(enter)];
            double limit = span;  // bound flip distance (may be inf)
            int leave_pos = -1;
            double leave_piv = 0.0;
            int leave_to = kAtLower;
            for (int r = 0; r < m_; ++r) {
                double coeff = direction * w[static_cast<size_t>(r)];
                if (std::abs(coeff) < kPivotTol) continue;
                int bj = basic_[static_cast<size_t>(r)];
                double room;
                int to_state;
                if (coeff > 0) {
                    double lb = lower_[static_cast<size_t>(bj)];
                    room = lb > -kInf ? (xb_[static_cast<size_t>(r)] - lb) / coeff : kInf;
                    to_state = kAtLower;
                } else {
                    double ub = upper_[static_cast<size_t>(bj)];
                    room = ub < kInf ? (ub - xb_[static_cast<size_t>(r)]) / (-coeff) : kInf;
                    to_state = kAtUpper;
                }
                if (room == kInf) continue;
                if (room < 0.0) room = 0.0;
                bool take = false;
                double window = 1e-9 * (1.0 + room);
                if (leave_pos < 0) {
                    take = room < limit;  // limit may still be the infinite flip span
                } else if (room < limit - window) {
                    take = true;
                } else if (room <= limit + window && std::abs(w[static_cast<size_t>(r)]) > std::abs(leave_piv)) {
                    take = true;  // near-tie: prefer the larger pivot
                }
                if (take) {
                    limit = std::min(limit, room);
                    leave_pos = r;
                    leave_piv = w[static_cast<size_t>(r)];
                    leave_to = to_state;
                }
            }
            if (limit == kInf) {
                if (phase1) fail(ErrorCode::NumericalFailure, "phase-1 ray");
                return Status::Unbounded;
            }
            ++iterations;

            if (leave_pos < 0) {
                // Bound flip: entering variable runs to its other bound; the
                // basis and every reduced cost stay put.
                double delta = direction * span;
                for (int r = 0; r < m_; ++r) xb_[static_cast<size_t>(r)] -= w[static_cast<size_t>(r)] * delta;
                state_[static_cast<size_t>(enter)] = direction > 0 ? kAtUpper : kAtLower;
            } else {
                double enter_val = nonbasic_value(enter) + direction * limit;
                for (int r = 0; r < m_; ++r)
                    xb_[static_cast<size_t>(r)] -= w[static_cast<size_t>(r)] * (direction * limit);
                int old = basic_[static_cast<size_t>(leave_pos)];
                state_[static_cast<size_t>(old)] = static_cast<uint8_t>(leave_to);
                if (lower_[static_cast<size_t>(old)] == -kInf && upper_[static_cast<size_t>(old)] == kInf)
                    state_[static_cast<size_t>(old)] = kFreeZero;
                basic_[static_cast<size_t>(leave_pos)] = enter;
                state_[static_cast<size_t>(enter)] = kBasic;
                xb_[static_cast<size_t>(leave_pos)] = enter_val;

                // Pivot-row update of the reduced costs and Devex weights.
                // Small pivots amplify the update error, so those refresh
                // from scratch instead.
                double alpha_q = w[static_cast<size_t>(leave_pos)];
                bool exact_refresh = std::abs(alpha_q) < 1e-6;
                if (!exact_refresh) {
                    std::vector<double> er(static_cast<size_t>(m_), 0.0);
                    er[static_cast<size_t>(leave_pos)] = 1.0;
                    factor_.btran(er);
                    double d_q = d[static_cast<size_t>(enter)];
                    double ratio = d_q / alpha_q;
                    double devex_q = devex[static_cast<size_t>(enter)];
                    double devex_ref = devex_q / (alpha_q * alpha_q);
                    for (int j = 0; j < n_total_; ++j) {
                        if (state_[static_cast<size_t>(j)] == kBasic || j == old) continue;
                        double alpha_j = 0.0;
                        for (auto [i, a] : cols_[static_cast<size_t>(j)]) alpha_j += er[static_cast<size_t>(i)] * a;
                        if (alpha_j != 0.0) {
                            d[static_cast<size_t>(j)] -= ratio * alpha_j;
                            double cand = alpha_j * alpha_j * devex_ref;
                            if (cand > devex[static_cast<size_t>(j)]) devex[static_cast<size_t>(j)] = cand;
                        }
                    }
                    d[static_cast<size_t>(old)] = -ratio;
                    d[static_cast<size_t>(enter)] = 0.0;
                    devex[static_cast<size_t>(old)] = std::max(1.0, devex_ref);
                    if (devex[static_cast<size_t>(old)] > 1e10) devex.assign(static_cast<size_t>(n_total_), 1.0);
                }

                if (!factor_.update(leave_pos, w) || factor_.eta_count() >= 100) {
                    factor_.factor(cols_, basic_, m_);
                    if (factor_.singular()) fail(ErrorCode::NumericalFailure, "singular basis after pivot");
                    compute_basic_values();
                    exact_refresh = true;
                }
                if (exact_refresh) recompute_duals(c, d);
            }

            double obj = phase1 ? phase1_objective() : objective();
            if (obj < last_obj - 1e-12) {
                last_obj = obj;
                stall = 0;
                if (bland) {
                    bland = false;
                    recompute_duals(c, d);
                }
            } else if (!bland && ++stall > std::max(500, m_)) {
                bland = true;  // anti-cycling fallback
                recompute_duals(c, d);
            }
        }
    }

    void extract(Solution& sol) {
        sol.status = Status::Optimal;
        sol.x.assign(static_cast<size_t>(n_struct_), 0.0);
        for (int j = 0; j < n_struct_; ++j)
            if (state_[static_cast<size_t>(j)] != kBasic) sol.x[static_cast<size_t>(j)] = nonbasic_value(j);
        for (int r = 0; r < m_; ++r) {
            int j = basic_[static_cast<size_t>(r)];
            if (j < n_struct_) sol.x[static_cast<size_t>(j)] = xb_[static_cast<size_t>(r)];
        }
        double val = 0.0;
        for (int j = 0; j < n_struct_; ++j) val += cost_[static_cast<size_t>(j)] * sol.x[static_cast<size_t>(j)];
        sol.value = minimize_ ? val : -val;

        std::vector<double> y(static_cast<size_t>(m_));
        for (int r = 0; r < m_; ++r)
            y[static_cast<size_t>(r)] = cost_[static_cast<size_t>(basic_[static_cast<size_t>(r)])];
        factor_.btran(y);
        sol.row_duals.assign(static_cast<size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i)
            sol.row_duals[static_cast<size_t>(i)] = minimize_ ? y[static_cast<size_t>(i)] : -y[static_cast<size_t>(i)];
        sol.reduced_costs.assign(static_cast<size_t>(n_struct_), 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            double d = cost_[static_cast<size_t>(j)];
            for (auto [i, a] : cols_[static_cast<size_t>(j)]) d -= y[static_cast<size_t>(i)] * a;
            sol.reduced_costs[static_cast<size_t>(j)] = minimize_ ? d : -d;
        }
        sol.basis.basic = basic_;
        sol.basis.state.assign(state_.begin(), state_.begin() + n_);
    }

    const SolveOptions opts_;
    bool minimize_ = true;
    int m_ = 0, n_struct_ = 0, n_ = 0, n_total_ = 0;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> lower_, upper_, cost_, rhs_;
    std::vector<int> basic_;
    std::vector<uint8_t> state_;
    std::vector<double> xb_;
    BasisFactor factor_;
    bool needs_phase1_ = true;
};

}  // namespace detail

/// Mechanical dual of a model, with index maps for recovering the primal
/// solution from the dual one. The dual of a minimization is a maximization
/// whose rows correspond one-to-one with primal variables.
struct DualizedModel {
    Model dual;
    // dual variable index per primal row
    std::vector<int> y_of_row;
    // dual variable indices of the lower/upper bound multipliers per primal
    // variable (-1 when absent)
    std::vector<int> v_of_var, w_of_var;
    // dual row index per primal variable
    std::vector<int> row_of_var;
};

inline DualizedModel dualize(const Model& primal) {
    if (primal.sense != Sense::Minimize) fail(ErrorCode::BadInput, "dualize expects a minimization");
    DualizedModel out;
    Model& d = out.dual;
    d.sense = Sense::Maximize;
    const int m = primal.num_rows();
    const int n = primal.num_vars();
    out.y_of_row.resize(static_cast<size_t>(m));
    out.v_of_var.assign(static_cast<size_t>(n), -1);
    out.w_of_var.assign(static_cast<size_t>(n), -1);
    out.row_of_var.resize(static_cast<size_t>(n));

    for (int i = 0; i < m; ++i) {
        const Row& row = primal.rows[static_cast<size_t>(i)];
        double lo = row.rel == Rel::GE ? 0.0 : -kInf;
        double hi = row.rel == Rel::LE ? 0.0 : kInf;
        if (row.rel == Rel::EQ) {
            lo = -kInf;
            hi = kInf;
        }
        out.y_of_row[static_cast<size_t>(i)] = d.add_var(lo, hi, row.rhs);
    }
    // Zero-anchored one-sided bounds fold into the row sense (their
    // multipliers are plain slacks with no objective term); only two-sided
    // or shifted bounds need explicit multipliers.
    for (int j = 0; j < n; ++j) {
        double lj = primal.lower[static_cast<size_t>(j)];
        double uj = primal.upper[static_cast<size_t>(j)];
        bool slack_lower = lj == 0.0 && uj == kInf;
        bool slack_upper = uj == 0.0 && lj == -kInf;
        if (lj > -kInf && !slack_lower) out.v_of_var[static_cast<size_t>(j)] = d.add_var(0.0, kInf, lj);
        if (uj < kInf && !slack_upper) out.w_of_var[static_cast<size_t>(j)] = d.add_var(0.0, kInf, -uj);
    }
    std::vector<std::vector<std::pair<int, double>>> rows_of_var(static_cast<size_t>(n));
    for (int i = 0; i < m; ++i)
        for (auto [j, a] : primal.rows[static_cast<size_t>(i)].coeffs)
            rows_of_var[static_cast<size_t>(j)].push_back({out.y_of_row[static_cast<size_t>(i)], a});
    for (int j = 0; j < n; ++j) {
        double lj = primal.lower[static_cast<size_t>(j)];
        double uj = primal.upper[static_cast<size_t>(j)];
        auto coeffs = rows_of_var[static_cast<size_t>(j)];
        Rel rel = Rel::EQ;
        if (out.v_of_var[static_cast<size_t>(j)] >= 0)
            coeffs.push_back({out.v_of_var[static_cast<size_t>(j)], 1.0});
        else if (lj == 0.0 && uj == kInf)
            rel = Rel::LE;
        if (out.w_of_var[static_cast<size_t>(j)] >= 0)
            coeffs.push_back({out.w_of_var[static_cast<size_t>(j)], -1.0});
        else if (uj == 0.0 && lj == -kInf)
            rel = Rel::GE;
        out.row_of_var[static_cast<size_t>(j)] =
            d.add_row(rel, primal.obj[static_cast<size_t>(j)], std::move(coeffs));
    }
    return out;
}

Solution solve(const Model& model, const SolveOptions& opts = {});

namespace detail {

inline Solution solve_via_dual(const Model& model, const SolveOptions& opts) {
    // Canonicalize to a minimization, dualize, solve, map back.
    Model min_form = model;
    if (min_form.sense == Sense::Maximize) {
        min_form.sense = Sense::Minimize;
        for (auto& c : min_form.obj) c = -c;
    }
    DualizedModel dd = dualize(min_form);
    SolveOptions inner = opts;
    inner.allow_dualize = false;
    inner.warm = nullptr;
    Solution ds = solve(dd.dual, inner);
    Solution sol;
    sol.iterations = ds.iterations;
    if (ds.status == Status::Unbounded) {
        sol.status = Status::Infeasible;
        return sol;
    }
    if (ds.status == Status::Infeasible) {
        // Primal is unbounded or infeasible; settle it with a feasibility run.
        SolveOptions feas;
        feas.phase1_only = true;
        feas.allow_dualize = false;
        Solution fs = solve(min_form, feas);
        sol.status = fs.status == Status::Optimal ? Status::Unbounded : Status::Infeasible;
        return sol;
    }
    if (ds.status != Status::Optimal) {
        sol.status = ds.status;
        return sol;
    }
    sol.status = Status::Optimal;
    const int n = model.num_vars();
    const int m = model.num_rows();
    sol.x.assign(static_cast<size_t>(n), 0.0);
    // The dual's row duals are the primal point (dual of the dual).
    for (int j = 0; j < n; ++j) sol.x[static_cast<size_t>(j)] = ds.row_duals[static_cast<size_t>(dd.row_of_var[static_cast<size_t>(j)])];
    double val = 0.0;
    for (int j = 0; j < n; ++j) val += model.obj[static_cast<size_t>(j)] * sol.x[static_cast<size_t>(j)];
    sol.value = val;
    sol.row_duals.assign(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        double y = ds.x[static_cast<size_t>(dd.y_of_row[static_cast<size_t>(i)])];
        sol.row_duals[static_cast<size_t>(i)] = model.sense == Sense::Minimize ? y : -y;
    }
    sol.basis = ds.basis;  // basis of the dualized model (reusable by same-shape re-solves)
    return sol;
}

}  // namespace detail

inline Solution solve(const Model& model, const SolveOptions& opts) {
    for (int j = 0; j < model.num_vars(); ++j)
        if (model.lower[static_cast<size_t>(j)] > model.upper[static_cast<size_t>(j)] + 1e-12) {
            Solution s;
            s.status = Status::Infeasible;
            return s;
        }
    if (opts.allow_dualize && !opts.warm && !opts.phase1_only &&
        model.num_rows() > 2 * model.num_vars() + 64) {
        return detail::solve_via_dual(model, opts);
    }
    detail::Simplex simplex(model, opts);
    return simplex.run();
}

/// Appends the rows encoding ||eps|| <= eta to a model over existing epsilon
/// variables. eta = 0 pins every component with an equality row. The L1 ball
/// introduces one auxiliary |eps| bound variable per component plus the
/// budget row; the Linf ball adds two bound rows per component.
enum class NormKind { L1, LInf };

inline std::vector<int> linearize_norm_ball(Model& model, const std::vector<int>& eps_vars, NormKind norm,
                                            double eta) {
    std::vector<int> rows;
    if (eta < 0.0) fail(ErrorCode::NegativeEta, "eta = " + std::to_string(eta));
    if (eta == 0.0) {
        for (int e : eps_vars) rows.push_back(model.add_row(Rel::EQ, 0.0, {{e, 1.0}}));
        return rows;
    }
    if (norm == NormKind::LInf) {
        for (int e : eps_vars) {
            rows.push_back(model.add_row(Rel::LE, eta, {{e, 1.0}}));
            rows.push_back(model.add_row(Rel::GE, -eta, {{e, 1.0}}));
        }
        return rows;
    }
    std::vector<std::pair<int, double>> budget;
    for (int e : eps_vars) {
        int t = model.add_var(0.0, kInf, 0.0);
        rows.push_back(model.add_row(Rel::GE, 0.0, {{t, 1.0}, {e, -1.0}}));
        rows.push_back(model.add_row(Rel::GE, 0.0, {{t, 1.0}, {e, 1.0}}));
        budget.push_back({t, 1.0});
    }
    rows.push_back(model.add_row(Rel::LE, eta, std::move(budget)));
    return rows;
}

}  // namespace roam::lp

#endif  // ROAM_LP_HPP
