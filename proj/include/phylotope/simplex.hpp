#pragma once

// Exact rational two-phase simplex on a dense tableau, Bland's rule for both
// entering and leaving variables. Problems are in standard equality form
//   optimize c.x  subject to  A x = b,  x >= 0.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "phylotope/errors.hpp"

namespace phylotope {

enum class Sense { minimize, maximize };

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    mpq_class value;
    std::vector<mpq_class> x;
};

/// Phase 1 is solved once at construction; optimize() then runs phase 2 from
/// the feasible basis for any number of objectives.
class SimplexSolver {
public:
    SimplexSolver(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b)
        : vars_(a.empty() ? 0 : a.front().size()) {
        if (a.size() != b.size())
            throw StructuralError("constraint matrix and right-hand side disagree");
        for (const auto& row : a)
            if (row.size() != vars_)
                throw StructuralError("ragged constraint matrix");
        const std::size_t m = a.size();
        // columns: [original vars | artificials | rhs]
        width_ = vars_ + m + 1;
        tab_.assign(m, std::vector<mpq_class>(width_, 0));
        basis_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const bool flip = b[i] < 0;
            for (std::size_t j = 0; j < vars_; ++j)
                tab_[i][j] = flip ? mpq_class(-a[i][j]) : a[i][j];
            tab_[i][vars_ + i] = 1;
            tab_[i][width_ - 1] = flip ? mpq_class(-b[i]) : b[i];
            basis_[i] = vars_ + i;
        }
        // phase 1: minimize the sum of artificials
        std::vector<mpq_class> cost(width_ - 1, 0);
        for (std::size_t i = 0; i < m; ++i)
            cost[vars_ + i] = 1;
        run(cost, width_ - 1);
        mpq_class infeasibility = 0;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i] >= vars_)
                infeasibility += tab_[i][width_ - 1];
        feasible_ = infeasibility == 0;
        if (!feasible_)
            return;
        // drive zero-level artificials out of the basis; drop redundant rows
        for (std::size_t i = 0; i < basis_.size();) {
            if (basis_[i] < vars_) {
                ++i;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < vars_ && !col; ++j)
                if (tab_[i][j] != 0)
                    col = j;
            if (col) {
                pivot(i, *col);
                ++i;
            } else {
                tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    bool feasible() const { return feasible_; }
    std::size_t pivots() const { return pivot_count_; }

    /// Phase 2 on a copy of the feasible tableau.
    LpSolution optimize(const std::vector<mpq_class>& objective, Sense sense) const {
        if (objective.size() != vars_)
            throw StructuralError("objective length mismatch");
        LpSolution sol;
        if (!feasible_) {
            sol.status = LpStatus::infeasible;
            return sol;
        }
        SimplexSolver work = *this;
        std::vector<mpq_class> cost(width_ - 1, 0);
        for (std::size_t j = 0; j < vars_; ++j)
            cost[j] = sense == Sense::minimize ? objective[j] : mpq_class(-objective[j]);
        if (!work.run(cost, vars_)) {
            sol.status = LpStatus::unbounded;
            return sol;
        }
        sol.status = LpStatus::optimal;
        sol.x.assign(vars_, 0);
        for (std::size_t i = 0; i < work.basis_.size(); ++i)
            if (work.basis_[i] < vars_)
                sol.x[work.basis_[i]] = work.tab_[i][width_ - 1];
        sol.value = 0;
        for (std::size_t j = 0; j < vars_; ++j)
            sol.value += objective[j] * sol.x[j];
        return sol;
    }

    /// A feasible point (the phase-1 basic solution).
    std::optional<std::vector<mpq_class>> feasible_point() const {
        if (!feasible_)
            return std::nullopt;
        std::vector<mpq_class> x(vars_, 0);
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i] < vars_)
                x[basis_[i]] = tab_[i][width_ - 1];
        return x;
    }

private:
    void pivot(std::size_t r, std::size_t c) {
        ++pivot_count_;
        const mpq_class p = tab_[r][c];
        for (auto& v : tab_[r])
            if (v != 0)
                v /= p;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == r || tab_[i][c] == 0)
                continue;
            const mpq_class f = tab_[i][c];
            for (std::size_t j = 0; j < width_; ++j)
                if (tab_[r][j] != 0)
                    tab_[i][j] -= f * tab_[r][j];
        }
        basis_[r] = c;
    }

    /// Minimizes cost over columns [0, allowed). Returns false if unbounded.
    bool run(const std::vector<mpq_class>& cost, std::size_t allowed) {
        std::vector<bool> in_basis(width_, false);
        for (auto b : basis_)
            in_basis[b] = true;
        while (true) {
            // Bland: lowest-index column with negative reduced cost
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < allowed && !enter; ++j) {
                if (in_basis[j])
                    continue;
                mpq_class reduced = cost[j];
                for (std::size_t i = 0; i < basis_.size(); ++i)
                    if (tab_[i][j] != 0)
                        reduced -= cost[basis_[i]] * tab_[i][j];
                if (reduced < 0)
                    enter = j;
            }
            if (!enter)
                return true;
            // minimum ratio, ties broken by lowest basic variable index
            std::optional<std::size_t> leave;
            mpq_class best;
            for (std::size_t i = 0; i < basis_.size(); ++i) {
                if (tab_[i][*enter] <= 0)
                    continue;
                mpq_class ratio = tab_[i][width_ - 1] / tab_[i][*enter];
                if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave)
                return false;
            in_basis[basis_[*leave]] = false;
            in_basis[*enter] = true;
            pivot(*leave, *enter);
        }
    }

    std::size_t vars_ = 0;
    std::size_t width_ = 0;
    std::vector<std::vector<mpq_class>> tab_;
    std::vector<std::size_t> basis_;
    bool feasible_ = false;
    std::size_t pivot_count_ = 0;
};

inline LpSolution solve_lp(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b,
                           const std::vector<mpq_class>& objective, Sense sense) {
    return SimplexSolver(std::move(a), std::move(b)).optimize(objective, sense);
}

} // namespace phylotope
