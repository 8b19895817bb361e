#include <gtest/gtest.h>

#include <optional>
#include <random>

#include "phylotope/simplex.hpp"

using namespace phylotope;

namespace {

using Q = mpq_class;

/// Solves the square system B x = b by Gaussian elimination; nullopt if singular.
std::optional<std::vector<Q>> solve_square(std::vector<std::vector<Q>> m, std::vector<Q> b) {
    const std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0)
            ++p;
        if (p == n)
            return std::nullopt;
        std::swap(m[p], m[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0)
                continue;
            Q f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k)
                m[r][k] -= f * m[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        b[i] /= m[i][i];
    return b;
}

/// Minimum over basic feasible solutions, for full-row-rank A.
std::optional<Q> brute_min(const std::vector<std::vector<Q>>& a, const std::vector<Q>& b,
                           const std::vector<Q>& c) {
    const std::size_t m = a.size(), n = a.front().size();
    std::optional<Q> best;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != m)
            continue;
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < n; ++j)
            if (mask >> j & 1)
                cols.push_back(j);
        std::vector<std::vector<Q>> sq(m, std::vector<Q>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k)
                sq[i][k] = a[i][cols[k]];
        auto x = solve_square(sq, b);
        if (!x)
            continue;
        bool ok = true;
        Q value = 0;
        for (std::size_t k = 0; k < m; ++k) {
            ok = ok && (*x)[k] >= 0;
            value += c[cols[k]] * (*x)[k];
        }
        if (ok && (!best || value < *best))
            best = value;
    }
    return best;
}

} // namespace

TEST(Simplex, SmallKnownProblem) {
    // max x + y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6
    auto sol = solve_lp({{1, 2, 1, 0}, {3, 1, 0, 1}}, {4, 6}, {1, 1, 0, 0}, Sense::maximize);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_EQ(sol.value, Q(14, 5));
    EXPECT_EQ(sol.x[0], Q(8, 5));
    EXPECT_EQ(sol.x[1], Q(6, 5));
}

TEST(Simplex, InfeasibleAndUnbounded) {
    EXPECT_EQ(solve_lp({{1, 1}}, {-1}, {1, 0}, Sense::minimize).status, LpStatus::infeasible);
    EXPECT_EQ(solve_lp({{1, -1}}, {1}, {1, 0}, Sense::maximize).status, LpStatus::unbounded);
}

TEST(Simplex, RedundantRowsAreTolerated) {
    SimplexSolver s({{1, 1, 0}, {2, 2, 0}, {0, 0, 1}}, {2, 4, 1});
    ASSERT_TRUE(s.feasible());
    auto sol = s.optimize({1, 2, 0}, Sense::maximize);
    EXPECT_EQ(sol.value, 4);
}

TEST(Simplex, RandomInstancesMatchBasisEnumeration) {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> coef(-4, 6), cost(0, 7), rhs(-3, 12), dims(0, 1);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 2 + dims(rng), n = 4 + 2 * dims(rng);
        std::vector<std::vector<Q>> a(m, std::vector<Q>(n));
        std::vector<Q> b(m), c(n);
        for (auto& row : a)
            for (auto& x : row)
                x = coef(rng);
        for (auto& x : b)
            x = rhs(rng);
        for (auto& x : c)
            x = cost(rng);
        // keep A full row rank so basis enumeration is a complete reference
        std::vector<std::vector<Q>> sq(m, std::vector<Q>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k)
                sq[i][k] = a[i][k];
        if (!solve_square(sq, std::vector<Q>(m, 0)))
            continue;
        auto ref = brute_min(a, b, c);
        auto sol = solve_lp(a, b, c, Sense::minimize);
        if (!ref) {
            EXPECT_EQ(sol.status, LpStatus::infeasible);
            continue;
        }
        ASSERT_EQ(sol.status, LpStatus::optimal);
        EXPECT_EQ(sol.value, *ref);
        // certificate re-evaluation: x >= 0, A x = b, c.x = value
        for (const auto& x : sol.x)
            EXPECT_GE(x, 0);
        for (std::size_t i = 0; i < m; ++i) {
            Q lhs = 0;
            for (std::size_t j = 0; j < n; ++j)
                lhs += a[i][j] * sol.x[j];
            EXPECT_EQ(lhs, b[i]);
        }
        ++checked;
    }
    EXPECT_GT(checked, 50);
}
