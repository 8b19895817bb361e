#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "phylotope/errors.hpp"
#include "phylotope/lattice.hpp"
#include "phylotope/model.hpp"
#include "phylotope/simplex.hpp"

namespace phylotope {

/// Polytope given by its vertex list.
struct VPolytope {
    std::vector<IntVector> vertices;
    std::size_t dimension = 0;

    static VPolytope from(std::span<const ExponentVector> vs) {
        if (vs.empty())
            throw StructuralError("polytope needs at least one vertex");
        VPolytope p;
        p.dimension = vs.front().coords.size();
        for (const auto& v : vs)
            p.vertices.push_back(to_int_vector(v));
        return p;
    }

    static VPolytope from(std::vector<IntVector> vs) {
        if (vs.empty())
            throw StructuralError("polytope needs at least one vertex");
        VPolytope p;
        p.dimension = vs.front().size();
        for (const auto& v : vs)
            if (v.size() != p.dimension)
                throw StructuralError("vertices of different lengths");
        p.vertices = std::move(vs);
        return p;
    }
};

/// Fixes the coordinates offset..offset+|u|-1 to u (x_h^e = u_h for one edge
/// block).
struct SliceConstraint {
    std::size_t offset = 0;
    Multidegree u;
};

inline SliceConstraint slice_at(const CoordinateLayout& layout, const EdgeRef& e, Multidegree u) {
    if (u.size() != layout.group_order)
        throw StructuralError("multidegree of length " + std::to_string(u.size()) +
                              " for a group of order " + std::to_string(layout.group_order));
    return {layout.block_offset(e), std::move(u)};
}

struct LpCertificate {
    mpq_class value;
    /// Convex-combination weights scaled by n: lambda >= 0, sum lambda = n.
    std::vector<mpq_class> lambda;
};

namespace detail {

using FixedCoordinates = std::vector<std::pair<std::size_t, mpz_class>>;

inline FixedCoordinates slice_coordinates(const VPolytope& p, std::span<const SliceConstraint> slices) {
    FixedCoordinates out;
    for (const auto& s : slices) {
        if (s.offset + s.u.size() > p.dimension)
            throw StructuralError("slice outside the ambient dimension");
        for (std::size_t h = 0; h < s.u.size(); ++h)
            out.emplace_back(s.offset + h, mpz_class(s.u[h]));
    }
    return out;
}

/// { lambda >= 0 : sum lambda = n, sum lambda_i v_i[c] = value for fixed c }
inline SimplexSolver convex_combination_system(const VPolytope& p, unsigned n,
                                               const FixedCoordinates& fixed) {
    const std::size_t nv = p.vertices.size();
    std::vector<std::vector<mpq_class>> a;
    std::vector<mpq_class> b;
    a.emplace_back(nv, mpq_class(1));
    b.emplace_back(n);
    for (const auto& [c, value] : fixed) {
        std::vector<mpq_class> row(nv);
        for (std::size_t i = 0; i < nv; ++i)
            row[i] = p.vertices[i][c];
        a.push_back(std::move(row));
        b.emplace_back(value);
    }
    return SimplexSolver(std::move(a), std::move(b));
}

inline std::vector<mpq_class> lift_objective(const VPolytope& p, std::span<const mpq_class> objective) {
    if (objective.size() != p.dimension)
        throw StructuralError("objective of length " + std::to_string(objective.size()) +
                              " in dimension " + std::to_string(p.dimension));
    std::vector<mpq_class> c(p.vertices.size(), 0);
    for (std::size_t i = 0; i < p.vertices.size(); ++i)
        for (std::size_t j = 0; j < p.dimension; ++j)
            if (objective[j] != 0 && sgn(p.vertices[i][j]) != 0)
                c[i] += objective[j] * p.vertices[i][j];
    return c;
}

} // namespace detail

/// Optimum of objective over nP intersected with the slices.
inline LpCertificate lp_extremize(const VPolytope& p, unsigned n, std::span<const mpq_class> objective,
                                  Sense sense, std::span<const SliceConstraint> slices = {}) {
    auto solver = detail::convex_combination_system(p, n, detail::slice_coordinates(p, slices));
    if (!solver.feasible())
        throw InfeasibleError("empty slice of the dilated polytope");
    auto sol = solver.optimize(detail::lift_objective(p, objective), sense);
    if (sol.status != LpStatus::optimal)
        throw Error("unexpected unbounded LP over a polytope");
    return {sol.value, std::move(sol.x)};
}

/// Membership of x in nP intersected with the slices.
inline bool contains(const VPolytope& p, unsigned n, const IntVector& x,
                     std::span<const SliceConstraint> slices = {}) {
    if (x.size() != p.dimension)
        throw StructuralError("point of length " + std::to_string(x.size()) + " in dimension " +
                              std::to_string(p.dimension));
    for (const auto& s : slices) {
        if (s.offset + s.u.size() > p.dimension)
            throw StructuralError("slice outside the ambient dimension");
        for (std::size_t h = 0; h < s.u.size(); ++h)
            if (x[s.offset + h] != s.u[h])
                return false;
    }
    detail::FixedCoordinates fixed;
    for (std::size_t c = 0; c < x.size(); ++c)
        fixed.emplace_back(c, x[c]);
    return detail::convex_combination_system(p, n, fixed).feasible();
}

struct EnumerationOptions {
    std::uint64_t node_cap = 100'000'000;
    unsigned threads = 1;
};

namespace detail {

class LatticePointWalker {
public:
    LatticePointWalker(const VPolytope& p, unsigned n, const LatticeBasis& l,
                       std::span<const SliceConstraint> slices, const EnumerationOptions& opt,
                       std::atomic<std::uint64_t>& nodes)
        : p_(p), n_(n), l_(l), slices_(slices.begin(), slices.end()),
          slice_fixed_(slice_coordinates(p, slices)), opt_(opt), nodes_(nodes) {
        if (l.dimension != p.dimension)
            throw StructuralError("lattice and polytope live in different dimensions");
    }

    /// Range of lattice coordinate y_level given the partial point.
    std::optional<std::pair<mpz_class, mpz_class>> range(std::size_t level, const IntVector& partial) const {
        const auto col = l_.pivots[level];
        FixedCoordinates fixed = slice_fixed_;
        for (std::size_t c = 0; c < col; ++c)
            fixed.emplace_back(c, partial[c]);
        auto solver = convex_combination_system(p_, n_, fixed);
        if (!solver.feasible())
            return std::nullopt;
        std::vector<mpq_class> objective(p_.dimension, 0);
        objective[col] = 1;
        auto lifted = lift_objective(p_, objective);
        auto lo = solver.optimize(lifted, Sense::minimize).value;
        auto hi = solver.optimize(lifted, Sense::maximize).value;
        const mpq_class pivot(l_.basis(level, col));
        mpq_class lo_y = (lo - partial[col]) / pivot;
        mpq_class hi_y = (hi - partial[col]) / pivot;
        mpz_class a, b;
        mpz_cdiv_q(a.get_mpz_t(), lo_y.get_num_mpz_t(), lo_y.get_den_mpz_t());
        mpz_fdiv_q(b.get_mpz_t(), hi_y.get_num_mpz_t(), hi_y.get_den_mpz_t());
        if (a > b)
            return std::nullopt;
        return std::make_pair(a, b);
    }

    IntVector step(const IntVector& partial, std::size_t level, const mpz_class& y) const {
        IntVector next = partial;
        for (std::size_t j = l_.pivots[level]; j < p_.dimension; ++j)
            next[j] += y * l_.basis(level, j);
        return next;
    }

    void walk(std::size_t level, const IntVector& partial, std::vector<mpz_class>& prefix,
              const std::function<void(const IntVector&)>& emit) const {
        if (nodes_.fetch_add(1) + 1 > opt_.node_cap) {
            std::string where;
            for (const auto& y : prefix)
                where += (where.empty() ? "" : ",") + y.get_str();
            throw BudgetExceeded("lattice-point enumeration exceeded the node cap of " +
                                 std::to_string(opt_.node_cap) + " in the subtree at lattice prefix (" +
                                 where + ")");
        }
        if (level == l_.rank) {
            if (contains(p_, n_, partial, slices_))
                emit(partial);
            return;
        }
        auto r = range(level, partial);
        if (!r)
            return;
        for (mpz_class y = r->first; y <= r->second; ++y) {
            prefix.push_back(y);
            walk(level + 1, step(partial, level, y), prefix, emit);
            prefix.pop_back();
        }
    }

private:
    const VPolytope& p_;
    unsigned n_;
    const LatticeBasis& l_;
    std::vector<SliceConstraint> slices_;
    FixedCoordinates slice_fixed_;
    EnumerationOptions opt_;
    std::atomic<std::uint64_t>& nodes_;
};

} // namespace detail

/// All x in nP, in L, and on the slices, by recursion over lattice coordinates
/// in pivot order with LP bounds on each fiber. Points come out in
/// lexicographic order of their lattice coordinates.
inline std::vector<IntVector> enumerate_lattice_points(const VPolytope& p, unsigned n,
                                                       const LatticeBasis& l,
                                                       std::span<const SliceConstraint> slices = {},
                                                       const EnumerationOptions& opt = {}) {
    std::atomic<std::uint64_t> nodes{0};
    detail::LatticePointWalker walker(p, n, l, slices, opt, nodes);
    const IntVector origin(p.dimension, 0);
    std::vector<IntVector> out;
    if (l.rank == 0) {
        if (contains(p, n, origin, slices))
            out.push_back(origin);
        return out;
    }
    auto r = walker.range(0, origin);
    if (!r)
        return out;
    std::vector<mpz_class> firsts;
    for (mpz_class y = r->first; y <= r->second; ++y)
        firsts.push_back(y);

    std::vector<std::vector<IntVector>> per_first(firsts.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            while (true) {
                auto i = next.fetch_add(1);
                if (i >= firsts.size())
                    break;
                std::vector<mpz_class> prefix{firsts[i]};
                walker.walk(1, walker.step(origin, 0, firsts[i]), prefix,
                            [&](const IntVector& x) { per_first[i].push_back(x); });
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(firsts.size())));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);
    for (auto& chunk : per_first)
        for (auto& x : chunk)
            out.push_back(std::move(x));
    return out;
}

/// |nP intersected with {x_h^e = u_h} and L|.
inline mpz_class count_slices(const VPolytope& p, unsigned n, const LatticeBasis& l,
                              std::span<const SliceConstraint> slices,
                              const EnumerationOptions& opt = {}) {
    return mpz_class(std::to_string(enumerate_lattice_points(p, n, l, slices, opt).size()));
}

} // namespace phylotope
