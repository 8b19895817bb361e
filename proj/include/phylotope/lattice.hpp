#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "phylotope/errors.hpp"
#include "phylotope/model.hpp"

namespace phylotope {

using IntVector = std::vector<mpz_class>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntegerMatrix identity(std::size_t n) {
        IntegerMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static IntegerMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
        IntegerMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw StructuralError("ragged matrix rows");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntegerMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
        std::size_t cols = rows.size() ? rows.begin()->size() : 0;
        IntegerMatrix m(rows.size(), cols);
        std::size_t i = 0;
        for (const auto& r : rows) {
            if (r.size() != cols)
                throw StructuralError("ragged matrix rows");
            std::size_t j = 0;
            for (long v : r)
                m(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVector row(std::size_t i) const {
        return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }
    /// row[dst] -= factor * row[src]
    void subtract_multiple(std::size_t dst, std::size_t src, const mpz_class& factor) {
        for (std::size_t j = 0; j < cols_; ++j)
            if (sgn((*this)(src, j)) != 0)
                (*this)(dst, j) -= factor * (*this)(src, j);
    }
    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(i, j) = -(*this)(i, j);
    }
    bool row_is_zero(std::size_t i) const {
        for (std::size_t j = 0; j < cols_; ++j)
            if (sgn((*this)(i, j)) != 0)
                return false;
        return true;
    }

    /// Leading rows [0, count).
    IntegerMatrix top_rows(std::size_t count) const {
        IntegerMatrix m(count, cols_);
        for (std::size_t i = 0; i < count * cols_; ++i)
            m.data_[i] = data_[i];
        return m;
    }

    friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
        if (a.cols_ != b.rows_)
            throw StructuralError("matrix product dimension mismatch");
        IntegerMatrix m(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto& x = a(i, k);
                if (sgn(x) == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    m(i, j) += x * b(k, j);
            }
        return m;
    }

    friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<mpz_class> data_;
};

/// Fraction-free (Bareiss) determinant of a square matrix.
inline mpz_class determinant(IntegerMatrix m) {
    if (m.rows() != m.cols())
        throw StructuralError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m(swap, k) == 0)
                ++swap;
            if (swap == n)
                return 0;
            m.swap_rows(k, swap);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = v;
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

struct HnfResult {
    IntegerMatrix H;
    IntegerMatrix U;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

namespace detail {

/// Row-style HNF in place by Euclidean pivoting; applies the same row
/// operations to *U when given. Returns pivot columns.
inline std::vector<std::size_t> hnf_in_place(IntegerMatrix& a, IntegerMatrix* u) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    mpz_class q;
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        a.swap_rows(i, j);
        if (u)
            u->swap_rows(i, j);
    };
    auto subtract = [&](std::size_t dst, std::size_t src, const mpz_class& f) {
        a.subtract_multiple(dst, src, f);
        if (u)
            u->subtract_multiple(dst, src, f);
    };
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        while (true) {
            std::size_t best = a.rows();
            for (std::size_t i = row; i < a.rows(); ++i)
                if (sgn(a(i, col)) != 0 &&
                    (best == a.rows() || mpz_cmpabs(a(i, col).get_mpz_t(), a(best, col).get_mpz_t()) < 0))
                    best = i;
            if (best == a.rows())
                break;
            swap_rows(row, best);
            bool cleared = true;
            for (std::size_t i = row + 1; i < a.rows(); ++i) {
                if (sgn(a(i, col)) == 0)
                    continue;
                mpz_fdiv_q(q.get_mpz_t(), a(i, col).get_mpz_t(), a(row, col).get_mpz_t());
                subtract(i, row, q);
                if (sgn(a(i, col)) != 0)
                    cleared = false;
            }
            if (cleared)
                break;
        }
        if (sgn(a(row, col)) == 0)
            continue;
        if (sgn(a(row, col)) < 0) {
            a.negate_row(row);
            if (u)
                u->negate_row(row);
        }
        for (std::size_t i = 0; i < row; ++i) {
            mpz_fdiv_q(q.get_mpz_t(), a(i, col).get_mpz_t(), a(row, col).get_mpz_t());
            if (sgn(q) != 0)
                subtract(i, row, q);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace detail

/// U * A = H with U unimodular and H in row Hermite normal form; the nonzero
/// rows of H (the first `rank`) form a basis of the row lattice of A.
inline HnfResult hnf(const IntegerMatrix& a) {
    HnfResult r{a, IntegerMatrix::identity(a.rows()), {}, 0};
    r.pivots = detail::hnf_in_place(r.H, &r.U);
    r.rank = r.pivots.size();
    return r;
}

/// Checks the row-HNF shape: zero rows last, strictly increasing positive
/// pivots, zeros below and entries in [0, pivot) above each pivot.
inline bool is_hnf(const IntegerMatrix& h) {
    std::size_t prev_pivot = 0;
    bool seen_zero_row = false;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t p = 0;
        while (p < h.cols() && sgn(h(i, p)) == 0)
            ++p;
        if (p == h.cols()) {
            seen_zero_row = true;
            continue;
        }
        if (seen_zero_row || (i > 0 && p <= prev_pivot) || sgn(h(i, p)) <= 0)
            return false;
        for (std::size_t k = 0; k < h.rows(); ++k) {
            if (k < i && (sgn(h(k, p)) < 0 || h(k, p) >= h(i, p)))
                return false;
            if (k > i && sgn(h(k, p)) != 0)
                return false;
        }
        prev_pivot = p;
    }
    return true;
}

/// HNF basis of a lattice in Z^d.
struct LatticeBasis {
    std::size_t rank = 0;
    std::size_t dimension = 0;
    IntegerMatrix basis;  // rank x dimension
    std::vector<std::size_t> pivots;
    std::string provenance;
};

inline LatticeBasis lattice_from_vectors(std::span<const IntVector> gens, std::size_t dimension) {
    IntegerMatrix a = IntegerMatrix::from_rows({gens.begin(), gens.end()}, dimension);
    auto pivots = detail::hnf_in_place(a, nullptr);
    LatticeBasis b;
    b.rank = pivots.size();
    b.dimension = dimension;
    b.basis = a.top_rows(b.rank);
    b.pivots = std::move(pivots);
    return b;
}

inline IntVector to_int_vector(const ExponentVector& v) {
    return IntVector(v.coords.begin(), v.coords.end());
}

/// Lattice generated by the vertices themselves (not their differences).
inline LatticeBasis lattice_from_vertices(std::span<const ExponentVector> vertices) {
    if (vertices.empty())
        throw StructuralError("lattice of an empty vertex set");
    std::vector<IntVector> gens;
    for (const auto& v : vertices)
        gens.push_back(to_int_vector(v));
    auto b = lattice_from_vectors(gens, vertices.front().coords.size());
    if (vertices.front().layout)
        b.provenance = vertices.front().layout->tree + " over " + vertices.front().layout->group;
    return b;
}

/// Unique y with y * basis = x, or nullopt when x is not in the lattice.
inline std::optional<IntVector> to_lattice_coords(const LatticeBasis& b, const IntVector& x) {
    if (x.size() != b.dimension)
        throw StructuralError("vector of length " + std::to_string(x.size()) +
                              " in a lattice of dimension " + std::to_string(b.dimension));
    IntVector residual = x;
    IntVector y(b.rank);
    for (std::size_t i = 0; i < b.rank; ++i) {
        const auto p = b.pivots[i];
        // columns before p are already cleared by earlier rows
        if (!mpz_divisible_p(residual[p].get_mpz_t(), b.basis(i, p).get_mpz_t()))
            return std::nullopt;
        mpz_divexact(y[i].get_mpz_t(), residual[p].get_mpz_t(), b.basis(i, p).get_mpz_t());
        if (sgn(y[i]) != 0)
            for (std::size_t j = p; j < b.dimension; ++j)
                residual[j] -= y[i] * b.basis(i, j);
    }
    for (const auto& r : residual)
        if (sgn(r) != 0)
            return std::nullopt;
    return y;
}

inline IntVector from_lattice_coords(const LatticeBasis& b, const IntVector& y) {
    if (y.size() != b.rank)
        throw StructuralError("lattice coordinates of length " + std::to_string(y.size()) +
                              " for rank " + std::to_string(b.rank));
    IntVector x(b.dimension);
    for (std::size_t i = 0; i < b.rank; ++i)
        if (sgn(y[i]) != 0)
            for (std::size_t j = 0; j < b.dimension; ++j)
                x[j] += y[i] * b.basis(i, j);
    return x;
}

/// Rank of {v_i - v_0}.
inline std::size_t affine_dimension(std::span<const IntVector> points) {
    if (points.empty())
        throw StructuralError("affine dimension of an empty set");
    const std::size_t d = points.front().size();
    std::vector<IntVector> diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        IntVector v(d);
        for (std::size_t j = 0; j < d; ++j)
            v[j] = points[i][j] - points[0][j];
        diffs.push_back(std::move(v));
    }
    if (diffs.empty())
        return 0;
    return lattice_from_vectors(diffs, d).rank;
}

inline std::size_t affine_dimension(std::span<const ExponentVector> vertices) {
    std::vector<IntVector> pts;
    for (const auto& v : vertices)
        pts.push_back(to_int_vector(v));
    return affine_dimension(std::span<const IntVector>(pts));
}

} // namespace phylotope
