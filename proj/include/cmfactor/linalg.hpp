#pragma once

// Dense exact linear algebra over CycScalar: echelon forms, rank, nullspaces,
// and an incremental subspace basis with coordinate extraction.

#include "cmfactor/exactfield.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cmfactor {

using Vec = std::vector<CycScalar>;

inline bool is_zero(const Vec& v) {
    for (const auto& s : v)
        if (!s.is_zero()) return false;
    return true;
}

inline Vec zero_vec(std::size_t n) { return Vec(n, CycScalar(0)); }

inline Vec unit_vec(std::size_t n, std::size_t i) {
    Vec v = zero_vec(n);
    v[i] = 1;
    return v;
}

inline Vec& axpy(Vec& y, const CycScalar& a, const Vec& x) {
    if (a.is_zero()) return y;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!x[i].is_zero()) y[i] += a * x[i];
    return y;
}

inline Vec scaled(const Vec& x, const CycScalar& a) {
    Vec y = x;
    for (auto& s : y) s *= a;
    return y;
}

inline Vec operator+(Vec a, const Vec& b) { return axpy(a, 1, b); }
inline Vec operator-(Vec a, const Vec& b) { return axpy(a, -1, b); }

/// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, CycScalar(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    /// Matrix whose columns are the given vectors.
    static Matrix from_columns(const std::vector<Vec>& cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    CycScalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const CycScalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Vec row(std::size_t i) const { return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }
    Vec col(std::size_t j) const {
        Vec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    Vec apply(const Vec& x) const {
        if (x.size() != cols_) throw std::invalid_argument("Matrix::apply: dimension mismatch");
        Vec y = zero_vec(rows_);
        for (std::size_t j = 0; j < cols_; ++j) {
            if (x[j].is_zero()) continue;
            for (std::size_t i = 0; i < rows_; ++i) {
                const auto& e = (*this)(i, j);
                if (!e.is_zero()) y[i] += e * x[j];
            }
        }
        return y;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix product: dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto& x = a(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const auto& y = b(k, j);
                    if (!y.is_zero()) c(i, j) += x * y;
                }
            }
        return c;
    }
    friend Matrix operator-(Matrix a, const Matrix& b) {
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
        return a;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) {
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
        return a;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    CycScalar trace() const {
        CycScalar t(0);
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }
    bool is_zero() const {
        for (const auto& s : a_)
            if (!s.is_zero()) return false;
        return true;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<CycScalar> a_;
};

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(Matrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        CycScalar inv = m(r, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j)
            if (!m(r, j).is_zero()) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            CycScalar f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(Matrix m) { return rref(m).size(); }

/// Basis of {x : m x = 0}.
inline std::vector<Vec> nullspace(Matrix m) {
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols(), false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<Vec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_piv[f]) continue;
        Vec v = zero_vec(m.cols());
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solves m x = b; nullopt when inconsistent.
inline std::optional<Vec> solve(const Matrix& m, const Vec& b) {
    Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
    Vec x = zero_vec(m.cols());
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, m.cols());
    return x;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    std::size_t n = m.rows();
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

/// Incrementally built basis of a subspace of K^dim, kept in reduced echelon
/// form so that membership tests and coordinates are cheap.
class SubspaceBasis {
public:
    explicit SubspaceBasis(std::size_t dim) : dim_(dim) {}

    std::size_t ambient_dim() const { return dim_; }
    std::size_t size() const { return generators_.size(); }
    const std::vector<Vec>& generators() const { return generators_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Adds v; returns false when v already lies in the span.
    bool insert(const Vec& v) {
        if (v.size() != dim_) throw std::invalid_argument("SubspaceBasis: dimension mismatch");
        std::size_t k = generators_.size();
        Vec r = v;
        Vec rc = zero_vec(k + 1);
        rc[k] = 1;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (!r[pivots_[i]].is_zero()) {
                CycScalar f = r[pivots_[i]];
                axpy(r, -f, rows_[i]);
                for (std::size_t j = 0; j < coords_[i].size(); ++j)
                    if (!coords_[i][j].is_zero()) rc[j] -= f * coords_[i][j];
            }
        std::size_t p = 0;
        while (p < dim_ && r[p].is_zero()) ++p;
        if (p == dim_) return false;
        CycScalar inv = r[p].inverse();
        for (auto& s : r) s *= inv;
        for (auto& s : rc) s *= inv;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            coords_[i].resize(k + 1, CycScalar(0));
            if (rows_[i][p].is_zero()) continue;
            CycScalar f = rows_[i][p];
            axpy(rows_[i], -f, r);
            axpy(coords_[i], -f, rc);
        }
        pivots_.push_back(p);
        rows_.push_back(std::move(r));
        coords_.push_back(std::move(rc));
        generators_.push_back(v);
        return true;
    }

    bool contains(const Vec& v) const { return ::cmfactor::is_zero(reduce(v)); }

    /// Coordinates of v with respect to the inserted generators; nullopt if outside.
    std::optional<Vec> coordinates(const Vec& v) const {
        if (!contains(v)) return std::nullopt;
        Vec c = zero_vec(generators_.size());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const auto& f = v[pivots_[i]];
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < coords_[i].size(); ++j)
                if (!coords_[i][j].is_zero()) c[j] += f * coords_[i][j];
        }
        return c;
    }

    /// Residual of v after removing its component in the span.
    Vec reduce(const Vec& v) const {
        if (v.size() != dim_) throw std::invalid_argument("SubspaceBasis: dimension mismatch");
        Vec r = v;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (!r[pivots_[i]].is_zero()) {
                CycScalar f = r[pivots_[i]];
                axpy(r, -f, rows_[i]);
            }
        return r;
    }

private:
    std::size_t dim_;
    std::vector<Vec> generators_;
    std::vector<Vec> rows_;            // reduced echelon rows
    std::vector<std::size_t> pivots_;  // pivot column of each row
    std::vector<Vec> coords_;          // rows_[i] in terms of generators_
};

/// Row echelon form with sparse rows; pivots are the leftmost nonzero column
/// of each row, so reduction sweeps columns left to right.
class SparseEchelon {
public:
    explicit SparseEchelon(std::size_t dim) : dim_(dim), pivot_row_(dim, -1) {}

    std::size_t ambient_dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    bool is_pivot(std::size_t col) const { return pivot_row_[col] >= 0; }

    Vec reduce(Vec v) const {
        if (v.size() != dim_) throw std::invalid_argument("SparseEchelon: dimension mismatch");
        for (std::size_t c = 0; c < dim_; ++c) {
            if (v[c].is_zero() || pivot_row_[c] < 0) continue;
            CycScalar f = v[c];
            for (const auto& [j, a] : rows_[pivot_row_[c]]) v[j] -= f * a;
        }
        return v;
    }

    bool insert(const Vec& v) {
        Vec r = reduce(v);
        std::size_t p = 0;
        while (p < dim_ && r[p].is_zero()) ++p;
        if (p == dim_) return false;
        CycScalar inv = r[p].inverse();
        std::vector<std::pair<std::size_t, CycScalar>> row;
        for (std::size_t j = p; j < dim_; ++j)
            if (!r[j].is_zero()) row.emplace_back(j, r[j] * inv);
        pivot_row_[p] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(row));
        return true;
    }

private:
    std::size_t dim_;
    std::vector<int> pivot_row_;
    std::vector<std::vector<std::pair<std::size_t, CycScalar>>> rows_;
};

}  // namespace cmfactor
