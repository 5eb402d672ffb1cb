#pragma once

#include "rational.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace condcompat {

using RatVector = std::vector<Rational>;

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// Dense row-major matrix of exact rationals.
class RatMatrix {
  public:
    RatMatrix() = default;

    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_)
            throw DimensionMismatch("entry count does not match matrix shape");
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static RatMatrix from_rows(const std::vector<RatVector>& rows) {
        if (rows.empty()) return RatMatrix();
        RatMatrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols())
                throw DimensionMismatch("ragged row list");
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    void swap_rows(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < cols_; ++j)
            entries_[i * cols_ + j].swap(entries_[k * cols_ + j]);
    }

    RatVector row(std::size_t i) const {
        return RatVector(entries_.begin() + i * cols_, entries_.begin() + (i + 1) * cols_);
    }

    bool operator==(const RatMatrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

struct EchelonForm {
    RatMatrix reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form by Gauss-Jordan elimination. The pivot in each
/// column is the first nonzero entry scanning top to bottom, columns left to
/// right, so the result is deterministic for a given input.
inline EchelonForm row_echelon(const RatMatrix& m) {
    EchelonForm out{m, 0, {}};
    RatMatrix& r = out.reduced;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < r.cols() && pivot_row < r.rows(); ++col) {
        std::size_t found = r.rows();
        for (std::size_t i = pivot_row; i < r.rows(); ++i) {
            if (r(i, col) != 0) {
                found = i;
                break;
            }
        }
        if (found == r.rows()) continue;
        r.swap_rows(pivot_row, found);
        Rational lead = r(pivot_row, col);
        for (std::size_t j = col; j < r.cols(); ++j) r(pivot_row, j) /= lead;
        for (std::size_t i = 0; i < r.rows(); ++i) {
            if (i == pivot_row || r(i, col) == 0) continue;
            Rational factor = r(i, col);
            for (std::size_t j = col; j < r.cols(); ++j) r(i, j) -= factor * r(pivot_row, j);
        }
        out.pivot_cols.push_back(col);
        ++pivot_row;
    }
    out.rank = pivot_row;
    return out;
}

/// Kernel basis read off an already computed echelon form: one vector per
/// free column, with a one in the free position.
inline std::vector<RatVector> null_space(const EchelonForm& ef, std::size_t cols) {
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : ef.pivot_cols) is_pivot[c] = true;
    std::vector<RatVector> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        RatVector v(cols);
        v[free_col] = 1;
        for (std::size_t k = 0; k < ef.pivot_cols.size(); ++k)
            v[ef.pivot_cols[k]] = -ef.reduced(k, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::vector<RatVector> null_space(const RatMatrix& m) {
    return null_space(row_echelon(m), m.cols());
}

inline RatMatrix operator*(const RatMatrix& lhs, const RatMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) throw DimensionMismatch("matrix product shape mismatch");
    RatMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            if (lhs(i, k) == 0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) {
                if (rhs(k, j) == 0) continue;
                out(i, j) += lhs(i, k) * rhs(k, j);
            }
        }
    return out;
}

inline RatVector operator*(const RatMatrix& m, const RatVector& v) {
    if (m.cols() != v.size()) throw DimensionMismatch("matrix-vector shape mismatch");
    RatVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) == 0 || v[j] == 0) continue;
            out[i] += m(i, j) * v[j];
        }
    return out;
}

inline RatMatrix operator-(const RatMatrix& lhs, const RatMatrix& rhs) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
        throw DimensionMismatch("matrix difference shape mismatch");
    RatMatrix out(lhs.rows(), lhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < lhs.cols(); ++j) out(i, j) = lhs(i, j) - rhs(i, j);
    return out;
}

}  // namespace condcompat
