#pragma once

#include "model.hpp"

#include <cstddef>
#include <utility>

namespace condcompat {

/// Homogeneous system over the row-variable marginal. One equation per cell
/// (i,j), stating that the column-conditional entry times the column mass
/// equals the row-conditional entry times the row mass. Rows are grouped by
/// i with j fastest, matching row_index().
struct MarginalSystem {
    RatMatrix coeffs;  // (rows*cols) x rows
    std::size_t dim_rows = 0;
    std::size_t dim_cols = 0;

    std::size_t row_index(std::size_t i, std::size_t j) const { return i * dim_cols + j; }
};

/// Homogeneous system over the vectorized joint (row-major). A table solves
/// it exactly when both conditionals of the table match the given pair.
struct JointSystem {
    RatMatrix coeffs;  // (rows*cols) x (rows*cols)
    std::size_t dim_rows = 0;
    std::size_t dim_cols = 0;

    std::size_t vec_index(std::size_t i, std::size_t j) const { return i * dim_cols + j; }
};

inline void require_pair(const ConditionalMatrix& a, const ConditionalMatrix& b) {
    if (a.orientation() != Orientation::GivenColumn)
        throw OrientationError("first matrix must be column-conditional");
    if (b.orientation() != Orientation::GivenRow)
        throw OrientationError("second matrix must be row-conditional");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("conditional matrices must have equal shape");
    if (!a.fully_known() || !b.fully_known())
        throw UnknownEntriesPresent("both matrices must be fully known");
}

inline MarginalSystem build_marginal_system(const ConditionalMatrix& a,
                                            const ConditionalMatrix& b) {
    require_pair(a, b);
    std::size_t rows = a.rows(), cols = a.cols();
    MarginalSystem sys{RatMatrix(rows * cols, rows), rows, cols};
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            std::size_t r = sys.row_index(i, j);
            for (std::size_t s = 0; s < rows; ++s)
                sys.coeffs(r, s) = s == i ? Rational(b.at(i, j) * (a.at(i, j) - 1))
                                          : Rational(a.at(i, j) * b.at(s, j));
        }
    return sys;
}

inline JointSystem build_joint_system(const ConditionalMatrix& a, const ConditionalMatrix& b) {
    require_pair(a, b);
    std::size_t rows = a.rows(), cols = a.cols();
    JointSystem sys{RatMatrix(rows * cols, rows * cols), rows, cols};
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            std::size_t r = sys.vec_index(i, j);
            for (std::size_t s = 0; s < rows; ++s)
                if (s != i) sys.coeffs(r, sys.vec_index(s, j)) = a.at(i, j);
            for (std::size_t k = 0; k < cols; ++k)
                if (k != j) sys.coeffs(r, sys.vec_index(i, k)) = -b.at(i, j);
            sys.coeffs(r, r) = a.at(i, j) - b.at(i, j);
        }
    return sys;
}

/// Idempotent projector onto the row space of the system matrix, expressed
/// in the pivot basis of its reduced echelon form: row p of the result is
/// the echelon row whose pivot sits in column p, all other rows are zero.
/// Solutions of coeffs * x = 0 are exactly (identity - projector) * z.
inline RatMatrix row_space_projector(const RatMatrix& coeffs) {
    EchelonForm ef = row_echelon(coeffs);
    RatMatrix proj(coeffs.cols(), coeffs.cols());
    for (std::size_t k = 0; k < ef.rank; ++k)
        for (std::size_t c = 0; c < coeffs.cols(); ++c)
            proj(ef.pivot_cols[k], c) = ef.reduced(k, c);
    return proj;
}

inline RatMatrix solution_projector(const JointSystem& sys) {
    return row_space_projector(sys.coeffs);
}

}  // namespace condcompat
