#pragma once

#include "lp.hpp"
#include "systems.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace condcompat {

/// Joint table induced by a row-conditional matrix and a row-variable
/// marginal: cell (i,j) = b(i,j) * marginal_i.
inline JointDistribution recover_joint(const ConditionalMatrix& b, const RatVector& row_marginal) {
    if (b.orientation() != Orientation::GivenRow)
        throw OrientationError("expected a row-conditional matrix");
    if (!b.fully_known()) throw UnknownEntriesPresent("matrix must be fully known");
    if (row_marginal.size() != b.rows())
        throw DimensionMismatch("marginal length does not match row count");
    Rational total = 0;
    for (const Rational& x : row_marginal) {
        if (x < 0) throw Error("marginal entries must be nonnegative");
        total += x;
    }
    if (total != 1) throw Error("marginal must sum to exactly one");
    std::vector<RatVector> grid(b.rows(), RatVector(b.cols()));
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            grid[i][j] = b.at(i, j) * row_marginal[i];
    return JointDistribution::from_rows(grid);
}

namespace detail {

inline RatVector col_marginal_from(const ConditionalMatrix& b, const RatVector& row_marginal) {
    RatVector out(b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t s = 0; s < b.rows(); ++s) out[j] += b.at(s, j) * row_marginal[s];
    return out;
}

/// Feasibility program over the reduced system: maximize the coordinate sum
/// subject to the nonredundant equations, sum <= 1 and nonnegativity. A
/// positive optimum scales to a stochastic solution; a zero optimum means no
/// nonnegative nontrivial solution exists.
inline std::optional<RatVector> nonnegative_kernel_marginal(const EchelonForm& ef,
                                                            std::size_t dim) {
    LinearProgram lp;
    lp.objective = RatVector(dim, Rational(1));
    lp.eq_coeffs = RatMatrix(ef.rank, dim);
    for (std::size_t r = 0; r < ef.rank; ++r)
        for (std::size_t c = 0; c < dim; ++c) lp.eq_coeffs(r, c) = ef.reduced(r, c);
    lp.eq_rhs = RatVector(ef.rank);
    lp.le_coeffs = RatMatrix(1, dim);
    for (std::size_t c = 0; c < dim; ++c) lp.le_coeffs(0, c) = 1;
    lp.le_rhs = RatVector{Rational(1)};
    LpResult res = solve(lp);
    const Optimal* opt = std::get_if<Optimal>(&res);
    if (!opt || opt->value == 0) return std::nullopt;
    RatVector marginal = opt->point;
    for (Rational& x : marginal) x /= opt->value;
    return marginal;
}

}  // namespace detail

/// Rank criterion. With I row-variable values: full rank I means no
/// nontrivial solution; rank I-1 pins the marginal up to scale, compatible
/// exactly when that direction can be scaled to a probability vector; lower
/// rank leaves several marginals, compatible when a nonnegative one exists.
inline CompatibilityVerdict check_rank(const ConditionalMatrix& a, const ConditionalMatrix& b) {
    MarginalSystem sys = build_marginal_system(a, b);
    EchelonForm ef = row_echelon(sys.coeffs);
    std::size_t dim = sys.dim_rows;
    if (ef.rank == dim) return Incompatible{ef.rank};
    if (ef.rank == dim - 1) {
        RatVector v = null_space(ef, dim).front();
        Rational total = 0;
        for (const Rational& x : v) total += x;
        if (total == 0) return Incompatible{ef.rank};
        for (Rational& x : v) x /= total;
        for (const Rational& x : v)
            if (x < 0) return Incompatible{ef.rank};
        MarginalPair marginals{v, detail::col_marginal_from(b, v)};
        JointDistribution joint = recover_joint(b, v);
        return CompatibleUnique{std::move(marginals), std::move(joint)};
    }
    std::optional<RatVector> representative = detail::nonnegative_kernel_marginal(ef, dim);
    if (!representative) return Incompatible{ef.rank};
    return CompatibleNonUnique{ef.rank, null_space(ef, dim), std::move(representative)};
}

/// Linear-programming criterion: the pair is compatible exactly when the
/// feasibility program over the reduced marginal system has a positive
/// optimum. Independent of the sign analysis in check_rank; the two must
/// agree on every input.
inline CompatibilityVerdict check_lp(const ConditionalMatrix& a, const ConditionalMatrix& b) {
    MarginalSystem sys = build_marginal_system(a, b);
    EchelonForm ef = row_echelon(sys.coeffs);
    std::size_t dim = sys.dim_rows;
    std::optional<RatVector> marginal = detail::nonnegative_kernel_marginal(ef, dim);
    if (!marginal) return Incompatible{ef.rank};
    if (ef.rank == dim - 1) {
        MarginalPair marginals{*marginal, detail::col_marginal_from(b, *marginal)};
        JointDistribution joint = recover_joint(b, *marginal);
        return CompatibleUnique{std::move(marginals), std::move(joint)};
    }
    return CompatibleNonUnique{ef.rank, null_space(ef, dim), std::move(marginal)};
}

struct CrossProductAgree {};
struct CrossProductDisagree {
    // 2x2 minor witnessing the mismatch, as row and column index pairs.
    std::size_t row1, row2, col1, col2;
};
struct CrossProductInapplicable {
    std::vector<std::pair<std::size_t, std::size_t>> zero_positions;
};
using CrossProductResult =
    std::variant<CrossProductAgree, CrossProductDisagree, CrossProductInapplicable>;

/// Division-free odds-ratio comparison over every 2x2 minor whose eight
/// entries are known and positive. Any mismatch certifies incompatibility
/// for strictly positive pairs; minors touching a zero or unknown entry are
/// skipped, and the check is inapplicable when every minor is skipped.
inline CrossProductResult cross_product_check(const ConditionalMatrix& a,
                                              const ConditionalMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("conditional matrices must have equal shape");
    bool compared = false;
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t i2 = i1 + 1; i2 < a.rows(); ++i2)
            for (std::size_t j1 = 0; j1 < a.cols(); ++j1)
                for (std::size_t j2 = j1 + 1; j2 < a.cols(); ++j2) {
                    bool usable = true;
                    for (const ConditionalMatrix* m : {&a, &b}) {
                        for (std::size_t i : {i1, i2})
                            for (std::size_t j : {j1, j2})
                                if (!m->known(i, j) || m->at(i, j) <= 0) usable = false;
                    }
                    if (!usable) continue;
                    compared = true;
                    Rational lhs = a.at(i1, j1) * a.at(i2, j2) * b.at(i2, j1) * b.at(i1, j2);
                    Rational rhs = a.at(i2, j1) * a.at(i1, j2) * b.at(i1, j1) * b.at(i2, j2);
                    if (lhs != rhs) return CrossProductDisagree{i1, i2, j1, j2};
                }
    if (compared) return CrossProductAgree{};
    CrossProductInapplicable out;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            bool zero = (a.known(i, j) && a.at(i, j) == 0) || (b.known(i, j) && b.at(i, j) == 0);
            if (zero) out.zero_positions.emplace_back(i, j);
        }
    return out;
}

struct EpsilonResult {
    Rational epsilon_star;    // smallest uniform bound on the equation residuals
    RatVector row_marginal;   // a marginal achieving it
};

/// Smallest slack that makes the pair approximately compatible: minimize t
/// such that every marginal-system residual lies in [-t, t] for some
/// probability vector. Zero exactly when the pair is compatible.
inline EpsilonResult min_epsilon(const ConditionalMatrix& a, const ConditionalMatrix& b) {
    MarginalSystem sys = build_marginal_system(a, b);
    std::size_t dim = sys.dim_rows;
    std::size_t cells = sys.coeffs.rows();
    LinearProgram lp;
    lp.objective = RatVector(dim + 1);
    lp.objective[dim] = -1;  // maximize -t
    lp.eq_coeffs = RatMatrix(1, dim + 1);
    for (std::size_t c = 0; c < dim; ++c) lp.eq_coeffs(0, c) = 1;
    lp.eq_rhs = RatVector{Rational(1)};
    lp.le_coeffs = RatMatrix(2 * cells, dim + 1);
    lp.le_rhs = RatVector(2 * cells);
    for (std::size_t r = 0; r < cells; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            lp.le_coeffs(2 * r, c) = sys.coeffs(r, c);
            lp.le_coeffs(2 * r + 1, c) = -sys.coeffs(r, c);
        }
        lp.le_coeffs(2 * r, dim) = -1;
        lp.le_coeffs(2 * r + 1, dim) = -1;
    }
    LpResult res = solve(lp);
    const Optimal* opt = std::get_if<Optimal>(&res);
    if (!opt) throw Error("slack minimization failed unexpectedly");
    RatVector marginal(opt->point.begin(), opt->point.begin() + dim);
    return EpsilonResult{opt->point[dim], std::move(marginal)};
}

}  // namespace condcompat
