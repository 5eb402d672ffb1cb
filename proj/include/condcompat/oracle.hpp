#pragma once

#include "model.hpp"

#include <cstdint>
#include <cstddef>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace condcompat {

class EntryOutOfRange : public Error {
  public:
    using Error::Error;
};

/// Deterministic instance generator: equal seed and parameters produce
/// identical output on every platform (the engine sequence is fixed by the
/// standard and reduction is plain modulo).
struct Generator {
    std::uint64_t seed = 0;
    std::size_t dim_rows = 2;
    std::size_t dim_cols = 2;
    Rational positivity_floor;

    Generator(std::uint64_t seed, std::size_t dim_rows, std::size_t dim_cols)
        : Generator(seed, dim_rows, dim_cols,
                    Rational(1, static_cast<unsigned long>(100 * dim_rows * dim_cols))) {}

    Generator(std::uint64_t seed, std::size_t dim_rows, std::size_t dim_cols,
              Rational positivity_floor)
        : seed(seed),
          dim_rows(dim_rows),
          dim_cols(dim_cols),
          positivity_floor(std::move(positivity_floor)) {}
};

/// Strictly positive random joint: an integer grid normalized by its total.
/// Integers are drawn from [1, K] with K chosen so that even the worst grid
/// keeps every cell at or above the positivity floor.
inline JointDistribution random_joint(const Generator& g) {
    if (g.dim_rows < 2 || g.dim_cols < 2) throw Error("generator dims must be at least 2x2");
    std::size_t cells = g.dim_rows * g.dim_cols;
    if (g.positivity_floor <= 0 || g.positivity_floor > Rational(1, static_cast<unsigned long>(cells)))
        throw Error("positivity floor must lie in (0, 1/cells]");
    // min cell value is 1/(1 + (cells-1) K), so K <= (1/floor - 1)/(cells-1).
    Rational bound = (Rational(1) / g.positivity_floor - 1) / static_cast<unsigned long>(cells - 1);
    Int k_int = numerator(bound) / denominator(bound);
    if (k_int < 1) throw Error("positivity floor too tight for this shape");
    std::uint64_t k = k_int > 1000000 ? 1000000 : k_int.convert_to<std::uint64_t>();

    std::mt19937_64 engine(g.seed);
    std::vector<RatVector> grid(g.dim_rows, RatVector(g.dim_cols));
    Int total = 0;
    std::vector<std::uint64_t> draws(cells);
    for (std::uint64_t& d : draws) {
        d = 1 + engine() % k;
        total += d;
    }
    for (std::size_t i = 0; i < g.dim_rows; ++i)
        for (std::size_t j = 0; j < g.dim_cols; ++j)
            grid[i][j] = Rational(Int(draws[i * g.dim_cols + j]), total);
    return JointDistribution::from_rows(grid);
}

/// Moves mass delta between two entries of the first column of the
/// column-conditional matrix (smallest entry up, largest entry down), which
/// preserves the column sum and generically destroys compatibility. The
/// caller verifies the result; delta zero returns the pair unchanged.
inline std::pair<ConditionalMatrix, ConditionalMatrix> perturb_to_incompatible(
    const ConditionalMatrix& a, const ConditionalMatrix& b, const Rational& delta) {
    if (a.orientation() != Orientation::GivenColumn)
        throw OrientationError("first matrix must be column-conditional");
    if (b.orientation() != Orientation::GivenRow)
        throw OrientationError("second matrix must be row-conditional");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("conditional matrices must have equal shape");
    if (!a.fully_known() || !b.fully_known())
        throw UnknownEntriesPresent("both matrices must be fully known");
    if (delta < 0) throw Error("delta must be nonnegative");
    if (delta == 0) return {a, b};

    std::size_t up = 0, down = 0;
    for (std::size_t i = 1; i < a.rows(); ++i) {
        if (a.at(i, 0) < a.at(up, 0)) up = i;
        if (a.at(i, 0) > a.at(down, 0)) down = i;
    }
    if (up == down) down = up == 0 ? 1 : 0;
    Rational raised = a.at(up, 0) + delta;
    Rational lowered = a.at(down, 0) - delta;
    if (raised > 1 || lowered < 0)
        throw EntryOutOfRange("delta pushes a first-column entry outside [0,1]");
    ConditionalMatrix out = a;
    out.set(up, 0, std::move(raised));
    out.set(down, 0, std::move(lowered));
    return {std::move(out), b};
}

namespace detail {

template <typename Fn>
void for_each_composition(std::size_t parts, std::size_t total, std::vector<std::size_t>& buf,
                          std::size_t index, Fn&& fn) {
    if (index + 1 == parts) {
        buf[index] = total;
        fn(buf);
        return;
    }
    for (std::size_t v = 0; v <= total; ++v) {
        buf[index] = v;
        for_each_composition(parts, total - v, buf, index + 1, fn);
    }
}

}  // namespace detail

/// Brute-force reference for the smallest slack: sweeps the marginal simplex
/// on a grid of the given step count and returns the smallest over the grid
/// of the largest absolute cell residual. Always an upper bound on the true
/// minimum; computed straight from the matrix entries so it shares no
/// solver code with the checks it validates.
inline Rational grid_min_violation(const ConditionalMatrix& a, const ConditionalMatrix& b,
                                   std::size_t steps) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("conditional matrices must have equal shape");
    if (!a.fully_known() || !b.fully_known())
        throw UnknownEntriesPresent("both matrices must be fully known");
    if (steps == 0) throw Error("steps must be positive");

    std::optional<Rational> best;
    std::vector<std::size_t> buf(a.rows());
    RatVector marginal(a.rows());
    detail::for_each_composition(a.rows(), steps, buf, 0, [&](const std::vector<std::size_t>& k) {
        for (std::size_t i = 0; i < a.rows(); ++i)
            marginal[i] = Rational(static_cast<unsigned long>(k[i]),
                                   static_cast<unsigned long>(steps));
        Rational worst = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Rational col_mass = 0;
            for (std::size_t s = 0; s < a.rows(); ++s) col_mass += b.at(s, j) * marginal[s];
            for (std::size_t i = 0; i < a.rows(); ++i) {
                Rational residual = a.at(i, j) * col_mass - b.at(i, j) * marginal[i];
                if (residual < 0) residual = -residual;
                if (residual > worst) worst = residual;
            }
        }
        if (!best || worst < *best) best = worst;
    });
    return *best;
}

}  // namespace condcompat
