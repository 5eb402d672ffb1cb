#pragma once

#include "matrix.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace condcompat {

/// maximize objective . x  subject to
///   eq_coeffs x  = eq_rhs
///   le_coeffs x <= le_rhs
///   x >= 0
/// Either constraint block may be empty. All arithmetic is exact.
struct LinearProgram {
    RatVector objective;
    RatMatrix eq_coeffs;
    RatVector eq_rhs;
    RatMatrix le_coeffs;
    RatVector le_rhs;
};

struct Optimal {
    Rational value;
    RatVector point;
};
struct Infeasible {};
struct Unbounded {};
using LpResult = std::variant<Optimal, Infeasible, Unbounded>;

namespace detail {

/// Full-tableau simplex with Bland's smallest-index pivoting rule, which
/// never cycles, so every phase terminates. Row layout: one row per
/// constraint plus a reduced-cost row at the end; the right-hand side sits
/// in the last column of every row.
class SimplexTableau {
  public:
    SimplexTableau(std::size_t num_rows, std::size_t num_vars)
        : num_vars_(num_vars), grid_(num_rows + 1, RatVector(num_vars + 1)), basis_(num_rows) {}

    std::size_t constraint_rows() const { return grid_.size() - 1; }
    std::size_t vars() const { return num_vars_; }

    Rational& at(std::size_t r, std::size_t c) { return grid_[r][c]; }
    Rational& rhs(std::size_t r) { return grid_[r][num_vars_]; }
    RatVector& objective_row() { return grid_.back(); }
    Rational& objective_rhs() { return grid_.back()[num_vars_]; }

    std::size_t basis(std::size_t r) const { return basis_[r]; }
    void set_basis(std::size_t r, std::size_t var) { basis_[r] = var; }

    void pivot(std::size_t row, std::size_t col) {
        Rational lead = grid_[row][col];
        for (Rational& v : grid_[row]) v /= lead;
        for (std::size_t r = 0; r < grid_.size(); ++r) {
            if (r == row || grid_[r][col] == 0) continue;
            Rational factor = grid_[r][col];
            for (std::size_t c = 0; c <= num_vars_; ++c)
                grid_[r][c] -= factor * grid_[row][c];
        }
        basis_[row] = col;
    }

    /// Runs pivots until no reduced cost is positive. Returns false when an
    /// improving column has no positive entry, i.e. the program is unbounded.
    bool run() {
        for (;;) {
            std::size_t entering = num_vars_;
            for (std::size_t c = 0; c < num_vars_; ++c) {
                if (grid_.back()[c] > 0) {
                    entering = c;
                    break;
                }
            }
            if (entering == num_vars_) return true;
            std::size_t leaving = constraint_rows();
            Rational best_ratio;
            for (std::size_t r = 0; r < constraint_rows(); ++r) {
                if (grid_[r][entering] <= 0) continue;
                Rational ratio = rhs(r) / grid_[r][entering];
                if (leaving == constraint_rows() || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[r] < basis_[leaving])) {
                    leaving = r;
                    best_ratio = ratio;
                }
            }
            if (leaving == constraint_rows()) return false;
            pivot(leaving, entering);
        }
    }

    void drop_row(std::size_t row) {
        grid_.erase(grid_.begin() + row);
        basis_.erase(basis_.begin() + row);
    }

    void drop_columns(std::size_t first, std::size_t count) {
        for (RatVector& row : grid_)
            row.erase(row.begin() + first, row.begin() + first + count);
        num_vars_ -= count;
    }

  private:
    std::size_t num_vars_;
    std::vector<RatVector> grid_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpResult solve(const LinearProgram& lp) {
    std::size_t n = lp.objective.size();
    if (n == 0) throw DimensionMismatch("objective must have at least one variable");
    std::size_t m_eq = lp.eq_rhs.size();
    std::size_t m_le = lp.le_rhs.size();
    if (lp.eq_coeffs.rows() != m_eq || (m_eq > 0 && lp.eq_coeffs.cols() != n))
        throw DimensionMismatch("equality block shape mismatch");
    if (lp.le_coeffs.rows() != m_le || (m_le > 0 && lp.le_coeffs.cols() != n))
        throw DimensionMismatch("inequality block shape mismatch");

    std::size_t m = m_eq + m_le;
    // Column layout: structural, then one slack per inequality, then
    // artificials at the tail so they can be truncated after phase one.
    std::size_t slack_begin = n;
    std::size_t art_begin = n + m_le;

    std::vector<std::size_t> art_rows;
    for (std::size_t r = 0; r < m; ++r) {
        bool is_le = r >= m_eq;
        const Rational& rhs = is_le ? lp.le_rhs[r - m_eq] : lp.eq_rhs[r];
        if (!is_le || rhs < 0) art_rows.push_back(r);
    }
    std::size_t num_art = art_rows.size();

    detail::SimplexTableau tab(m, art_begin + num_art);
    std::size_t next_art = art_begin;
    for (std::size_t r = 0; r < m; ++r) {
        bool is_le = r >= m_eq;
        const RatMatrix& block = is_le ? lp.le_coeffs : lp.eq_coeffs;
        std::size_t block_row = is_le ? r - m_eq : r;
        Rational rhs = is_le ? lp.le_rhs[block_row] : lp.eq_rhs[block_row];
        bool negate = rhs < 0;
        for (std::size_t c = 0; c < n; ++c)
            tab.at(r, c) = negate ? Rational(-block(block_row, c)) : block(block_row, c);
        if (is_le) tab.at(r, slack_begin + block_row) = negate ? -1 : 1;
        tab.rhs(r) = negate ? Rational(-rhs) : rhs;
        if (is_le && !negate) {
            tab.set_basis(r, slack_begin + block_row);
        } else {
            tab.at(r, next_art) = 1;
            tab.set_basis(r, next_art);
            ++next_art;
        }
    }

    if (num_art > 0) {
        // Phase one: maximize minus the sum of artificials, priced out so
        // the basic artificial columns start with zero reduced cost.
        for (std::size_t c = art_begin; c < art_begin + num_art; ++c)
            tab.objective_row()[c] = -1;
        for (std::size_t r = 0; r < tab.constraint_rows(); ++r) {
            if (tab.basis(r) < art_begin) continue;
            for (std::size_t c = 0; c <= tab.vars(); ++c)
                tab.objective_row()[c] += tab.at(r, c);
        }
        tab.run();  // bounded above by zero, never unbounded
        if (-tab.objective_rhs() < 0) return Infeasible{};
        for (std::size_t r = tab.constraint_rows(); r-- > 0;) {
            if (tab.basis(r) < art_begin) continue;
            std::size_t col = art_begin;
            for (std::size_t c = 0; c < art_begin; ++c) {
                if (tab.at(r, c) != 0) {
                    col = c;
                    break;
                }
            }
            if (col == art_begin)
                tab.drop_row(r);  // the constraint was redundant
            else
                tab.pivot(r, col);
        }
        tab.drop_columns(art_begin, num_art);
        for (Rational& v : tab.objective_row()) v = 0;
    }

    for (std::size_t c = 0; c < n; ++c) tab.objective_row()[c] = lp.objective[c];
    for (std::size_t r = 0; r < tab.constraint_rows(); ++r) {
        std::size_t var = tab.basis(r);
        if (var >= n || lp.objective[var] == 0) continue;
        Rational cost = lp.objective[var];
        for (std::size_t c = 0; c <= tab.vars(); ++c)
            tab.objective_row()[c] -= cost * tab.at(r, c);
    }
    if (!tab.run()) return Unbounded{};

    Optimal out{Rational(-tab.objective_rhs()), RatVector(n)};
    for (std::size_t r = 0; r < tab.constraint_rows(); ++r)
        if (tab.basis(r) < n) out.point[tab.basis(r)] = tab.rhs(r);
    return out;
}

}  // namespace condcompat
