#pragma once

#include "matrix.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace condcompat {

enum class Axis { Row, Column };

enum class Orientation {
    GivenColumn,  // entry (i,j) = P(row var = i | col var = j); columns sum to one
    GivenRow      // entry (i,j) = P(col var = j | row var = i); rows sum to one
};

class UnknownEntriesPresent : public Error {
  public:
    using Error::Error;
};

class OrientationError : public Error {
  public:
    using Error::Error;
};

class ZeroMarginal : public Error {
  public:
    ZeroMarginal(Axis axis, std::size_t index)
        : Error(std::string(axis == Axis::Row ? "row " : "column ") + std::to_string(index + 1) +
                " has zero total mass"),
          axis_(axis),
          index_(index) {}

    Axis axis() const { return axis_; }
    std::size_t index() const { return index_; }

  private:
    Axis axis_;
    std::size_t index_;
};

/// Conditional probability matrix. Entries may be unknown; unknowns are a
/// first-class state, not a sentinel value.
class ConditionalMatrix {
  public:
    using Entry = std::optional<Rational>;

    ConditionalMatrix(Orientation orientation, std::size_t rows, std::size_t cols)
        : orientation_(orientation), rows_(rows), cols_(cols), entries_(rows * cols) {
        if (rows_ == 0 || cols_ == 0) throw DimensionMismatch("conditional matrix must be nonempty");
    }

    static ConditionalMatrix given_column(const std::vector<std::vector<Entry>>& grid) {
        return from_grid(Orientation::GivenColumn, grid);
    }

    static ConditionalMatrix given_row(const std::vector<std::vector<Entry>>& grid) {
        return from_grid(Orientation::GivenRow, grid);
    }

    Orientation orientation() const { return orientation_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool known(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j].has_value(); }

    const Rational& at(std::size_t i, std::size_t j) const {
        const Entry& e = entries_[i * cols_ + j];
        if (!e)
            throw UnknownEntriesPresent("entry (" + std::to_string(i + 1) + "," +
                                        std::to_string(j + 1) + ") is unknown");
        return *e;
    }

    const Entry& entry(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    void set(std::size_t i, std::size_t j, Rational value) {
        entries_[i * cols_ + j] = std::move(value);
    }

    void set_unknown(std::size_t i, std::size_t j) { entries_[i * cols_ + j] = std::nullopt; }

    bool fully_known() const {
        for (const Entry& e : entries_)
            if (!e) return false;
        return true;
    }

    std::size_t unknown_count() const {
        std::size_t n = 0;
        for (const Entry& e : entries_)
            if (!e) ++n;
        return n;
    }

    std::vector<std::pair<std::size_t, std::size_t>> unknown_positions() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!known(i, j)) out.emplace_back(i, j);
        return out;
    }

    bool operator==(const ConditionalMatrix&) const = default;

  private:
    static ConditionalMatrix from_grid(Orientation orientation,
                                       const std::vector<std::vector<Entry>>& grid) {
        if (grid.empty() || grid.front().empty())
            throw DimensionMismatch("conditional matrix must be nonempty");
        ConditionalMatrix m(orientation, grid.size(), grid.front().size());
        for (std::size_t i = 0; i < m.rows_; ++i) {
            if (grid[i].size() != m.cols_) throw DimensionMismatch("ragged row list");
            for (std::size_t j = 0; j < m.cols_; ++j) m.entries_[i * m.cols_ + j] = grid[i][j];
        }
        return m;
    }

    Orientation orientation_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Entry> entries_;
};

/// Joint probability table: nonnegative entries with total mass exactly one.
class JointDistribution {
  public:
    static JointDistribution from_rows(const std::vector<RatVector>& rows) {
        if (rows.empty() || rows.front().empty())
            throw DimensionMismatch("joint distribution must be nonempty");
        JointDistribution p(rows.size(), rows.front().size());
        Rational total = 0;
        for (std::size_t i = 0; i < p.rows_; ++i) {
            if (rows[i].size() != p.cols_) throw DimensionMismatch("ragged row list");
            for (std::size_t j = 0; j < p.cols_; ++j) {
                if (rows[i][j] < 0) throw Error("joint distribution entries must be nonnegative");
                p.entries_[i * p.cols_ + j] = rows[i][j];
                total += rows[i][j];
            }
        }
        if (total != 1) throw Error("joint distribution must sum to exactly one");
        return p;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    const Rational& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    RatVector row_sums() const {
        RatVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j);
        return out;
    }

    RatVector col_sums() const {
        RatVector out(cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[j] += at(i, j);
        return out;
    }

    bool operator==(const JointDistribution&) const = default;

  private:
    JointDistribution(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    std::size_t rows_;
    std::size_t cols_;
    std::vector<Rational> entries_;
};

struct MarginalPair {
    RatVector row_marginal;  // distribution of the row variable
    RatVector col_marginal;  // distribution of the column variable
};

struct Incompatible {
    std::size_t rank = 0;
};

struct CompatibleUnique {
    MarginalPair marginals;
    JointDistribution joint;
};

struct CompatibleNonUnique {
    std::size_t rank = 0;
    std::vector<RatVector> kernel_basis;
    std::optional<RatVector> representative;  // one nonnegative marginal, when one exists
};

using CompatibilityVerdict = std::variant<Incompatible, CompatibleUnique, CompatibleNonUnique>;

inline bool is_compatible(const CompatibilityVerdict& v) {
    return !std::holds_alternative<Incompatible>(v);
}

/// Both conditionals of a strictly positive joint, derived exactly.
inline std::pair<ConditionalMatrix, ConditionalMatrix> derive_conditionals(
    const JointDistribution& p) {
    RatVector row = p.row_sums();
    RatVector col = p.col_sums();
    for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] == 0) throw ZeroMarginal(Axis::Row, i);
    for (std::size_t j = 0; j < col.size(); ++j)
        if (col[j] == 0) throw ZeroMarginal(Axis::Column, j);
    ConditionalMatrix a(Orientation::GivenColumn, p.rows(), p.cols());
    ConditionalMatrix b(Orientation::GivenRow, p.rows(), p.cols());
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) {
            a.set(i, j, Rational(p.at(i, j) / col[j]));
            b.set(i, j, Rational(p.at(i, j) / row[i]));
        }
    return {std::move(a), std::move(b)};
}

struct Violation {
    enum class Kind {
        EntryOutOfRange,     // a known entry lies outside [0, 1]
        SumMismatch,         // a fully known line does not sum to one
        KnownSumExceedsOne,  // known part of a line with unknowns already exceeds one
    };

    Kind kind;
    Axis axis;               // which kind of line the sum checks refer to
    std::size_t index;       // line index for the sum checks
    std::size_t row, col;    // entry position for EntryOutOfRange
    Rational defect;         // exact amount: entry overshoot, or sum minus one
};

inline std::string to_string(const Violation& v) {
    auto pos = [](std::size_t k) { return std::to_string(k + 1); };
    switch (v.kind) {
        case Violation::Kind::EntryOutOfRange:
            return "entry (" + pos(v.row) + "," + pos(v.col) + ") outside [0,1] by " +
                   to_fraction_string(v.defect);
        case Violation::Kind::SumMismatch:
            return std::string(v.axis == Axis::Column ? "column " : "row ") + pos(v.index) +
                   " sums to 1 + (" + to_fraction_string(v.defect) + ")";
        case Violation::Kind::KnownSumExceedsOne:
            return std::string(v.axis == Axis::Column ? "column " : "row ") + pos(v.index) +
                   " has known entries exceeding 1 by " + to_fraction_string(v.defect);
    }
    return "";
}

/// Stochasticity report. Fully known lines must sum to exactly one; lines
/// with unknowns must not already exceed one; every known entry must lie in
/// [0, 1]. Empty result means the matrix is well formed.
inline std::vector<Violation> validate(const ConditionalMatrix& m) {
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<Violation> out;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!m.known(i, j)) continue;
            const Rational& e = m.at(i, j);
            if (e < 0)
                out.push_back({Violation::Kind::EntryOutOfRange, Axis::Row, npos, i, j, e});
            else if (e > 1)
                out.push_back(
                    {Violation::Kind::EntryOutOfRange, Axis::Row, npos, i, j, Rational(e - 1)});
        }
    bool by_column = m.orientation() == Orientation::GivenColumn;
    Axis axis = by_column ? Axis::Column : Axis::Row;
    std::size_t lines = by_column ? m.cols() : m.rows();
    std::size_t span = by_column ? m.rows() : m.cols();
    for (std::size_t line = 0; line < lines; ++line) {
        Rational sum = 0;
        std::size_t unknowns = 0;
        for (std::size_t k = 0; k < span; ++k) {
            std::size_t i = by_column ? k : line;
            std::size_t j = by_column ? line : k;
            if (m.known(i, j))
                sum += m.at(i, j);
            else
                ++unknowns;
        }
        if (unknowns == 0) {
            if (sum != 1)
                out.push_back({Violation::Kind::SumMismatch, axis, line, npos, npos,
                               Rational(sum - 1)});
        } else if (sum > 1) {
            out.push_back({Violation::Kind::KnownSumExceedsOne, axis, line, npos, npos,
                           Rational(sum - 1)});
        }
    }
    return out;
}

/// Positions where exactly one of the two matrices is zero. Such cells force
/// the corresponding row-variable mass to zero or rule out compatibility, so
/// callers may want to surface them before running the checks.
inline std::vector<std::pair<std::size_t, std::size_t>> zero_pattern_warnings(
    const ConditionalMatrix& a, const ConditionalMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("conditional matrices must have equal shape");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (!a.known(i, j) || !b.known(i, j)) continue;
            if ((a.at(i, j) == 0) != (b.at(i, j) == 0)) out.emplace_back(i, j);
        }
    return out;
}

}  // namespace condcompat
