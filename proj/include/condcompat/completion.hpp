#pragma once

#include "compat.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace condcompat {

class NoKnownColumn : public Error {
  public:
    using Error::Error;
};
class UnknownsNotConfinedToOneColumn : public Error {
  public:
    using Error::Error;
};
class PatternMismatch : public Error {
  public:
    using Error::Error;
};
class DivisionByZero : public Error {
  public:
    using Error::Error;
};
class InfeasibleFill : public Error {
  public:
    using Error::Error;
};
class SingularSystem : public Error {
  public:
    using Error::Error;
};

struct ColumnCandidate {
    std::size_t column;
    // Marginal implied by this column alone; empty when the column does not
    // pin the marginal uniquely.
    std::optional<RatVector> row_marginal;
};

struct ExactUnique {};
struct KnownColumnsInconsistent {
    std::vector<ColumnCandidate> candidates;
    std::optional<std::size_t> forced_column;
};
struct Underdetermined {
    std::size_t free_parameters = 0;
};
using CompletionDiagnostics = std::variant<ExactUnique, KnownColumnsInconsistent, Underdetermined>;

struct CompletionResult {
    ConditionalMatrix filled_a;
    ConditionalMatrix filled_b;
    RatVector row_marginal;  // empty when no exact completion was produced
    CompletionDiagnostics diagnostics;
};

namespace detail {

struct MarginalSolve {
    enum class Status { Unique, Inconsistent, Underdetermined };
    Status status;
    RatVector solution;
    std::size_t rank = 0;
};

/// Solves the marginal equations contributed by the given fully known
/// columns of a, together with the normalization row, by exact elimination.
inline MarginalSolve solve_from_columns(const ConditionalMatrix& a, const ConditionalMatrix& b,
                                        const std::vector<std::size_t>& columns) {
    std::size_t dim = a.rows();
    RatMatrix aug(columns.size() * dim + 1, dim + 1);
    std::size_t r = 0;
    for (std::size_t j : columns)
        for (std::size_t i = 0; i < dim; ++i, ++r)
            for (std::size_t s = 0; s < dim; ++s)
                aug(r, s) = s == i ? Rational(b.at(i, j) * (a.at(i, j) - 1))
                                   : Rational(a.at(i, j) * b.at(s, j));
    for (std::size_t s = 0; s < dim; ++s) aug(r, s) = 1;
    aug(r, dim) = 1;
    EchelonForm ef = row_echelon(aug);
    for (std::size_t c : ef.pivot_cols)
        if (c == dim) return {MarginalSolve::Status::Inconsistent, {}, ef.rank};
    if (ef.rank < dim) return {MarginalSolve::Status::Underdetermined, {}, ef.rank};
    RatVector solution(dim);
    for (std::size_t i = 0; i < dim; ++i) solution[i] = ef.reduced(i, dim);
    return {MarginalSolve::Status::Unique, std::move(solution), ef.rank};
}

}  // namespace detail

/// Marginal implied by a single fully known column of a, when unique.
inline std::optional<RatVector> column_marginal_candidate(const ConditionalMatrix& a,
                                                          const ConditionalMatrix& b,
                                                          std::size_t column) {
    detail::MarginalSolve s = detail::solve_from_columns(a, b, {column});
    if (s.status != detail::MarginalSolve::Status::Unique) return std::nullopt;
    return std::move(s.solution);
}

/// Completes unknown entries confined to one column of the column-conditional
/// matrix. The marginal is solved exactly from the fully known columns; when
/// they disagree the per-column candidates are reported instead, unless a
/// forced column selects one of them to complete from anyway.
inline CompletionResult complete_column(const ConditionalMatrix& a, const ConditionalMatrix& b,
                                        std::optional<std::size_t> force_column = {}) {
    if (a.orientation() != Orientation::GivenColumn)
        throw OrientationError("first matrix must be column-conditional");
    if (b.orientation() != Orientation::GivenRow)
        throw OrientationError("second matrix must be row-conditional");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("conditional matrices must have equal shape");
    if (!b.fully_known())
        throw UnknownEntriesPresent("row-conditional matrix must be fully known");
    auto unknowns = a.unknown_positions();
    if (unknowns.empty()) throw PatternMismatch("no unknown entries to complete");
    std::size_t target = unknowns.front().second;
    for (const auto& [i, j] : unknowns)
        if (j != target)
            throw UnknownsNotConfinedToOneColumn("unknown entries span more than one column");

    std::vector<std::size_t> known_cols;
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (j != target) known_cols.push_back(j);
    if (known_cols.empty()) throw NoKnownColumn("no fully known column to solve from");

    auto candidates = [&] {
        std::vector<ColumnCandidate> out;
        for (std::size_t j : known_cols) out.push_back({j, column_marginal_candidate(a, b, j)});
        return out;
    };

    detail::MarginalSolve stacked = detail::solve_from_columns(a, b, known_cols);
    RatVector marginal;
    bool forced_inconsistent = false;
    if (force_column) {
        std::size_t j = *force_column;
        if (j >= a.cols() || j == target)
            throw Error("forced column " + std::to_string(j + 1) + " is not a known column");
        std::optional<RatVector> cand = column_marginal_candidate(a, b, j);
        if (!cand)
            throw SingularSystem("column " + std::to_string(j + 1) +
                                 " does not determine the marginal uniquely");
        marginal = std::move(*cand);
        forced_inconsistent = stacked.status != detail::MarginalSolve::Status::Unique;
    } else {
        if (stacked.status == detail::MarginalSolve::Status::Inconsistent)
            return {a, b, {}, KnownColumnsInconsistent{candidates(), {}}};
        if (stacked.status == detail::MarginalSolve::Status::Underdetermined)
            return {a, b, {}, Underdetermined{a.rows() - stacked.rank}};
        marginal = stacked.solution;
    }

    for (const Rational& x : marginal)
        if (x < 0) throw InfeasibleFill("implied marginal has a negative entry");
    Rational mass = 0;
    for (std::size_t s = 0; s < a.rows(); ++s) mass += b.at(s, target) * marginal[s];
    if (mass == 0) return {a, b, marginal, Underdetermined{unknowns.size() - 1}};

    ConditionalMatrix filled = a;
    bool knowns_match = true;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Rational value = b.at(i, target) * marginal[i] / mass;
        if (a.known(i, target)) {
            if (a.at(i, target) != value) knowns_match = false;
        } else {
            filled.set(i, target, std::move(value));
        }
    }
    if (!knowns_match && !force_column)
        return {a, b, {}, KnownColumnsInconsistent{candidates(), {}}};
    CompletionDiagnostics diag =
        (force_column && (forced_inconsistent || !knowns_match))
            ? CompletionDiagnostics(KnownColumnsInconsistent{candidates(), force_column})
            : CompletionDiagnostics(ExactUnique{});
    return {std::move(filled), b, std::move(marginal), std::move(diag)};
}

/// Closed-form completion for the 2x3 pattern with the middle column of the
/// column-conditional matrix unknown and the last two entries of the first
/// row of the row-conditional matrix unknown. Verified before returning.
inline CompletionResult complete_pair_2x3(const ConditionalMatrix& a, const ConditionalMatrix& b) {
    if (a.orientation() != Orientation::GivenColumn)
        throw OrientationError("first matrix must be column-conditional");
    if (b.orientation() != Orientation::GivenRow)
        throw OrientationError("second matrix must be row-conditional");
    if (a.rows() != 2 || a.cols() != 3 || b.rows() != 2 || b.cols() != 3)
        throw PatternMismatch("solver requires a 2x3 pair");
    using Positions = std::vector<std::pair<std::size_t, std::size_t>>;
    if (a.unknown_positions() != Positions{{0, 1}, {1, 1}})
        throw PatternMismatch("first matrix must have exactly its middle column unknown");
    if (b.unknown_positions() != Positions{{0, 1}, {0, 2}})
        throw PatternMismatch(
            "second matrix must have exactly the last two entries of its first row unknown");

    Rational eta_den = a.at(0, 0) * b.at(1, 0) + b.at(0, 0) * (1 - a.at(0, 0));
    if (eta_den == 0) throw DivisionByZero("first-column equations degenerate");
    Rational eta0 = a.at(0, 0) * b.at(1, 0) / eta_den;
    Rational eta1 = 1 - eta0;

    Rational beta_den = a.at(0, 0) * a.at(1, 2) * b.at(1, 0);
    if (beta_den == 0) throw DivisionByZero("last-column equations degenerate");
    Rational fill_b02 = b.at(0, 0) * b.at(1, 2) * a.at(1, 0) * a.at(0, 2) / beta_den;
    Rational fill_b01 = 1 - b.at(0, 0) - fill_b02;

    Rational alpha_den = fill_b01 * eta0 + b.at(1, 1) * eta1;
    if (alpha_den == 0) throw DivisionByZero("middle-column equations degenerate");
    Rational fill_a01 = fill_b01 * eta0 / alpha_den;
    Rational fill_a11 = 1 - fill_a01;

    for (const Rational* v : {&fill_a01, &fill_a11, &fill_b01, &fill_b02})
        if (*v < 0 || *v > 1) throw InfeasibleFill("a completed entry falls outside [0,1]");

    ConditionalMatrix filled_a = a;
    filled_a.set(0, 1, fill_a01);
    filled_a.set(1, 1, fill_a11);
    ConditionalMatrix filled_b = b;
    filled_b.set(0, 1, fill_b01);
    filled_b.set(0, 2, fill_b02);

    CompatibilityVerdict verdict = check_rank(filled_a, filled_b);
    const CompatibleUnique* unique = std::get_if<CompatibleUnique>(&verdict);
    if (!unique || unique->marginals.row_marginal != RatVector{eta0, eta1})
        throw InfeasibleFill("completed pair failed compatibility verification");
    return {std::move(filled_a), std::move(filled_b), {eta0, eta1}, ExactUnique{}};
}

struct EpsilonEstimate {
    RatVector row_marginal;  // solves the two fully known cell equations at the given slack
    Rational fill_first;     // estimate for the (1,2) entry of the column-conditional matrix
    Rational fill_second;    // estimate for its (2,2) entry, as the column remainder
};

/// Slack-parametrized estimates for the 3x2 pattern with the top two entries
/// of the second column of the column-conditional matrix unknown. The two
/// cell equations of the fully known bottom row are set to equal the slack,
/// the normalization row is appended, and the 3x3 system is solved exactly;
/// the unknown entries then follow from the middle-column equation at the
/// same slack and the column sum. At slack zero this reduces to the exact
/// compatible solution.
inline EpsilonEstimate epsilon_estimates(const ConditionalMatrix& a, const ConditionalMatrix& b,
                                         const Rational& slack) {
    if (a.orientation() != Orientation::GivenColumn)
        throw OrientationError("first matrix must be column-conditional");
    if (b.orientation() != Orientation::GivenRow)
        throw OrientationError("second matrix must be row-conditional");
    if (a.rows() != 3 || a.cols() != 2 || b.rows() != 3 || b.cols() != 2)
        throw PatternMismatch("solver requires a 3x2 pair");
    using Positions = std::vector<std::pair<std::size_t, std::size_t>>;
    if (a.unknown_positions() != Positions{{0, 1}, {1, 1}})
        throw PatternMismatch(
            "first matrix must have exactly the top two entries of its second column unknown");
    if (!b.fully_known())
        throw UnknownEntriesPresent("row-conditional matrix must be fully known");
    if (slack < 0) throw Error("slack must be nonnegative");

    RatMatrix aug(3, 4);
    for (std::size_t j = 0; j < 2; ++j) {
        aug(j, 0) = a.at(2, j) * b.at(0, j);
        aug(j, 1) = a.at(2, j) * b.at(1, j);
        aug(j, 2) = b.at(2, j) * (a.at(2, j) - 1);
        aug(j, 3) = slack;
    }
    for (std::size_t s = 0; s < 3; ++s) aug(2, s) = 1;
    aug(2, 3) = 1;
    EchelonForm ef = row_echelon(aug);
    if (ef.rank != 3 || ef.pivot_cols != std::vector<std::size_t>{0, 1, 2})
        throw SingularSystem("known-row equations do not determine the marginal");
    RatVector marginal{ef.reduced(0, 3), ef.reduced(1, 3), ef.reduced(2, 3)};

    Rational mass = 0;
    for (std::size_t s = 0; s < 3; ++s) mass += b.at(s, 1) * marginal[s];
    if (mass == 0) throw SingularSystem("unknown column has zero implied mass");
    Rational fill_first = (slack + b.at(0, 1) * marginal[0]) / mass;
    Rational fill_second = 1 - fill_first - a.at(2, 1);
    return {std::move(marginal), std::move(fill_first), std::move(fill_second)};
}

}  // namespace condcompat
