#pragma once

#include "model.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace condcompat {

class ParseError : public Error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                what),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

struct Instance {
    ConditionalMatrix col_conditional;  // section A: P(row | column), columns sum to one
    ConditionalMatrix row_conditional;  // section B: P(column | row), rows sum to one
    std::string name;
    std::optional<std::uint64_t> seed;
};

struct ParsedJoint {
    JointDistribution joint;  // section P
    std::string name;
};

namespace detail {

struct Token {
    std::string text;
    std::size_t column = 0;  // 1-based byte offset in the line
};

inline std::vector<Token> split_tokens(const std::string& line) {
    std::vector<Token> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        if (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r') {
            ++pos;
            continue;
        }
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r')
            ++pos;
        out.push_back({line.substr(start, pos - start), start + 1});
    }
    return out;
}

struct RawFile {
    std::size_t dim_rows = 0, dim_cols = 0;
    std::size_t dims_line = 0;
    std::string name;
    std::optional<std::uint64_t> seed;
    // section letter -> grid of optional entries, in file order
    std::vector<std::pair<char, std::vector<std::vector<std::optional<Rational>>>>> sections;
};

inline RawFile read_raw(std::istream& in, const std::string& allowed_sections) {
    RawFile raw;
    std::string line;
    std::size_t line_no = 0;
    char pending_section = 0;
    std::size_t pending_rows = 0;
    std::size_t section_header_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        std::size_t hash = trimmed.find('#');
        if (hash != std::string::npos) trimmed.resize(hash);
        std::vector<Token> tokens = split_tokens(trimmed);
        if (tokens.empty()) continue;

        if (pending_section != 0) {
            if (tokens.size() != raw.dim_cols) {
                std::size_t at = tokens.size() > raw.dim_cols
                                     ? tokens[raw.dim_cols].column
                                     : tokens.front().column;
                throw ParseError(line_no, at,
                                 "expected " + std::to_string(raw.dim_cols) +
                                     " entries in this row, found " +
                                     std::to_string(tokens.size()));
            }
            std::vector<std::optional<Rational>> row;
            for (const Token& t : tokens) {
                if (t.text == "?") {
                    row.push_back(std::nullopt);
                    continue;
                }
                std::optional<Rational> value = try_parse_rational(t.text);
                if (!value)
                    throw ParseError(line_no, t.column, "bad entry '" + t.text + "'");
                row.push_back(std::move(value));
            }
            raw.sections.back().second.push_back(std::move(row));
            if (--pending_rows == 0) pending_section = 0;
            continue;
        }

        const std::string& key = tokens.front().text;
        if (key == "name") {
            if (!raw.name.empty())
                throw ParseError(line_no, tokens.front().column, "duplicate name");
            std::size_t at = trimmed.find("name") + 4;
            while (at < trimmed.size() && (trimmed[at] == ' ' || trimmed[at] == '\t')) ++at;
            std::size_t end = trimmed.find_last_not_of(" \t\r");
            if (at > end || end == std::string::npos)
                throw ParseError(line_no, tokens.front().column, "name requires a value");
            raw.name = trimmed.substr(at, end - at + 1);
        } else if (key == "seed") {
            if (tokens.size() != 2)
                throw ParseError(line_no, tokens.front().column, "seed requires one value");
            try {
                raw.seed = std::stoull(tokens[1].text);
            } catch (const std::exception&) {
                throw ParseError(line_no, tokens[1].column, "bad seed '" + tokens[1].text + "'");
            }
        } else if (key == "dims") {
            if (raw.dim_rows != 0)
                throw ParseError(line_no, tokens.front().column, "duplicate dims");
            if (tokens.size() != 3)
                throw ParseError(line_no, tokens.front().column, "dims requires two values");
            long rows = 0, cols = 0;
            try {
                rows = std::stol(tokens[1].text);
                cols = std::stol(tokens[2].text);
            } catch (const std::exception&) {
                throw ParseError(line_no, tokens[1].column, "bad dims");
            }
            if (rows < 2 || cols < 2 || rows > 64 || cols > 64)
                throw ParseError(line_no, tokens[1].column, "dims must lie in [2, 64]");
            raw.dim_rows = static_cast<std::size_t>(rows);
            raw.dim_cols = static_cast<std::size_t>(cols);
            raw.dims_line = line_no;
        } else if (key.size() == 1 && allowed_sections.find(key[0]) != std::string::npos) {
            if (tokens.size() != 1)
                throw ParseError(line_no, tokens[1].column, "unexpected text after section header");
            if (raw.dim_rows == 0)
                throw ParseError(line_no, tokens.front().column, "dims must come before sections");
            for (const auto& s : raw.sections)
                if (s.first == key[0])
                    throw ParseError(line_no, tokens.front().column,
                                     std::string("duplicate section ") + key[0]);
            raw.sections.emplace_back(key[0],
                                      std::vector<std::vector<std::optional<Rational>>>());
            pending_section = key[0];
            pending_rows = raw.dim_rows;
            section_header_line = line_no;
        } else {
            throw ParseError(line_no, tokens.front().column, "unrecognized directive '" + key + "'");
        }
    }
    if (pending_section != 0)
        throw ParseError(section_header_line, 1,
                         std::string("section ") + pending_section + " is missing rows");
    return raw;
}

}  // namespace detail

/// Reads an instance file: optional name/seed metadata, a dims line, and the
/// two matrix sections A (column-conditional) and B (row-conditional).
/// Entries are exact fractions, exact decimals, or "?" for unknown.
inline Instance parse_instance(std::istream& in) {
    detail::RawFile raw = detail::read_raw(in, "AB");
    if (raw.dim_rows == 0) throw ParseError(1, 1, "missing dims line");
    const std::vector<std::vector<std::optional<Rational>>>* grid_a = nullptr;
    const std::vector<std::vector<std::optional<Rational>>>* grid_b = nullptr;
    for (const auto& s : raw.sections)
        (s.first == 'A' ? grid_a : grid_b) = &s.second;
    if (!grid_a) throw ParseError(raw.dims_line, 1, "missing section A");
    if (!grid_b) throw ParseError(raw.dims_line, 1, "missing section B");
    Instance out{ConditionalMatrix::given_column(*grid_a), ConditionalMatrix::given_row(*grid_b),
                 std::move(raw.name), raw.seed};
    return out;
}

inline Instance parse_instance_text(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

/// Reads a joint table file: optional name, dims, and section P. Unknown
/// entries are not allowed and the table must be a valid distribution.
inline ParsedJoint parse_joint(std::istream& in) {
    detail::RawFile raw = detail::read_raw(in, "P");
    if (raw.dim_rows == 0) throw ParseError(1, 1, "missing dims line");
    if (raw.sections.empty()) throw ParseError(raw.dims_line, 1, "missing section P");
    std::vector<RatVector> rows;
    for (const auto& row : raw.sections.front().second) {
        RatVector r;
        for (const auto& e : row) {
            if (!e) throw ParseError(raw.dims_line, 1, "joint tables cannot contain '?'");
            r.push_back(*e);
        }
        rows.push_back(std::move(r));
    }
    try {
        return {JointDistribution::from_rows(rows), std::move(raw.name)};
    } catch (const Error& e) {
        throw ParseError(raw.dims_line, 1, e.what());
    }
}

inline ParsedJoint parse_joint_text(const std::string& text) {
    std::istringstream in(text);
    return parse_joint(in);
}

namespace detail {

inline void write_grid(std::ostream& out, const ConditionalMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ' ';
            if (m.known(i, j))
                out << to_fraction_string(m.at(i, j));
            else
                out << '?';
        }
        out << '\n';
    }
}

}  // namespace detail

/// Writes an instance in the format parse_instance reads. Values are exact
/// fractions, so writing and re-reading reproduces the pair exactly.
inline void write_instance(std::ostream& out, const ConditionalMatrix& a,
                           const ConditionalMatrix& b, const std::string& name = "",
                           std::optional<std::uint64_t> seed = {}) {
    if (a.orientation() != Orientation::GivenColumn || b.orientation() != Orientation::GivenRow)
        throw OrientationError("instance sections are (column-conditional, row-conditional)");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("conditional matrices must have equal shape");
    if (!name.empty()) out << "name " << name << '\n';
    if (seed) out << "seed " << *seed << '\n';
    out << "dims " << a.rows() << ' ' << a.cols() << '\n';
    out << "A\n";
    detail::write_grid(out, a);
    out << "B\n";
    detail::write_grid(out, b);
}

inline void write_joint(std::ostream& out, const JointDistribution& p,
                        const std::string& name = "") {
    if (!name.empty()) out << "name " << name << '\n';
    out << "dims " << p.rows() << ' ' << p.cols() << '\n';
    out << "P\n";
    for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t j = 0; j < p.cols(); ++j) {
            if (j > 0) out << ' ';
            out << to_fraction_string(p.at(i, j));
        }
        out << '\n';
    }
}

}  // namespace condcompat
