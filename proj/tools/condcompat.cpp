#include <condcompat/condcompat.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cc = condcompat;

namespace {

// Exit statuses shared with the test suite. "check" reports compatibility
// through the status so scripts can branch without parsing output.
constexpr int exit_ok = 0;
constexpr int exit_incompatible = 1;
constexpr int exit_error = 2;
constexpr int exit_disagreement = 3;
constexpr int exit_unresolved = 4;

cc::Instance load_instance(const std::string& path) {
    if (path == "-") return cc::parse_instance(std::cin);
    std::ifstream in(path);
    if (!in) throw cc::Error("cannot open " + path);
    return cc::parse_instance(in);
}

cc::ParsedJoint load_joint(const std::string& path) {
    if (path == "-") return cc::parse_joint(std::cin);
    std::ifstream in(path);
    if (!in) throw cc::Error("cannot open " + path);
    return cc::parse_joint(in);
}

std::string join_fractions(const cc::RatVector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ' ';
        out += cc::to_fraction_string(v[i]);
    }
    return out;
}

// Prints stochasticity violations for both matrices; true when clean.
bool validate_pair(const cc::Instance& inst) {
    bool ok = true;
    for (const auto* m : {&inst.col_conditional, &inst.row_conditional}) {
        const char* label = m == &inst.col_conditional ? "A" : "B";
        for (const cc::Violation& v : cc::validate(*m)) {
            std::cerr << "invalid " << label << ": " << cc::to_string(v) << '\n';
            ok = false;
        }
    }
    return ok;
}

void warn_zero_patterns(const cc::Instance& inst) {
    if (!inst.col_conditional.fully_known() || !inst.row_conditional.fully_known()) return;
    for (auto [i, j] : cc::zero_pattern_warnings(inst.col_conditional, inst.row_conditional))
        std::cerr << "warning: entry (" << i + 1 << "," << j + 1
                  << ") is zero in exactly one matrix\n";
}

void print_verdict_text(const cc::CompatibilityVerdict& verdict, const cc::Instance& inst) {
    if (const auto* inc = std::get_if<cc::Incompatible>(&verdict)) {
        std::cout << "incompatible: no probability vector satisfies the marginal equations"
                  << " (system rank " << inc->rank << ")\n";
        auto cross = cc::cross_product_check(inst.col_conditional, inst.row_conditional);
        if (const auto* d = std::get_if<cc::CrossProductDisagree>(&cross))
            std::cout << "odds ratios differ on the minor at rows {" << d->row1 + 1 << ","
                      << d->row2 + 1 << "} x columns {" << d->col1 + 1 << "," << d->col2 + 1
                      << "}\n";
    } else if (const auto* u = std::get_if<cc::CompatibleUnique>(&verdict)) {
        std::cout << "compatible: joint distribution determined uniquely (system rank "
                  << u->marginals.row_marginal.size() - 1 << ")\n";
        std::cout << "row marginal: " << join_fractions(u->marginals.row_marginal) << '\n';
        std::cout << "column marginal: " << join_fractions(u->marginals.col_marginal) << '\n';
        std::cout << "joint:\n";
        for (std::size_t i = 0; i < u->joint.rows(); ++i) {
            std::cout << " ";
            for (std::size_t j = 0; j < u->joint.cols(); ++j)
                std::cout << ' ' << cc::to_fraction_string(u->joint.at(i, j));
            std::cout << '\n';
        }
    } else {
        const auto& nu = std::get<cc::CompatibleNonUnique>(verdict);
        std::cout << "compatible: marginal not unique (system rank " << nu.rank << ", "
                  << nu.kernel_basis.size() << " free directions)\n";
        if (nu.representative)
            std::cout << "one valid row marginal: " << join_fractions(*nu.representative) << '\n';
    }
}

void print_verdict_machine(const cc::CompatibilityVerdict& verdict) {
    if (const auto* inc = std::get_if<cc::Incompatible>(&verdict)) {
        std::cout << "verdict=incompatible\nrank=" << inc->rank << '\n';
    } else if (const auto* u = std::get_if<cc::CompatibleUnique>(&verdict)) {
        std::cout << "verdict=compatible_unique\n";
        std::cout << "rank=" << u->marginals.row_marginal.size() - 1 << '\n';
        std::cout << "row_marginal=" << join_fractions(u->marginals.row_marginal) << '\n';
        std::cout << "col_marginal=" << join_fractions(u->marginals.col_marginal) << '\n';
        for (std::size_t i = 0; i < u->joint.rows(); ++i) {
            cc::RatVector row;
            for (std::size_t j = 0; j < u->joint.cols(); ++j) row.push_back(u->joint.at(i, j));
            std::cout << "joint_row=" << join_fractions(row) << '\n';
        }
    } else {
        const auto& nu = std::get<cc::CompatibleNonUnique>(verdict);
        std::cout << "verdict=compatible_nonunique\nrank=" << nu.rank << '\n';
        std::cout << "kernel_dim=" << nu.kernel_basis.size() << '\n';
        if (nu.representative)
            std::cout << "row_marginal=" << join_fractions(*nu.representative) << '\n';
    }
}

// The two criteria must always agree; a mismatch would mean a library bug,
// so it gets its own exit status rather than a quiet pick-one.
bool verdicts_agree(const cc::CompatibilityVerdict& lhs, const cc::CompatibilityVerdict& rhs) {
    if (lhs.index() != rhs.index()) return false;
    const auto* lu = std::get_if<cc::CompatibleUnique>(&lhs);
    const auto* ru = std::get_if<cc::CompatibleUnique>(&rhs);
    if (lu && ru) return lu->marginals.row_marginal == ru->marginals.row_marginal;
    return true;
}

int run_check(const std::string& path, const std::string& method, const std::string& format) {
    cc::Instance inst = load_instance(path);
    if (!validate_pair(inst)) return exit_error;
    if (!inst.col_conditional.fully_known() || !inst.row_conditional.fully_known()) {
        std::cerr << "check requires fully known matrices; use 'complete' first\n";
        return exit_error;
    }
    warn_zero_patterns(inst);

    std::optional<cc::CompatibilityVerdict> verdict;
    if (method == "rank" || method == "both")
        verdict = cc::check_rank(inst.col_conditional, inst.row_conditional);
    if (method == "lp" || method == "both") {
        cc::CompatibilityVerdict lp = cc::check_lp(inst.col_conditional, inst.row_conditional);
        if (verdict && !verdicts_agree(*verdict, lp)) {
            std::cerr << "internal disagreement between the rank and feasibility criteria\n";
            return exit_disagreement;
        }
        if (!verdict) verdict = std::move(lp);
    }

    if (format == "machine")
        print_verdict_machine(*verdict);
    else
        print_verdict_text(*verdict, inst);
    return cc::is_compatible(*verdict) ? exit_ok : exit_incompatible;
}

int run_epsilon(const std::string& path, const std::string& format) {
    cc::Instance inst = load_instance(path);
    if (!validate_pair(inst)) return exit_error;
    if (!inst.col_conditional.fully_known() || !inst.row_conditional.fully_known()) {
        std::cerr << "epsilon requires fully known matrices\n";
        return exit_error;
    }
    cc::EpsilonResult res = cc::min_epsilon(inst.col_conditional, inst.row_conditional);
    if (format == "machine") {
        std::cout << "epsilon=" << cc::to_fraction_string(res.epsilon_star) << '\n';
        std::cout << "epsilon_decimal=" << cc::to_decimal_string(res.epsilon_star) << '\n';
        std::cout << "row_marginal=" << join_fractions(res.row_marginal) << '\n';
    } else {
        std::cout << "smallest residual bound: " << cc::to_fraction_string(res.epsilon_star)
                  << " (~" << cc::to_decimal_string(res.epsilon_star) << ")\n";
        std::cout << "achieved by row marginal: " << join_fractions(res.row_marginal) << '\n';
    }
    return exit_ok;
}

void write_completed(std::ostream& out, const cc::CompletionResult& res,
                     const cc::Instance& inst) {
    if (!res.row_marginal.empty())
        out << "# row marginal: " << join_fractions(res.row_marginal) << '\n';
    if (const auto* k = std::get_if<cc::KnownColumnsInconsistent>(&res.diagnostics);
        k && k->forced_column)
        out << "# note: known columns disagree; completed from column " << *k->forced_column + 1
            << " anyway\n";
    cc::write_instance(out, res.filled_a, res.filled_b, inst.name, inst.seed);
}

int run_complete(const std::string& path, std::optional<std::size_t> force_column_1based,
                 const std::string& out_path) {
    cc::Instance inst = load_instance(path);
    if (!validate_pair(inst)) return exit_error;

    std::optional<std::size_t> force;
    if (force_column_1based) {
        if (*force_column_1based == 0) {
            std::cerr << "--force-column is 1-based\n";
            return exit_error;
        }
        force = *force_column_1based - 1;
    }

    cc::CompletionResult res =
        inst.row_conditional.fully_known()
            ? cc::complete_column(inst.col_conditional, inst.row_conditional, force)
            : cc::complete_pair_2x3(inst.col_conditional, inst.row_conditional);

    if (const auto* k = std::get_if<cc::KnownColumnsInconsistent>(&res.diagnostics);
        k && !k->forced_column) {
        std::cerr << "known columns imply different marginals; rerun with --force-column:\n";
        for (const cc::ColumnCandidate& c : k->candidates) {
            std::cerr << "  column " << c.column + 1 << ": ";
            if (c.row_marginal)
                std::cerr << join_fractions(*c.row_marginal) << '\n';
            else
                std::cerr << "(does not determine the marginal)\n";
        }
        return exit_unresolved;
    }
    if (const auto* u = std::get_if<cc::Underdetermined>(&res.diagnostics)) {
        std::cerr << "completion is underdetermined (" << u->free_parameters
                  << " free parameters)\n";
        return exit_unresolved;
    }

    if (out_path.empty()) {
        write_completed(std::cout, res, inst);
    } else {
        std::ofstream out(out_path);
        if (!out) throw cc::Error("cannot open " + out_path);
        write_completed(out, res, inst);
    }
    return exit_ok;
}

int run_derive(const std::string& path, const std::string& out_path) {
    cc::ParsedJoint parsed = load_joint(path);
    auto [a, b] = cc::derive_conditionals(parsed.joint);
    auto emit = [&](std::ostream& out) {
        out << "# row marginal: " << join_fractions(parsed.joint.row_sums()) << '\n';
        out << "# column marginal: " << join_fractions(parsed.joint.col_sums()) << '\n';
        cc::write_instance(out, a, b, parsed.name);
    };
    if (out_path.empty()) {
        emit(std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw cc::Error("cannot open " + out_path);
        emit(out);
    }
    return exit_ok;
}

int run_gen(std::uint64_t seed, const std::string& dims, bool incompatible,
            const std::string& delta_text, const std::string& floor_text,
            const std::string& out_path) {
    std::size_t split = dims.find('x');
    if (split == std::string::npos) throw cc::Error("dims must look like 3x4");
    std::size_t rows = 0, cols = 0;
    try {
        rows = std::stoul(dims.substr(0, split));
        cols = std::stoul(dims.substr(split + 1));
    } catch (const std::exception&) {
        throw cc::Error("dims must look like 3x4");
    }

    cc::Generator gen = floor_text.empty()
                            ? cc::Generator(seed, rows, cols)
                            : cc::Generator(seed, rows, cols, cc::parse_rational(floor_text));
    cc::JointDistribution joint = cc::random_joint(gen);
    auto [a, b] = cc::derive_conditionals(joint);

    std::string name = "random-" + std::to_string(rows) + "x" + std::to_string(cols);
    if (incompatible) {
        cc::Rational delta = cc::parse_rational(delta_text);
        auto perturbed = cc::perturb_to_incompatible(a, b, delta);
        a = std::move(perturbed.first);
        b = std::move(perturbed.second);
        name += "-perturbed";
    }

    if (out_path.empty()) {
        cc::write_instance(std::cout, a, b, name, seed);
    } else {
        std::ofstream out(out_path);
        if (!out) throw cc::Error("cannot open " + out_path);
        cc::write_instance(out, a, b, name, seed);
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compatibility of a column-conditional / row-conditional matrix pair"};
    app.require_subcommand(1);

    std::string path, format = "text", method = "both", out_path;
    std::optional<std::size_t> force_column;
    std::uint64_t seed = 1;
    std::string dims = "3x3", delta = "1/100", floor_text;
    bool incompatible = false;

    CLI::App* check = app.add_subcommand("check", "decide whether the pair is compatible");
    check->add_option("file", path, "instance file, or - for stdin")->required();
    check->add_option("--method", method, "rank, lp, or both (default both)")
        ->check(CLI::IsMember({"rank", "lp", "both"}));
    check->add_option("--format", format, "text or machine")
        ->check(CLI::IsMember({"text", "machine"}));

    CLI::App* complete = app.add_subcommand("complete", "fill unknown entries exactly");
    complete->add_option("file", path, "instance file, or - for stdin")->required();
    complete->add_option("--force-column", force_column,
                         "complete from this known column (1-based) even if columns disagree");
    complete->add_option("-o,--output", out_path, "write the completed instance here");

    CLI::App* epsilon =
        app.add_subcommand("epsilon", "smallest uniform residual bound over marginals");
    epsilon->add_option("file", path, "instance file, or - for stdin")->required();
    epsilon->add_option("--format", format, "text or machine")
        ->check(CLI::IsMember({"text", "machine"}));

    CLI::App* derive =
        app.add_subcommand("derive", "both conditionals of a joint distribution");
    derive->add_option("file", path, "joint table file, or - for stdin")->required();
    derive->add_option("-o,--output", out_path, "write the instance here");

    CLI::App* gen = app.add_subcommand("gen", "generate a strictly positive random instance");
    gen->add_option("--seed", seed, "generator seed (default 1)");
    gen->add_option("--dims", dims, "shape as ROWSxCOLS (default 3x3)");
    gen->add_option("--floor", floor_text, "positivity floor for every joint cell");
    gen->add_flag("--incompatible", incompatible, "perturb the pair away from compatibility");
    gen->add_option("--delta", delta, "perturbation size (default 1/100)");
    gen->add_option("-o,--output", out_path, "write the instance here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_error;
    }

    try {
        if (app.got_subcommand(check)) return run_check(path, method, format);
        if (app.got_subcommand(complete)) return run_complete(path, force_column, out_path);
        if (app.got_subcommand(epsilon)) return run_epsilon(path, format);
        if (app.got_subcommand(derive)) return run_derive(path, out_path);
        if (app.got_subcommand(gen))
            return run_gen(seed, dims, incompatible, delta, floor_text, out_path);
    } catch (const cc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}
