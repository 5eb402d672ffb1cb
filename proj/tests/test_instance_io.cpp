#include <condcompat/instance_io.hpp>
#include <condcompat/oracle.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>
#include <string>

using namespace condcompat;

namespace {

Rational q(long num, long den = 1) { return Rational(num, den); }

std::string render(const ConditionalMatrix& a, const ConditionalMatrix& b,
                   const std::string& name = "",
                   std::optional<std::uint64_t> seed = std::nullopt) {
    std::ostringstream out;
    write_instance(out, a, b, name, seed);
    return out.str();
}

void expect_parse_error(const std::string& text, std::size_t line,
                        std::size_t column) {
    try {
        parse_instance_text(text);
        FAIL("expected a parse error for:\n" << text);
    } catch (const ParseError& err) {
        CHECK(err.line() == line);
        CHECK(err.column() == column);
    }
}

}  // namespace

TEST_CASE("instances round-trip through text") {
    std::mt19937_64 seeds(29);
    for (int trial = 0; trial < 8; ++trial) {
        Generator gen(seeds(), 2 + trial % 4, 2 + (trial / 2) % 4);
        auto [a, b] = derive_conditionals(random_joint(gen));
        Instance parsed = parse_instance_text(render(a, b, "trial", 1234));
        CHECK(parsed.col_conditional == a);
        CHECK(parsed.row_conditional == b);
        CHECK(parsed.name == "trial");
        REQUIRE(parsed.seed.has_value());
        CHECK(*parsed.seed == 1234);
    }
}

TEST_CASE("unknown entries survive the round trip") {
    ConditionalMatrix a = ConditionalMatrix::given_column(
        {{q(1, 5), std::nullopt, q(3, 4)}, {q(4, 5), std::nullopt, q(1, 4)}});
    ConditionalMatrix b = ConditionalMatrix::given_row(
        {{q(1, 6), q(2, 6), q(3, 6)}, {q(4, 6), q(1, 6), q(1, 6)}});
    Instance parsed = parse_instance_text(render(a, b));
    CHECK(parsed.col_conditional == a);
    CHECK(parsed.row_conditional == b);
    CHECK(parsed.name.empty());
    CHECK_FALSE(parsed.seed.has_value());
}

TEST_CASE("hand-written instance with comments and decimals") {
    const std::string text =
        "# toy instance\n"
        "name decimal demo\n"
        "dims 2 2\n"
        "\n"
        "A\n"
        "0.25 1/3   # trailing comment\n"
        "0.75 2/3\n"
        "B\n"
        "1/2 1/2\n"
        "0.1 0.9\n";
    Instance parsed = parse_instance_text(text);
    CHECK(parsed.name == "decimal demo");
    CHECK(parsed.col_conditional.at(0, 0) == q(1, 4));
    CHECK(parsed.col_conditional.at(1, 1) == q(2, 3));
    CHECK(parsed.row_conditional.at(1, 0) == q(1, 10));
    CHECK(parsed.row_conditional.at(1, 1) == q(9, 10));
}

TEST_CASE("parse errors carry line and column positions") {
    // bad token in a grid row: line 4, third token
    expect_parse_error("dims 2 2\nA\n1/2 1/2\n1/2 oops\nB\n1 0\n0 1\n", 4, 5);
    // wrong number of entries on a row
    expect_parse_error("dims 2 2\nA\n1/2 1/2 1/2\n1/2 1/2\nB\n1 0\n0 1\n", 3, 9);
    // grid row before any section header
    expect_parse_error("dims 2 2\n1/2 1/2\n1/2 1/2\n", 2, 1);
    // zero denominator
    expect_parse_error("dims 2 2\nA\n1/0 1\n1/2 1/2\nB\n1 0\n0 1\n", 3, 1);
}

TEST_CASE("structural errors are rejected") {
    // dims out of range
    CHECK_THROWS_AS(parse_instance_text("dims 1 3\nA\n1 1 1\nB\n1 1 1\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_instance_text("dims 2 65\n"), ParseError);
    // missing dims entirely
    CHECK_THROWS_AS(parse_instance_text("A\n1 0\n0 1\n"), ParseError);
    // duplicate section
    CHECK_THROWS_AS(
        parse_instance_text("dims 2 2\nA\n1 0\n0 1\nA\n1 0\n0 1\n"),
        ParseError);
    // missing section B
    CHECK_THROWS_AS(parse_instance_text("dims 2 2\nA\n1 0\n0 1\n"), ParseError);
    // section cut short by end of input
    CHECK_THROWS_AS(parse_instance_text("dims 2 2\nA\n1 0\n"), ParseError);
    // duplicate name directive
    CHECK_THROWS_AS(parse_instance_text("name x\nname y\ndims 2 2\n"),
                    ParseError);
    // malformed seed
    CHECK_THROWS_AS(
        parse_instance_text("seed banana\ndims 2 2\nA\n1 0\n0 1\nB\n1 0\n0 1\n"),
        ParseError);
    // unknown section letter
    CHECK_THROWS_AS(
        parse_instance_text("dims 2 2\nQ\n1 0\n0 1\nB\n1 0\n0 1\n"),
        ParseError);
}

TEST_CASE("joint tables round-trip and validate") {
    JointDistribution p = JointDistribution::from_rows(
        {{q(1, 10), q(2, 10)}, {q(3, 10), q(4, 10)}});
    std::ostringstream out;
    write_joint(out, p, "tenths");
    ParsedJoint parsed = parse_joint_text(out.str());
    CHECK(parsed.joint == p);
    CHECK(parsed.name == "tenths");

    // entries must be fully specified
    CHECK_THROWS_AS(parse_joint_text("dims 2 2\nP\n1/2 ?\n1/4 1/4\n"),
                    ParseError);
    // and sum to one
    CHECK_THROWS_AS(parse_joint_text("dims 2 2\nP\n1/2 1/2\n1/2 1/2\n"),
                    ParseError);
    // negative entries are rejected
    CHECK_THROWS_AS(parse_joint_text("dims 2 2\nP\n-1/2 1/2\n1/2 1/2\n"),
                    ParseError);
    // an instance section is not a joint section
    CHECK_THROWS_AS(parse_joint_text("dims 2 2\nA\n1/4 1/4\n1/4 1/4\n"),
                    ParseError);
}

TEST_CASE("writer refuses mismatched inputs") {
    ConditionalMatrix a = ConditionalMatrix::given_column({{q(1)}, {q(0)}});
    ConditionalMatrix b = ConditionalMatrix::given_row({{q(1)}, {q(1)}});
    ConditionalMatrix wide = ConditionalMatrix::given_row(
        {{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}});
    std::ostringstream out;
    CHECK_THROWS_AS(write_instance(out, a, wide), DimensionMismatch);
    CHECK_THROWS_AS(write_instance(out, b, b), OrientationError);
    CHECK_THROWS_AS(write_instance(out, a, a), OrientationError);
}
