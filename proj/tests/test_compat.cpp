#include <condcompat/compat.hpp>
#include <condcompat/oracle.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <utility>
#include <variant>

using namespace condcompat;

namespace {

Rational q(long num, long den = 1) { return Rational(num, den); }

JointDistribution tenths_joint() {
    return JointDistribution::from_rows({{q(1, 10), q(2, 10)}, {q(3, 10), q(4, 10)}});
}

std::pair<ConditionalMatrix, ConditionalMatrix> clashing_pair() {
    ConditionalMatrix a(Orientation::GivenColumn, 2, 2);
    a.set(0, 0, q(1, 2));
    a.set(1, 0, q(1, 2));
    a.set(0, 1, q(1, 2));
    a.set(1, 1, q(1, 2));
    ConditionalMatrix b(Orientation::GivenRow, 2, 2);
    b.set(0, 0, q(1, 3));
    b.set(0, 1, q(2, 3));
    b.set(1, 0, q(2, 3));
    b.set(1, 1, q(1, 3));
    return {std::move(a), std::move(b)};
}

ConditionalMatrix identity_conditional(Orientation o) {
    ConditionalMatrix m(o, 2, 2);
    m.set(0, 0, q(1));
    m.set(1, 0, q(0));
    m.set(0, 1, q(0));
    m.set(1, 1, q(1));
    return m;
}

}  // namespace

TEST_CASE("derived pair is judged compatible with the original joint") {
    JointDistribution p = tenths_joint();
    auto [a, b] = derive_conditionals(p);

    for (const CompatibilityVerdict& verdict : {check_rank(a, b), check_lp(a, b)}) {
        const auto* unique = std::get_if<CompatibleUnique>(&verdict);
        REQUIRE(unique != nullptr);
        CHECK(unique->marginals.row_marginal == RatVector{q(3, 10), q(7, 10)});
        CHECK(unique->marginals.col_marginal == RatVector{q(2, 5), q(3, 5)});
        CHECK(unique->joint == p);
    }
}

TEST_CASE("row relabeling permutes the recovered marginal") {
    ConditionalMatrix a(Orientation::GivenColumn, 2, 2);
    a.set(0, 0, q(3, 4));
    a.set(1, 0, q(1, 4));
    a.set(0, 1, q(2, 3));
    a.set(1, 1, q(1, 3));
    ConditionalMatrix b(Orientation::GivenRow, 2, 2);
    b.set(0, 0, q(3, 7));
    b.set(0, 1, q(4, 7));
    b.set(1, 0, q(1, 3));
    b.set(1, 1, q(2, 3));
    CompatibilityVerdict verdict = check_rank(a, b);
    const auto* unique = std::get_if<CompatibleUnique>(&verdict);
    REQUIRE(unique != nullptr);
    CHECK(unique->marginals.row_marginal == RatVector{q(7, 10), q(3, 10)});
}

TEST_CASE("clashing pair is incompatible under both criteria") {
    auto [a, b] = clashing_pair();

    CompatibilityVerdict by_rank = check_rank(a, b);
    const auto* inc = std::get_if<Incompatible>(&by_rank);
    REQUIRE(inc != nullptr);
    CHECK(inc->rank == 2);

    CompatibilityVerdict by_lp = check_lp(a, b);
    CHECK(std::holds_alternative<Incompatible>(by_lp));

    auto cross = cross_product_check(a, b);
    const auto* witness = std::get_if<CrossProductDisagree>(&cross);
    REQUIRE(witness != nullptr);
    CHECK(witness->row1 == 0);
    CHECK(witness->row2 == 1);
    CHECK(witness->col1 == 0);
    CHECK(witness->col2 == 1);
}

TEST_CASE("identity conditionals leave the marginal free") {
    ConditionalMatrix a = identity_conditional(Orientation::GivenColumn);
    ConditionalMatrix b = identity_conditional(Orientation::GivenRow);

    for (const CompatibilityVerdict& verdict : {check_rank(a, b), check_lp(a, b)}) {
        const auto* open = std::get_if<CompatibleNonUnique>(&verdict);
        REQUIRE(open != nullptr);
        CHECK(open->rank == 0);
        CHECK(open->kernel_basis.size() == 2);
        REQUIRE(open->representative.has_value());
        Rational total = 0;
        for (const Rational& x : *open->representative) {
            CHECK(x >= 0);
            total += x;
        }
        CHECK(total == 1);
    }
}

TEST_CASE("cross product check agrees on compatible positive pairs") {
    auto [a, b] = derive_conditionals(tenths_joint());
    CHECK(std::holds_alternative<CrossProductAgree>(cross_product_check(a, b)));
}

TEST_CASE("cross product check skips minors touching zeros") {
    ConditionalMatrix a(Orientation::GivenColumn, 2, 2);
    a.set(0, 0, q(0));
    a.set(1, 0, q(1));
    a.set(0, 1, q(1, 2));
    a.set(1, 1, q(1, 2));
    ConditionalMatrix b(Orientation::GivenRow, 2, 2);
    b.set(0, 0, q(0));
    b.set(0, 1, q(1));
    b.set(1, 0, q(1, 2));
    b.set(1, 1, q(1, 2));
    auto res = cross_product_check(a, b);
    const auto* skipped = std::get_if<CrossProductInapplicable>(&res);
    REQUIRE(skipped != nullptr);
    REQUIRE(skipped->zero_positions.size() == 1);
    CHECK(skipped->zero_positions[0] == std::pair<std::size_t, std::size_t>{0, 0});
}

TEST_CASE("smallest residual bound of the clashing pair") {
    auto [a, b] = clashing_pair();
    EpsilonResult res = min_epsilon(a, b);
    CHECK(res.epsilon_star == q(1, 12));
    CHECK(res.row_marginal == RatVector{q(1, 2), q(1, 2)});
}

TEST_CASE("residual bound vanishes exactly on compatible pairs") {
    auto [a, b] = derive_conditionals(tenths_joint());
    EpsilonResult res = min_epsilon(a, b);
    CHECK(res.epsilon_star == 0);
    CHECK(res.row_marginal == RatVector{q(3, 10), q(7, 10)});
}

TEST_CASE("perturbed pairs keep a positive residual bound below the nudge") {
    std::mt19937_64 seeds(41);
    for (int trial = 0; trial < 6; ++trial) {
        Generator gen(seeds(), 2 + trial % 3, 2 + (trial / 2) % 2);
        auto [a, b] = derive_conditionals(random_joint(gen));
        Rational delta = trial % 2 == 0 ? q(1, 10) : q(1, 100);
        auto [pa, pb] = perturb_to_incompatible(a, b, delta);

        CHECK_FALSE(is_compatible(check_rank(pa, pb)));
        CHECK_FALSE(is_compatible(check_lp(pa, pb)));

        EpsilonResult res = min_epsilon(pa, pb);
        CHECK(res.epsilon_star > 0);
        // moving one column entry by delta changes each equation by at most delta
        CHECK(res.epsilon_star <= delta);
        Rational total = 0;
        for (const Rational& x : res.row_marginal) {
            CHECK(x >= 0);
            total += x;
        }
        CHECK(total == 1);
    }
}

TEST_CASE("round trip from random joints recovers the joint exactly") {
    std::mt19937_64 seeds(59);
    for (int trial = 0; trial < 8; ++trial) {
        Generator gen(seeds(), 2 + trial % 4, 2 + (trial + 2) % 4);
        JointDistribution p = random_joint(gen);
        auto [a, b] = derive_conditionals(p);
        CompatibilityVerdict verdict = check_rank(a, b);
        const auto* unique = std::get_if<CompatibleUnique>(&verdict);
        REQUIRE(unique != nullptr);
        CHECK(unique->joint == p);
        CHECK(unique->marginals.row_marginal == p.row_sums());
        CHECK(unique->marginals.col_marginal == p.col_sums());
    }
}

TEST_CASE("recover_joint validates its inputs") {
    auto [a, b] = derive_conditionals(tenths_joint());
    CHECK_THROWS_AS(recover_joint(a, RatVector{q(1, 2), q(1, 2)}), OrientationError);
    CHECK_THROWS_AS(recover_joint(b, RatVector{q(1, 2)}), DimensionMismatch);
    CHECK_THROWS_AS(recover_joint(b, RatVector{q(1, 2), q(1, 3)}), Error);
    CHECK_THROWS_AS(recover_joint(b, RatVector{q(3, 2), q(-1, 2)}), Error);

    JointDistribution p = recover_joint(b, RatVector{q(3, 10), q(7, 10)});
    CHECK(p == tenths_joint());
}
