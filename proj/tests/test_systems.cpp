#include <condcompat/model.hpp>
#include <condcompat/oracle.hpp>
#include <condcompat/systems.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace condcompat;

namespace {

Rational q(long num, long den = 1) { return Rational(num, den); }

// Compatible pair with known marginals: both conditionals of the same joint.
std::pair<ConditionalMatrix, ConditionalMatrix> tenths_pair() {
    return derive_conditionals(
        JointDistribution::from_rows({{q(1, 10), q(2, 10)}, {q(3, 10), q(4, 10)}}));
}

// Doubly stochastic column-conditional against a lopsided row-conditional;
// no marginal reconciles them.
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

}  // namespace

TEST_CASE("marginal system entries for the clashing 2x2 pair") {
    auto [a, b] = clashing_pair();
    MarginalSystem sys = build_marginal_system(a, b);
    REQUIRE(sys.coeffs.rows() == 4);
    REQUIRE(sys.coeffs.cols() == 2);
    CHECK(sys.coeffs.row(sys.row_index(0, 0)) == RatVector{q(-1, 6), q(1, 3)});
    CHECK(sys.coeffs.row(sys.row_index(0, 1)) == RatVector{q(-1, 3), q(1, 6)});
    CHECK(sys.coeffs.row(sys.row_index(1, 0)) == RatVector{q(1, 6), q(-1, 3)});
    CHECK(sys.coeffs.row(sys.row_index(1, 1)) == RatVector{q(1, 3), q(-1, 6)});
    CHECK(row_echelon(sys.coeffs).rank == 2);
}

TEST_CASE("marginal system columns collapse to zero within each cell column") {
    // Fix j and sum the equations over i: every coefficient cancels exactly.
    // This holds for any stochastic pair and pins down the sign conventions.
    std::mt19937_64 seeds(11);
    for (int trial = 0; trial < 5; ++trial) {
        Generator gen(seeds(), 2 + trial % 3, 2 + (trial + 1) % 3);
        auto [a, b] = derive_conditionals(random_joint(gen));
        MarginalSystem sys = build_marginal_system(a, b);
        for (std::size_t j = 0; j < sys.dim_cols; ++j)
            for (std::size_t s = 0; s < sys.dim_rows; ++s) {
                Rational total = 0;
                for (std::size_t i = 0; i < sys.dim_rows; ++i)
                    total += sys.coeffs(sys.row_index(i, j), s);
                CHECK(total == 0);
            }
    }
}

TEST_CASE("derived pairs solve their own systems exactly") {
    JointDistribution p =
        JointDistribution::from_rows({{q(1, 10), q(2, 10)}, {q(3, 10), q(4, 10)}});
    auto [a, b] = derive_conditionals(p);

    MarginalSystem marg = build_marginal_system(a, b);
    RatVector image = marg.coeffs * p.row_sums();
    for (const Rational& x : image) CHECK(x == 0);

    JointSystem joint = build_joint_system(a, b);
    RatVector vec(joint.coeffs.cols());
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) vec[joint.vec_index(i, j)] = p.at(i, j);
    RatVector joint_image = joint.coeffs * vec;
    for (const Rational& x : joint_image) CHECK(x == 0);
}

TEST_CASE("no distribution solves the joint system of the clashing pair") {
    auto [a, b] = clashing_pair();
    JointSystem sys = build_joint_system(a, b);
    // sweep a coarse simplex grid over 2x2 tables
    const long steps = 20;
    for (long u = 0; u <= steps; ++u)
        for (long v = 0; v + u <= steps; ++v)
            for (long w = 0; w + v + u <= steps; ++w) {
                RatVector vec{q(u, steps), q(v, steps), q(w, steps),
                              q(steps - u - v - w, steps)};
                RatVector image = sys.coeffs * vec;
                bool solved = true;
                for (const Rational& x : image)
                    if (x != 0) solved = false;
                CHECK_FALSE(solved);
            }
}

TEST_CASE("solution projector is idempotent and spans the solution set") {
    std::mt19937_64 seeds(23);
    for (int trial = 0; trial < 4; ++trial) {
        Generator gen(seeds(), 2 + trial % 2, 2 + trial % 3);
        auto [a, b] = derive_conditionals(random_joint(gen));
        JointSystem sys = build_joint_system(a, b);
        RatMatrix proj = solution_projector(sys);
        std::size_t n = sys.coeffs.cols();

        CHECK(proj * proj == proj);

        RatMatrix complement = RatMatrix::identity(n) - proj;
        RatMatrix zero(sys.coeffs.rows(), n);
        CHECK(sys.coeffs * complement == zero);

        // images of random vectors under the complement are solutions
        std::mt19937_64 engine(trial);
        for (int probe = 0; probe < 3; ++probe) {
            RatVector z(n);
            for (Rational& x : z) x = q(static_cast<long>(engine() % 19) - 9);
            RatVector solution = complement * z;
            RatVector image = sys.coeffs * solution;
            for (const Rational& x : image) CHECK(x == 0);
        }

        CHECK(row_echelon(complement).rank == n - row_echelon(sys.coeffs).rank);
    }
}

TEST_CASE("projector edge shapes") {
    // zero system: everything is a solution, projector vanishes
    CHECK(row_space_projector(RatMatrix(3, 3)) == RatMatrix(3, 3));
    // full-rank system: only the zero solution, projector is the identity
    CHECK(row_space_projector(RatMatrix::identity(3)) == RatMatrix::identity(3));
}

TEST_CASE("system builders reject malformed pairs") {
    auto [a, b] = tenths_pair();
    CHECK_THROWS_AS(build_marginal_system(b, a), OrientationError);
    ConditionalMatrix partial = a;
    partial.set_unknown(0, 0);
    CHECK_THROWS_AS(build_marginal_system(partial, b), UnknownEntriesPresent);
    CHECK_THROWS_AS(build_joint_system(partial, b), UnknownEntriesPresent);
    ConditionalMatrix wide(Orientation::GivenRow, 2, 3);
    CHECK_THROWS_AS(build_marginal_system(a, wide), DimensionMismatch);
}
