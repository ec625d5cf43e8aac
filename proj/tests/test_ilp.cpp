#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "supportgraph/errors.hpp"
#include "supportgraph/ilp.hpp"

using namespace supportgraph;

TEST_SUITE("ilp") {

TEST_CASE("two variables, one packing row") {
    IlpModel m;
    const VarId x = m.add_variable("x", 2.0);
    const VarId y = m.add_variable("y", 3.0);
    m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::LessEqual, 1.0);
    for (const Solution& s : {solve(m), exhaustive_solve(m)}) {
        REQUIRE(s.optimal());
        CHECK_FALSE(s.value(x));
        CHECK(s.value(y));
        CHECK(s.objective == 3.0);
    }
}

TEST_CASE("no constraints: every positive variable is on") {
    IlpModel m;
    m.add_variable("a", 0.5);
    m.add_variable("b", -1.0);
    m.add_variable("c", 0.0);
    m.add_variable("d", 0.25);
    const Solution s = solve(m);
    REQUIRE(s.optimal());
    CHECK(s.assignment == std::vector<std::uint8_t>{1, 0, 0, 1});
    CHECK(s.objective == 0.75);
    CHECK(m.positive_objective_sum() == 0.75);
}

TEST_CASE("empty model") {
    const IlpModel m;
    for (const Solution& s : {solve(m), exhaustive_solve(m)}) {
        CHECK(s.optimal());
        CHECK(s.objective == 0.0);
        CHECK(s.assignment.empty());
    }
}

TEST_CASE("contradiction") {
    IlpModel m;
    const VarId x = m.add_variable("x", 1.0);
    m.add_constraint({{x, 1.0}}, Sense::GreaterEqual, 1.0);
    m.add_constraint({{x, 1.0}}, Sense::LessEqual, 0.0);
    CHECK(solve(m).status == SolveStatus::Infeasible);
    CHECK(exhaustive_solve(m).status == SolveStatus::Infeasible);
}

TEST_CASE("cardinality that cannot be met") {
    IlpModel m;
    const VarId x = m.add_variable("x", 1.0);
    const VarId xs[] = {x};
    add_cardinality(m, xs, Sense::GreaterEqual, 2);
    CHECK(solve(m).status == SolveStatus::Infeasible);
}

TEST_CASE("ties go to the lexicographically smallest assignment") {
    IlpModel m;
    const VarId a = m.add_variable("a", 1.0);
    const VarId b = m.add_variable("b", 1.0);
    const VarId c = m.add_variable("c", 1.0);
    const VarId all[] = {a, b, c};
    add_cardinality(m, all, Sense::Equal, 1);
    for (const Solution& s : {solve(m), exhaustive_solve(m, Execution::Serial), exhaustive_solve(m)}) {
        REQUIRE(s.optimal());
        CHECK(s.assignment == std::vector<std::uint8_t>{0, 0, 1});
    }
}

TEST_CASE("exactly one of three has three feasible patterns") {
    IlpModel m;
    std::vector<VarId> xs;
    for (int i = 0; i < 3; ++i) xs.push_back(m.add_variable("a" + std::to_string(i)));
    add_cardinality(m, xs, Sense::Equal, 1);
    int feasible = 0;
    for (int mask = 0; mask < 8; ++mask) {
        const std::vector<std::uint8_t> bits{static_cast<std::uint8_t>(mask & 1), static_cast<std::uint8_t>((mask >> 1) & 1),
                                             static_cast<std::uint8_t>((mask >> 2) & 1)};
        feasible += is_feasible(m, bits) ? 1 : 0;
    }
    CHECK(feasible == 3);
}

TEST_CASE("count penalty examples") {
    IlpModel m;
    std::vector<VarId> xs;
    for (int i = 0; i < 3; ++i) xs.push_back(m.add_variable("x" + std::to_string(i), 1.0));
    const VarId y = add_count_penalty(m, xs, 2, -0.1);
    CHECK(m.variable(y).name == "count_penalty_3");
    CHECK(m.variable(y).objective == -0.1);
    // Three active: y forced.
    CHECK_FALSE(is_feasible(m, std::vector<std::uint8_t>{1, 1, 1, 0}));
    CHECK(is_feasible(m, std::vector<std::uint8_t>{1, 1, 1, 1}));
    // Two active: the optimum keeps y off.
    IlpModel two = m;
    two.add_constraint({{xs[2], 1.0}}, Sense::LessEqual, 0.0);
    const Solution s = solve(two);
    REQUIRE(s.optimal());
    CHECK(s.assignment == std::vector<std::uint8_t>{1, 1, 0, 0});
    // All three still pay off: 3 - 0.1 > 2.
    CHECK(solve(m).assignment == std::vector<std::uint8_t>{1, 1, 1, 1});

    CHECK_THROWS_AS(add_count_penalty(m, xs, 1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(add_count_penalty(m, xs, -1, -0.1), std::invalid_argument);
    CHECK(m.variable(add_count_penalty(m, xs, 1, -0.1, "named")).name == "named");
}

TEST_CASE("gadget truth tables up to four variables") {
    const auto r = oracle::gadget_truth_tables(4);
    // n = 0..4: iff-AND 62 rows + 30 forced, cardinality 480, count penalty
    // 384 (truth tables and forced choices), implication 4.
    CHECK(r.cases == 960);
    for (const auto& f : r.failures) FAIL_CHECK(f);
}

TEST_CASE("unknown variables") {
    IlpModel m;
    const VarId x = m.add_variable("x");
    const VarId ghost{7};
    const VarId ys[] = {x, ghost};
    CHECK_THROWS_AS(m.add_constraint({{ghost, 1.0}}, Sense::LessEqual, 1.0), UnknownVariable);
    CHECK_THROWS_AS(add_iff_and(m, x, ys), UnknownVariable);
    CHECK_THROWS_AS(add_implication(m, x, ghost), UnknownVariable);
    CHECK_THROWS_AS(add_cardinality(m, ys, Sense::LessEqual, 1), UnknownVariable);
    CHECK_THROWS_AS(add_count_penalty(m, ys, 1, -0.1), UnknownVariable);
    CHECK_THROWS_AS(m.add_variable("x"), std::invalid_argument);
    CHECK(m.num_constraints() == 0);
}

TEST_CASE("duplicate terms merge") {
    IlpModel m;
    const VarId x = m.add_variable("x", 1.0);
    const VarId y = m.add_variable("y", 1.0);
    m.add_constraint({{x, 1.0}, {y, 1.0}, {x, -1.0}}, Sense::LessEqual, 0.0);
    REQUIRE(m.constraints()[0].terms.size() == 1);
    CHECK(m.constraints()[0].terms[0].var == y);
    const Solution s = solve(m);
    CHECK(s.assignment == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("exhaustive size limit") {
    IlpModel m;
    for (std::size_t j = 0; j <= kExhaustiveLimit; ++j) m.add_variable("v" + std::to_string(j), 1.0);
    CHECK_THROWS_AS(exhaustive_solve(m), TooLarge);
}

TEST_CASE("node budget") {
    std::mt19937_64 rng(7);
    IlpModel m;
    std::vector<VarId> xs;
    std::uniform_real_distribution<double> w(0.1, 1.0);
    for (int j = 0; j < 40; ++j) xs.push_back(m.add_variable("k" + std::to_string(j), w(rng)));
    // A knapsack row the propagation cannot settle quickly.
    std::vector<Term> row;
    for (const VarId x : xs) row.push_back({x, w(rng)});
    m.add_constraint(row, Sense::LessEqual, 5.0);
    CHECK_THROWS_AS(solve(m, SolverOptions{10}), ResourceLimit);
    CHECK(solve(m).optimal());
}

TEST_CASE("random models: solve, serial and parallel enumeration agree with brute force") {
    std::mt19937_64 rng(20240501);
    for (int i = 0; i < 300; ++i) {
        const IlpModel m = oracle::random_model(rng, 14, 20, i % 2 == 0);
        const oracle::Best want = oracle::brute_force(m);
        const Solution a = solve(m);
        const Solution b = exhaustive_solve(m, Execution::Serial);
        const Solution c = exhaustive_solve(m, Execution::Parallel);
        CAPTURE(i);
        CAPTURE(to_lp_format(m));
        REQUIRE(a.optimal() == want.feasible);
        REQUIRE(b.optimal() == want.feasible);
        REQUIRE(c.optimal() == want.feasible);
        if (!want.feasible) continue;
        CHECK(a.assignment == want.bits);
        CHECK(b.assignment == want.bits);
        CHECK(c.assignment == want.bits);
        CHECK(std::abs(a.objective - want.value) <= 1e-9);
        CHECK(is_feasible(m, a.assignment));
    }
}

TEST_CASE("objective scaling keeps the argmax") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        const IlpModel m = oracle::random_model(rng, 12, 12, false);
        const Solution a = solve(m);
        const Solution b = solve(m.scaled(10.0));
        REQUIRE(a.status == b.status);
        if (a.optimal()) {
            CHECK(a.assignment == b.assignment);
            CHECK(b.objective == doctest::Approx(10.0 * a.objective).epsilon(1e-9));
        }
    }
}

TEST_CASE("dropping a constraint never lowers the optimum") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const IlpModel m = oracle::random_model(rng, 10, 10, true);
        if (m.num_constraints() == 0) continue;
        const Solution full = solve(m);
        const Solution relaxed = solve(m.without_constraint(0));
        if (full.optimal()) {
            REQUIRE(relaxed.optimal());
            CHECK(relaxed.objective >= full.objective - 1e-9);
        }
    }
}

TEST_CASE("deterministic") {
    std::mt19937_64 rng(11);
    const IlpModel m = oracle::random_model(rng, 18, 30, true);
    const Solution a = solve(m);
    const Solution b = solve(m);
    CHECK(a.status == b.status);
    CHECK(a.assignment == b.assignment);
    CHECK(a.nodes == b.nodes);
}

TEST_CASE("LP text dump") {
    IlpModel m;
    const VarId x = m.add_variable("answer_0", 2.0);
    const VarId y = m.add_variable("edge_1", -0.5);
    m.add_constraint({{x, 1.0}, {y, -1.0}}, Sense::LessEqual, 0.0, "link");
    m.add_constraint({{x, 1.0}}, Sense::Equal, 1.0);
    const std::string lp = to_lp_format(m);
    CHECK(lp.find("x0 = answer_0") != std::string::npos);
    CHECK(lp.find("max: 2 x0 - 0.5 x1;") != std::string::npos);
    CHECK(lp.find("link: 1 x0 - 1 x1 <= 0;") != std::string::npos);
    CHECK(lp.find("c1: 1 x0 = 1;") != std::string::npos);
    CHECK(lp.find("bin x0, x1;") != std::string::npos);
}

TEST_CASE("lexicographic order") {
    CHECK(lex_less(std::vector<std::uint8_t>{0, 1}, std::vector<std::uint8_t>{1, 0}));
    CHECK_FALSE(lex_less(std::vector<std::uint8_t>{1, 0}, std::vector<std::uint8_t>{1, 0}));
}

}
