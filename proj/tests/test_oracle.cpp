#include <doctest.h>

#include "costsr/oracle.hpp"
#include "test_util.hpp"

using namespace costsr;
using namespace costsr::test;

TEST_CASE("brute_cost on the worked example") {
    Instance inst = flip_example_instance();
    CostReport r = brute_cost(inst);
    REQUIRE(r.satisfiable);
    CHECK(r.cost == 1);
    REQUIRE(r.witness.has_value());
    CHECK(inst.cost_of(*r.witness) == 1);
    CHECK(r.witness->satisfies(inst.hard()));
    CHECK(r.method == CostReport::Exhaustive);
}

TEST_CASE("brute_cost detects unsatisfiable hard parts") {
    Instance inst(formula({{1}, {-1}}), {}, 1);
    CHECK_FALSE(brute_cost(inst).satisfiable);
}

TEST_CASE("optimal_assignments lists the full optimal set") {
    Instance inst = flip_example_instance();
    std::vector<TotalAssignment> optima = optimal_assignments(inst);
    REQUIRE(optima.size() == 3);
    CHECK(optima[0].to_bitstring() == "00100");
    CHECK(optima[1].to_bitstring() == "10010");
    CHECK(optima[2].to_bitstring() == "01001");

    Instance forced(formula({{1}}), {1}, 1);
    std::vector<TotalAssignment> one = optimal_assignments(forced);
    REQUIRE(one.size() == 1);
    CHECK(one[0].value(1));
}

TEST_CASE("min_pairwise_hamming") {
    Instance inst = flip_example_instance();
    CHECK(min_pairwise_hamming(optimal_assignments(inst)) == 3);

    std::vector<TotalAssignment> singleton{TotalAssignment(3)};
    CHECK_FALSE(min_pairwise_hamming(singleton).has_value());

    std::vector<TotalAssignment> pair{TotalAssignment::from_bits(0b00, 2),
                                      TotalAssignment::from_bits(0b10, 2)};
    CHECK(min_pairwise_hamming(pair) == 1);

    std::vector<TotalAssignment> mixed{TotalAssignment(2), TotalAssignment(3)};
    CHECK_THROWS_AS(min_pairwise_hamming(mixed), std::invalid_argument);
}

TEST_CASE("brute_redundant follows the cost-preservation definition") {
    Instance inst = flip_example_instance();
    // members are always redundant
    CHECK(brute_redundant(inst, clause({1, 2, 3})));
    // the unit b1 keeps the optimum 00100 alive
    CHECK(brute_redundant(inst, clause({3})));

    Instance forced(formula({{1}}), {1}, 1);
    CHECK_FALSE(brute_redundant(forced, clause({-1})));
}

TEST_CASE("sat_solve") {
    auto m = sat_solve(formula({{1}}), 1);
    REQUIRE(m.has_value());
    CHECK(m->value(1));
    CHECK_FALSE(sat_solve(formula({{1}, {-1}}), 1).has_value());
}

TEST_CASE("exhaustive and branch-and-bound agree") {
    Rng rng(401);
    for (int t = 0; t < 200; ++t) {
        int n = rng.pick(3, 18);
        Instance inst = rng.random_planted_instance(n, rng.pick(2, 2 * n), 3,
                                                    rng.pick(0, n / 2));
        OracleLimits force_bb;
        force_bb.exhaustive_vars = 0;
        CostReport a = brute_cost(inst);
        CostReport b = brute_cost(inst, force_bb);
        REQUIRE(a.satisfiable == b.satisfiable);
        if (a.satisfiable) {
            CHECK(a.cost == b.cost);
            REQUIRE(b.witness.has_value());
            CHECK(b.witness->satisfies(inst.hard()));
            CHECK(inst.cost_of(*b.witness) == b.cost);
        }
    }
}

TEST_CASE("node budget is reported, not silent") {
    // twelve independent exclusive-or pairs: no unit propagation at the root,
    // one decision per pair
    Formula hard;
    for (Var v = 1; v <= 24; v += 2) {
        hard.add(clause({v, v + 1}));
        hard.add(clause({-v, -(v + 1)}));
    }
    Instance inst(std::move(hard), {1, 3, 5}, 24);
    OracleLimits tiny;
    tiny.exhaustive_vars = 0;
    tiny.bb_node_budget = 3;
    CHECK_THROWS_AS(brute_cost(inst, tiny), ResourceLimitError);

    OracleLimits none;
    none.exhaustive_vars = 10;
    none.bb_node_budget = 0;
    CHECK_THROWS_AS(brute_cost(inst, none), ResourceLimitError);
    CHECK_THROWS_AS(optimal_assignments(inst, none), ResourceLimitError);
}
