#include <doctest.h>

#include <climits>

#include "costsr/oracle.hpp"
#include "costsr/rules.hpp"
#include "test_util.hpp"

using namespace costsr;
using namespace costsr::test;

namespace {

// max over all total extensions of the negation of c of the Hamming
// distance between tau and tau . sigma
long long exhaustive_flip(const Instance& inst, const Clause& c, const Substitution& sigma) {
    int n = universe_of(inst, c, sigma);
    long long best = 0;
    for (uint64_t bits = 0; bits < (1ull << n); ++bits) {
        TotalAssignment tau = TotalAssignment::from_bits(bits, n);
        bool extends = true;
        for (const Lit& l : c)
            if (tau.satisfies(l)) { extends = false; break; }
        if (!extends) continue;
        long long hd = 0;
        for (Var v = 1; v <= n; ++v)
            if (tau.value(v) != eval_image(sigma.image_of_var(v), tau)) ++hd;
        best = std::max(best, hd);
    }
    return best;
}

Instance two_blocking() {
    // two variables, both blocking
    return Instance(Formula{}, {1, 2}, 2);
}

} // namespace

TEST_CASE("cost condition on the two-blocking examples") {
    Instance inst = two_blocking();
    Clause c = clause({-1}); // not b1

    CostCheckReport r1 = check_cost_condition(inst, c, subst_const({{1, false}}));
    CHECK(r1.max_delta == exhaustive_max_delta(inst, c, subst_const({{1, false}})));
    CHECK(r1.max_delta == -1);
    CHECK(r1.ok);

    Substitution s2 = subst_const({{1, false}, {2, true}});
    CostCheckReport r2 = check_cost_condition(inst, c, s2);
    CHECK(r2.max_delta == exhaustive_max_delta(inst, c, s2));
    CHECK(r2.max_delta == 0);
    CHECK(r2.ok);

    Substitution s3 = subst_const({{2, true}});
    CostCheckReport r3 = check_cost_condition(inst, c, s3);
    CHECK(r3.max_delta == exhaustive_max_delta(inst, c, s3));
    CHECK(r3.max_delta == 1);
    CHECK_FALSE(r3.ok);

    CHECK_THROWS_AS(check_cost_condition(inst, clause({1, -1}), s3), std::invalid_argument);
}

TEST_CASE("cost condition equals the exhaustive maximization") {
    Rng rng(503);
    for (int t = 0; t < 400; ++t) {
        int n = rng.pick(2, 9);
        Instance inst = rng.random_planted_instance(n, rng.pick(1, 6), 3, rng.pick(0, n));
        Clause c = rng.random_clause(n, 3);
        if (c.tautological()) continue;
        Substitution sigma = rng.random_substitution(n, rng.pick(0, n));
        CostCheckReport r = check_cost_condition(inst, c, sigma);
        CHECK(r.max_delta == exhaustive_max_delta(inst, c, sigma));
        CHECK(r.ok == (r.max_delta <= 0));
        long long sum = r.fixed_part;
        for (const auto& [v, g] : r.free_var_gains) sum += g;
        CHECK(sum == r.max_delta);
    }
}

TEST_CASE("redundancy condition examples") {
    // membership with the identity witness
    Formula db1 = formula({{1, 2}, {3}});
    CHECK(check_redundancy_condition(db1, clause({1, 2}), Substitution::identity()));

    // x=1, b1=2: the restricted database propagates to conflict
    Formula db2 = formula({{1, 2}, {-1, 2}});
    CHECK(check_redundancy_condition(db2, clause({2}), Substitution::identity()));

    // db = {x or b1}, c = x, sigma = {x->1, b1->0}
    Formula db3 = formula({{1, 2}});
    CHECK(check_redundancy_condition(db3, clause({1}),
                                     subst_const({{1, true}, {2, false}})));

    // failing case: nothing derives the unit
    CHECK_FALSE(check_redundancy_condition(formula({{1, 2}}), clause({1}),
                                           Substitution::identity()));
}

TEST_CASE("witness classification") {
    CHECK(classify_witness(clause({1, 2}), subst_const({{1, true}, {2, false}})) ==
          RuleClass::LPR);
    CHECK(classify_witness(clause({1, 2}), subst_const({{1, true}, {2, true}})) ==
          RuleClass::SPR);
    Substitution sr;
    sr.set_literal(1, Lit(3, false));
    CHECK(classify_witness(clause({1, 2}), sr) == RuleClass::SR);
    CHECK(classify_witness(clause({1, 2}), subst_const({{1, true}})) == RuleClass::PR);
    CHECK(classify_witness(clause({1, 2}), Substitution::identity()) == RuleClass::PR);

    CHECK(class_within(RuleClass::LPR, RuleClass::SR));
    CHECK(class_within(RuleClass::LPR, RuleClass::SPR));
    CHECK_FALSE(class_within(RuleClass::SR, RuleClass::LPR));
    CHECK_FALSE(class_within(RuleClass::PR, RuleClass::SPR));
}

TEST_CASE("classification is consistent with the witness structure") {
    Rng rng(601);
    for (int t = 0; t < 300; ++t) {
        Clause c = rng.random_clause(6, 4);
        if (c.tautological()) continue;
        Substitution sigma = rng.random_substitution(6, rng.pick(0, 5));
        RuleClass k = classify_witness(c, sigma);
        if (!sigma.is_assignment()) {
            CHECK(k == RuleClass::SR);
            continue;
        }
        CHECK(class_within(k, RuleClass::PR));
        std::vector<Var> cvars;
        for (const Lit& l : c) cvars.push_back(l.var());
        bool same_domain = sigma.const_domain() == cvars;
        if (same_domain)
            CHECK(class_within(k, RuleClass::SPR));
        else
            CHECK(k == RuleClass::PR);
    }
}

TEST_CASE("blocked clause rule") {
    Instance inst(Formula{}, {4}, 4); // b1 = 4

    // db = {not y or not x}, c = y or x, pivot x: resolvent is tautological
    CHECK(check_cost_bc(formula({{-2, -1}}), clause({2, 1}), Lit(1, true), inst));
    // db = {z or not x}: y or z is not tautological
    CHECK_FALSE(check_cost_bc(formula({{3, -1}}), clause({2, 1}), Lit(1, true), inst));
    // positive blocking pivots never block
    CHECK_FALSE(check_cost_bc(Formula{}, clause({4}), Lit(4, true), inst));
    // pivot must occur in the clause
    CHECK_THROWS_AS(check_cost_bc(Formula{}, clause({2}), Lit(1, true), inst),
                    std::invalid_argument);
}

TEST_CASE("blocked clauses are cost-LPR") {
    Rng rng(733);
    int accepted = 0;
    for (int t = 0; t < 500; ++t) {
        int n = rng.pick(3, 7);
        Instance inst = rng.random_planted_instance(n, rng.pick(1, 6), 3, rng.pick(0, 2));
        Clause c = rng.random_clause(n, 3);
        if (c.tautological()) continue;
        Lit pivot = c.lits()[static_cast<size_t>(rng.pick(0, int(c.size()) - 1))];
        if (!check_cost_bc(inst.hard(), c, pivot, inst)) continue;
        ++accepted;
        // witness: falsify the rest of the clause, satisfy the pivot
        Substitution w = negation_of(c.without(pivot));
        w.set_constant(pivot.var(), pivot.positive());
        StepOutcome out =
            check_redundant_step(inst.hard(), inst, c, w, RuleClass::LPR);
        CHECK(out.accepted);
    }
    CHECK(accepted > 30);
}

TEST_CASE("flip degree") {
    Instance inst = two_blocking();
    CHECK(flip_degree(clause({1}), Substitution::identity(), inst).value == 0);
    CHECK(flip_degree(clause({1}), Substitution::identity(), inst).exact);

    FlipResult one = flip_degree(clause({1}), subst_const({{1, true}}), inst);
    CHECK(one.exact);
    CHECK(one.value == 1);

    // same-domain witnesses have constant distance over all extensions
    Clause c = clause({1, 2, 3, 4});
    Instance wide(Formula{}, {}, 4);
    Substitution w = subst_const({{1, true}, {2, true}, {3, true}, {4, false}});
    FlipResult three = flip_degree(c, w, wide);
    CHECK(three.exact);
    CHECK(three.value == 3);
}

TEST_CASE("flip degree agrees with brute force") {
    Rng rng(811);
    for (int t = 0; t < 300; ++t) {
        int n = rng.pick(2, 8);
        Instance inst(Formula{}, {}, n);
        Clause c = rng.random_clause(n, 3);
        if (c.tautological()) continue;
        Substitution sigma = rng.random_substitution(n, rng.pick(0, n));
        FlipResult f = flip_degree(c, sigma, inst, 12);
        REQUIRE(f.exact);
        CHECK(f.value == exhaustive_flip(inst, c, sigma));
    }
}

TEST_CASE("flip upper bound kicks in beyond the limit") {
    Instance inst(Formula{}, {}, 30);
    std::vector<Lit> lits;
    Substitution sigma;
    for (Var v = 1; v <= 25; ++v) sigma.set_constant(v, true);
    FlipResult f = flip_degree(clause({30}), sigma, inst, 10);
    CHECK_FALSE(f.exact);
    CHECK(f.value == 25);
}

TEST_CASE("full redundant step check") {
    // the unique single-flip witness for unit b1 fails the cost condition
    Instance inst = flip_example_instance();
    StepOutcome lpr = check_redundant_step(inst.hard(), inst, clause({3}),
                                           subst_const({{3, true}}), RuleClass::LPR);
    CHECK_FALSE(lpr.accepted);
    CHECK(lpr.reject_reason.find("cost") != std::string::npos);
    CHECK(lpr.cost.max_delta == 1);

    // a propagation step as an empty-witness redundant step
    Instance rup(formula({{1, 2}, {-1, 2}}), {2}, 2);
    StepOutcome ok = check_redundant_step(rup.hard(), rup, clause({2}),
                                          Substitution::identity(), RuleClass::SR);
    CHECK(ok.accepted);
    CHECK(ok.cost.max_delta == 0);

    // new variables are rejected
    StepOutcome nv = check_redundant_step(rup.hard(), rup, clause({5}),
                                          Substitution::identity(), RuleClass::SR);
    CHECK_FALSE(nv.accepted);
    CHECK(nv.reject_reason.find("new variable") != std::string::npos);

    // claimed class is a ceiling
    StepOutcome ceiling = check_redundant_step(rup.hard(), rup, clause({2}),
                                               Substitution::identity(), RuleClass::LPR);
    CHECK_FALSE(ceiling.accepted);
}

TEST_CASE("accepted steps are semantically redundant") {
    Rng rng(907);
    int accepted = 0;
    for (int t = 0; t < 400; ++t) {
        int n = rng.pick(3, 10);
        Instance inst = rng.random_planted_instance(n, rng.pick(2, 8), 3, rng.pick(0, n / 2));
        Clause c = rng.random_clause(n, 3);
        if (c.tautological()) continue;
        Substitution sigma = rng.pick(0, 1) ? rng.random_assignment(n, rng.pick(0, n))
                                            : rng.random_substitution(n, rng.pick(0, n));
        StepOutcome out = check_redundant_step(inst.hard(), inst, c, sigma, RuleClass::SR);
        if (!out.accepted) continue;
        ++accepted;
        CHECK(brute_redundant(inst, c));
    }
    CHECK(accepted > 30);
}
