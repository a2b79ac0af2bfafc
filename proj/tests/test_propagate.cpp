#include <doctest.h>

#include "costsr/propagate.hpp"
#include "test_util.hpp"

using namespace costsr;
using namespace costsr::test;

namespace {

// Independent reimplementation of the propagation loop picking units in a
// randomized order; used as the confluence oracle.
PropagationResult shuffled_propagate(const Formula& gamma, Rng& rng) {
    Var n = gamma.max_var();
    std::vector<int8_t> value(static_cast<size_t>(n) + 1, 0);
    auto lv = [&](Lit l) {
        int v = value[static_cast<size_t>(l.var())];
        return l.positive() ? v : -v;
    };
    PropagationResult out;
    while (true) {
        std::vector<Lit> candidates;
        for (const Formula::Entry& e : gamma) {
            if (e.clause.tautological()) continue;
            Lit open;
            int free_count = 0;
            bool sat = false;
            for (const Lit& l : e.clause) {
                if (lv(l) > 0) { sat = true; break; }
                if (lv(l) == 0) { ++free_count; open = l; }
            }
            if (!sat && free_count == 1) candidates.push_back(open);
        }
        if (candidates.empty()) break;
        Lit pick = candidates[static_cast<size_t>(rng.pick(0, int(candidates.size()) - 1))];
        value[static_cast<size_t>(pick.var())] = pick.positive() ? 1 : -1;
        out.implied_units.push_back(pick);
    }
    Substitution s;
    for (Var v = 1; v <= n; ++v)
        if (value[static_cast<size_t>(v)] != 0) s.set_constant(v, value[static_cast<size_t>(v)] > 0);
    out.residual = restrict_formula(gamma, s);
    out.status = out.residual.contains(Clause()) ? PropagationResult::Conflict
                                                 : PropagationResult::Fixpoint;
    return out;
}

// brute-force entailment over all total assignments
bool entails(const Formula& gamma, const Clause& c, int nvars) {
    for (uint64_t bits = 0; bits < (1ull << nvars); ++bits) {
        TotalAssignment a = TotalAssignment::from_bits(bits, nvars);
        if (a.satisfies(gamma) && !a.satisfies(c)) return false;
    }
    return true;
}

} // namespace

TEST_CASE("unit_propagate on the worked examples") {
    PropagationResult r = unit_propagate(formula({{1}, {-1, 2}}));
    CHECK(r.status == PropagationResult::Fixpoint);
    CHECK(r.implied_units == std::vector<Lit>{Lit(1, true), Lit(2, true)});
    CHECK(r.residual.empty());

    CHECK(unit_propagate(formula({{1}, {-1}})).status == PropagationResult::Conflict);

    PropagationResult stuck = unit_propagate(formula({{1, 2}}));
    CHECK(stuck.status == PropagationResult::Fixpoint);
    CHECK(stuck.implied_units.empty());
    CHECK(stuck.residual == formula({{1, 2}}));
}

TEST_CASE("propagation is confluent") {
    // The residual formula is unique as long as no complementary pair of
    // units appears; once the empty clause is on the table only its presence
    // is order-independent (with units x and ~x, the order decides which
    // other clauses get removed as satisfied).
    Rng rng(101);
    int fixpoints = 0;
    for (int t = 0; t < 400; ++t) {
        Formula f = rng.random_formula(7, rng.pick(1, 14), 3);
        PropagationResult fixed = unit_propagate(f);
        PropagationResult shuffled = shuffled_propagate(f, rng);
        CHECK(fixed.status == shuffled.status);
        if (fixed.status == PropagationResult::Fixpoint) {
            ++fixpoints;
            CHECK(fixed.residual == shuffled.residual);
            std::vector<Lit> a = fixed.implied_units, b = shuffled.implied_units;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            CHECK(a == b);
        }
    }
    CHECK(fixpoints > 100);
}

TEST_CASE("derives_by_up matches the definition") {
    CHECK(derives_by_up(formula({{1}, {-1, 2}}), clause({2})));
    CHECK_FALSE(derives_by_up(formula({{1, 2}}), clause({1})));
    // membership implies derivability
    Formula f = formula({{1, 2, -3}, {4}});
    CHECK(derives_by_up(f, clause({1, 2, -3})));
    // tautologies hold immediately
    CHECK(derives_by_up(formula({{1, 2}}), clause({3, -3})));
}

TEST_CASE("engine derives agrees with the reference path on random queries") {
    Rng rng(7);
    for (int t = 0; t < 600; ++t) {
        Formula f = rng.random_formula(6, rng.pick(1, 12), 3);
        Clause c = rng.random_clause(6, 3);
        if (c.tautological()) continue;
        PropagationResult slow = unit_propagate(restrict_formula(f, negation_of(c)));
        CHECK(derives_by_up(f, c) == slow.conflict());
    }
}

TEST_CASE("derives_all short-circuits and reports the failing clause") {
    Formula gamma = formula({{1}});
    CHECK(derives_all(gamma, Formula{}).ok);
    Formula subset = formula({{1}});
    CHECK(derives_all(gamma, subset).ok);
    DerivesAllResult r = derives_all(gamma, formula({{1}, {2}}));
    CHECK_FALSE(r.ok);
    REQUIRE(r.failing.has_value());
    CHECK(*r.failing == clause({2}));
}

TEST_CASE("derivation is closed under restriction") {
    Rng rng(211);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        Formula gamma = rng.random_formula(7, rng.pick(2, 12), 3);
        // build a delta that gamma derives: members, supersets, implied units
        Formula delta;
        for (const Formula::Entry& e : gamma)
            if (rng.flip()) delta.add(e.clause);
        PropagationResult up = unit_propagate(gamma);
        for (const Lit& u : up.implied_units) {
            std::vector<Lit> lits{u};
            for (int i = rng.pick(0, 2); i > 0; --i) lits.push_back(Lit(rng.pick(1, 7), rng.flip()));
            delta.add(Clause(std::move(lits)));
        }
        if (!derives_all(gamma, delta).ok) continue; // only the premise matters
        Substitution sigma = rng.random_substitution(7, rng.pick(0, 5));
        ++checked;
        CHECK(derives_all(restrict_formula(gamma, sigma), restrict_formula(delta, sigma)).ok);
    }
    CHECK(checked > 200);
}

TEST_CASE("derived clauses are semantically entailed") {
    Rng rng(307);
    int positive = 0;
    for (int t = 0; t < 300; ++t) {
        int n = rng.pick(3, 16);
        Formula f = rng.random_formula(n, rng.pick(1, 2 * n), 3);
        Clause c = rng.random_clause(n, 3);
        if (c.tautological()) continue;
        if (derives_by_up(f, c)) {
            ++positive;
            CHECK(entails(f, c, n));
        }
    }
    CHECK(positive > 20);
}

TEST_CASE("assumption frames unwind cleanly") {
    Propagator p(4);
    p.add_clause(clause({1, 2}));
    p.add_clause(clause({-2, 3}));
    CHECK_FALSE(p.root_conflict());
    CHECK(p.derives(clause({2, 1})));
    // the same query twice: state must be restored between queries
    CHECK_FALSE(p.derives(clause({3})));
    CHECK_FALSE(p.derives(clause({3})));
    p.add_clause(clause({-1}));
    CHECK(p.derives(clause({3})));
}
