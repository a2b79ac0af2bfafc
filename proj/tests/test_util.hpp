#pragma once

// Shared helpers for the test suites: compact builders, seeded random
// generators, and the exhaustive cost-delta oracle.

#include <algorithm>
#include <climits>
#include <random>
#include <vector>

#include "costsr/model.hpp"

namespace costsr::test {

inline Clause clause(std::initializer_list<int> lits) {
    return Clause::from_dimacs(std::vector<int>(lits));
}

inline Formula formula(std::initializer_list<std::initializer_list<int>> clauses) {
    Formula f;
    for (const auto& c : clauses) f.add(Clause::from_dimacs(std::vector<int>(c)));
    return f;
}

inline Substitution subst_const(std::initializer_list<std::pair<int, bool>> entries) {
    Substitution s;
    for (const auto& [v, val] : entries) s.set_constant(v, val);
    return s;
}

struct Rng {
    std::mt19937 gen;
    explicit Rng(uint32_t seed) : gen(seed) {}

    int pick(int lo, int hi) { // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(gen);
    }
    bool flip() { return pick(0, 1) == 1; }

    Clause random_clause(int nvars, int max_width) {
        int width = pick(1, max_width);
        std::vector<Lit> lits;
        for (int i = 0; i < width; ++i) lits.push_back(Lit(pick(1, nvars), flip()));
        return Clause(std::move(lits));
    }

    Formula random_formula(int nvars, int nclauses, int max_width) {
        Formula f;
        for (int i = 0; i < nclauses; ++i) f.add(random_clause(nvars, max_width));
        return f;
    }

    // substitution mixing constants, fixed points and literal images
    Substitution random_substitution(int nvars, int entries) {
        Substitution s;
        for (int i = 0; i < entries; ++i) {
            Var v = pick(1, nvars);
            switch (pick(0, 3)) {
            case 0: s.set_constant(v, false); break;
            case 1: s.set_constant(v, true); break;
            default: s.set_literal(v, Lit(pick(1, nvars), flip())); break;
            }
        }
        return s;
    }

    // an assignment-only substitution
    Substitution random_assignment(int nvars, int entries) {
        Substitution s;
        for (int i = 0; i < entries; ++i) s.set_constant(pick(1, nvars), flip());
        return s;
    }

    TotalAssignment random_total(int nvars) {
        TotalAssignment a(nvars);
        for (Var v = 1; v <= nvars; ++v) a.set(v, flip());
        return a;
    }

    // instance whose hard part is satisfied by a planted model
    Instance random_planted_instance(int nvars, int nclauses, int max_width, int nblocking) {
        TotalAssignment planted = random_total(nvars);
        Formula hard;
        for (int i = 0; i < nclauses; ++i) {
            Clause c = random_clause(nvars, max_width);
            if (!planted.satisfies(c)) {
                Var v = pick(1, nvars);
                std::vector<Lit> lits = c.lits();
                lits.push_back(Lit(v, planted.value(v)));
                c = Clause(std::move(lits));
            }
            hard.add(c);
        }
        std::vector<Var> blocking;
        std::vector<Var> all;
        for (Var v = 1; v <= nvars; ++v) all.push_back(v);
        std::shuffle(all.begin(), all.end(), gen);
        for (int i = 0; i < nblocking && i < nvars; ++i) blocking.push_back(all[i]);
        return Instance(std::move(hard), std::move(blocking), nvars);
    }
};

// the three-clause formula from the incompleteness discussion:
// x or y or b1, not x or b2, not y or b3, blocking (b1, b2, b3)
// variables: x=1 y=2 b1=3 b2=4 b3=5
inline Instance flip_example_instance() {
    Formula hard = formula({{1, 2, 3}, {-1, 4}, {-2, 5}});
    return Instance(std::move(hard), {3, 4, 5}, 5);
}

inline int universe_of(const Instance& inst, const Clause& c, const Substitution& sigma) {
    int n = inst.nvars();
    for (const Lit& l : c) n = std::max(n, l.var());
    for (const auto& [v, img] : sigma.entries()) {
        n = std::max(n, v);
        if (img.kind == Substitution::Image::Literal) n = std::max(n, img.lit.var());
    }
    return n;
}

inline bool eval_image(const Substitution::Image& img, const TotalAssignment& tau) {
    if (img.kind == Substitution::Image::Literal)
        return tau.value(img.lit.var()) == img.lit.positive();
    return img.const_value();
}

// max over all total extensions of the negation of c of
// cost(tau . sigma) - cost(tau), by explicit enumeration
inline long long exhaustive_max_delta(const Instance& inst, const Clause& c,
                                      const Substitution& sigma) {
    int n = universe_of(inst, c, sigma);
    long long best = LLONG_MIN;
    for (uint64_t bits = 0; bits < (1ull << n); ++bits) {
        TotalAssignment tau = TotalAssignment::from_bits(bits, n);
        bool extends = true;
        for (const Lit& l : c)
            if (tau.satisfies(l)) { extends = false; break; }
        if (!extends) continue;
        long long cost_tau = 0, cost_tau_sigma = 0;
        for (Var b : inst.blocking()) {
            if (tau.value(b)) ++cost_tau;
            if (eval_image(sigma.image_of_var(b), tau)) ++cost_tau_sigma;
        }
        best = std::max(best, cost_tau_sigma - cost_tau);
    }
    return best;
}

} // namespace costsr::test
