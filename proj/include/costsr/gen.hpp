#pragma once

// Instance and proof generators: blocking-variable transformation, the
// pigeonhole family and its redundancy proof, minimally-unsat lifting,
// negative-unit and extension-clause derivations, permutation-witness steps,
// enumeration-based certification, and the Hamming incompleteness family.

#include <map>
#include <utility>
#include <vector>

#include "costsr/model.hpp"
#include "costsr/proof.hpp"

namespace costsr {

struct BlockifyMapping {
    std::vector<Var> soft_to_blocking; // one entry per soft clause copy
    int original_nvars = 0;
    int new_nvars = 0;
};

// Each soft clause copy becomes a hard clause extended by a fresh blocking
// variable, in multiset order.
std::pair<Instance, BlockifyMapping> blockify(const Formula& hard, const Formula& soft);

// Pigeonhole instance with blocking variables: totality and injectivity
// clauses, blocked by b_i and b_{i,k,j} respectively. Variables are numbered
// p_{i,j} row-major, then b_i, then b_{i,k,j} lexicographic.
Instance gen_bphp(int m, int n);

// Redundancy proof that the optimal cost of gen_bphp(m, n) is m - n.
Proof gen_bphp_proof(int m, int n);

struct PermutationWitness {
    std::map<Var, Var> perm; // fixed points implicit

    Var apply(Var v) const {
        auto it = perm.find(v);
        return it == perm.end() ? v : it->second;
    }
    void swap(Var a, Var b) {
        if (a == b) return;
        perm[a] = b;
        perm[b] = a;
    }
};

// Redundant step whose witness is the negation of c composed with a
// permutation that fixes the blocking set. Validates every lemma condition,
// including the restriction inclusion, before emitting.
ProofStep make_symmetry_step(const Formula& db, const Instance& inst, const Clause& c,
                             const PermutationWitness& pi);

// With units for `positives` already derived and alpha_opt an optimal model
// of the database, derives the negative unit of every other blocking
// variable in two steps each.
std::vector<ProofStep> derive_negative_units(const Instance& inst,
                                             const TotalAssignment& alpha_opt,
                                             const std::vector<Var>& positives);

// Turns blocking variable b with unique occurrence (c or b) into an
// extension variable by deriving (not l or not b) for every literal of c.
std::vector<ProofStep> derive_extension_clauses(const Formula& db, const Instance& inst, Var b,
                                                const Clause& c);

// Lifts a refutation of a minimally unsatisfiable formula into a proof that
// the blockified instance has cost exactly 1.
std::pair<Instance, Proof> lift_min_unsat(const std::vector<Clause>& f, int f_nvars,
                                          const Proof& refutation,
                                          const TotalAssignment& alpha_opt);

// The standard lifting witness: a model of f minus its last clause, extended
// with the last blocking variable true and the others false.
TotalAssignment default_lift_witness(const std::vector<Clause>& f, int f_nvars);

// Enumeration-based certification: one redundant step per satisfying
// assignment other than the optimum, then unit derivations for every literal
// of the optimum. Exponential by design; desk scale only.
Proof certify_by_enumeration(const Instance& inst, int limit = 14);

// Equality-chain family whose two optimal assignments sit at maximal Hamming
// distance; no blocking variable is fixed across the optimal set.
Instance gen_hamming_family(int n);

// Plain pigeonhole CNF without blocking variables, for lifting inputs.
std::vector<Clause> gen_php_cnf(int m, int n, int* nvars_out);

// All-RUP refutation of a small unsatisfiable formula, found by DPLL and
// emitted in post-order. Throws std::invalid_argument on satisfiable input.
Proof rup_refutation(const std::vector<Clause>& clauses, int nvars);

} // namespace costsr
