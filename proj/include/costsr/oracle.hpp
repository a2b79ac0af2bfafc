#pragma once

// Ground-truth engines for desk-scale validation: exact cost by exhaustive
// search or DPLL branch-and-bound, optimal-assignment enumeration, the
// semantic redundancy test, and Hamming-distance analysis. Kept independent
// of the watched-literal engine on purpose.

#include <optional>
#include <stdexcept>
#include <vector>

#include "costsr/model.hpp"

namespace costsr {

struct OracleLimits {
    int exhaustive_vars = 20;           // mask enumeration up to this many variables
    long long bb_node_budget = 10000000; // 0 means branch-and-bound is not allowed
};

class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CostReport {
    enum Method { Exhaustive, BranchAndBound };
    bool satisfiable = false;
    long long cost = 0; // valid when satisfiable
    std::optional<TotalAssignment> witness;
    Method method = Exhaustive;
};

// Exact minimum cost over satisfying total assignments. Exhaustive when
// nvars <= limits.exhaustive_vars, DPLL branch-and-bound otherwise.
// Throws ResourceLimitError when the node budget runs out.
CostReport brute_cost(const Instance& inst, const OracleLimits& limits = {});

// All satisfying assignments of minimum cost, in ascending bit order
// (variable 1 is the least significant bit). Requires the exhaustive regime.
std::vector<TotalAssignment> optimal_assignments(const Instance& inst,
                                                 const OracleLimits& limits = {});

// True iff adding c leaves the minimum cost unchanged. Unsatisfiable counts
// as changed unless both sides are unsatisfiable.
bool brute_redundant(const Instance& inst, const Clause& c,
                     const OracleLimits& limits = {});

// Minimum Hamming distance over unordered pairs; nullopt when |A| <= 1.
std::optional<long long> min_pairwise_hamming(const std::vector<TotalAssignment>& a);

// DPLL with unit propagation; nullopt means unsatisfiable. Don't-care
// variables in the returned model are set to false.
std::optional<TotalAssignment> sat_solve(const Formula& gamma, int nvars,
                                         const OracleLimits& limits = {});

// Effective worker count: min(COSTSR_THREADS, hardware), at least 1.
int thread_cap();

} // namespace costsr
