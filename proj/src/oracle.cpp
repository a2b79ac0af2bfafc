#include "costsr/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <thread>

namespace costsr {

int thread_cap() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("COSTSR_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

namespace {

constexpr int kMaskVarLimit = 30;

struct MaskProblem {
    int nvars;
    uint32_t blocking_mask = 0;
    std::vector<std::pair<uint32_t, uint32_t>> clauses; // (pos, neg), tautologies dropped
    bool has_empty = false;

    explicit MaskProblem(const Instance& inst) : nvars(inst.nvars()) {
        for (Var b : inst.blocking()) blocking_mask |= 1u << (b - 1);
        for (const Formula::Entry& e : inst.hard()) {
            if (e.clause.tautological()) continue;
            if (e.clause.empty()) { has_empty = true; continue; }
            uint32_t pos = 0, neg = 0;
            for (const Lit& l : e.clause) {
                uint32_t bit = 1u << (l.var() - 1);
                (l.positive() ? pos : neg) |= bit;
            }
            clauses.emplace_back(pos, neg);
        }
    }

    bool satisfies(uint32_t a) const {
        for (const auto& [pos, neg] : clauses)
            if ((pos & a) == 0 && (neg & ~a) == 0) return false;
        return true;
    }
};

struct ScanResult {
    long long best_cost = std::numeric_limits<long long>::max();
    uint64_t best_bits = 0;
    bool found = false;
};

ScanResult scan_range(const MaskProblem& p, uint64_t lo, uint64_t hi) {
    ScanResult r;
    for (uint64_t a = lo; a < hi; ++a) {
        long long cost = std::popcount(static_cast<uint32_t>(a) & p.blocking_mask);
        if (r.found && cost >= r.best_cost) continue;
        if (!p.satisfies(static_cast<uint32_t>(a))) continue;
        r.best_cost = cost;
        r.best_bits = a;
        r.found = true;
    }
    return r;
}

CostReport exhaustive_cost(const Instance& inst) {
    MaskProblem p(inst);
    CostReport out;
    out.method = CostReport::Exhaustive;
    if (p.has_empty) return out;

    uint64_t space = 1ull << inst.nvars();
    int workers = thread_cap();
    if (space < (1ull << 16)) workers = 1;

    ScanResult best;
    if (workers <= 1) {
        best = scan_range(p, 0, space);
    } else {
        std::vector<ScanResult> parts(static_cast<size_t>(workers));
        std::vector<std::thread> pool;
        uint64_t chunk = (space + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            uint64_t lo = chunk * static_cast<uint64_t>(t);
            uint64_t hi = std::min(space, lo + chunk);
            pool.emplace_back([&, t, lo, hi] { parts[static_cast<size_t>(t)] = scan_range(p, lo, hi); });
        }
        for (auto& th : pool) th.join();
        for (const ScanResult& r : parts) {
            if (!r.found) continue;
            if (!best.found || r.best_cost < best.best_cost ||
                (r.best_cost == best.best_cost && r.best_bits < best.best_bits))
                best = r;
        }
    }

    if (best.found) {
        out.satisfiable = true;
        out.cost = best.best_cost;
        out.witness = TotalAssignment::from_bits(best.best_bits, inst.nvars());
    }
    return out;
}

// Recursive DPLL used for both branch-and-bound cost minimization and plain
// satisfiability. Branches on the first unassigned variable of the first
// unsatisfied clause; free variables never cost anything, so a state with all
// clauses satisfied completes with every remaining variable false.
struct Dpll {
    const Instance& inst;
    long long budget;
    bool minimize;

    std::vector<std::vector<Lit>> clauses;
    std::vector<int8_t> value; // by var: 0 unassigned, +1, -1
    std::vector<Var> trail;
    long long nodes = 0;
    long long best_cost = std::numeric_limits<long long>::max();
    std::optional<TotalAssignment> best_witness;
    bool stop_at_first = false;
    bool found_any = false;

    Dpll(const Instance& i, long long node_budget, bool min_mode)
        : inst(i), budget(node_budget), minimize(min_mode),
          value(static_cast<size_t>(i.nvars()) + 1, 0) {
        for (const Formula::Entry& e : i.hard()) {
            if (e.clause.tautological()) continue;
            clauses.push_back(e.clause.lits());
        }
    }

    int lit_value(Lit l) const {
        int v = value[static_cast<size_t>(l.var())];
        return l.positive() ? v : -v;
    }
    void assign(Lit l) {
        value[static_cast<size_t>(l.var())] = l.positive() ? 1 : -1;
        trail.push_back(l.var());
    }
    void undo_to(size_t mark) {
        while (trail.size() > mark) {
            value[static_cast<size_t>(trail.back())] = 0;
            trail.pop_back();
        }
    }

    // returns true on conflict
    bool propagate() {
        bool again = true;
        while (again) {
            again = false;
            for (const auto& c : clauses) {
                Lit unit;
                int free_count = 0;
                bool sat = false;
                for (const Lit& l : c) {
                    int v = lit_value(l);
                    if (v > 0) { sat = true; break; }
                    if (v == 0) {
                        ++free_count;
                        if (free_count > 1) break;
                        unit = l;
                    }
                }
                if (sat || free_count > 1) continue;
                if (free_count == 0) return true;
                assign(unit);
                again = true;
            }
        }
        return false;
    }

    long long blocking_true() const {
        long long n = 0;
        for (Var b : inst.blocking())
            if (value[static_cast<size_t>(b)] > 0) ++n;
        return n;
    }

    const std::vector<Lit>* first_unsatisfied() const {
        for (const auto& c : clauses) {
            bool sat = false;
            for (const Lit& l : c)
                if (lit_value(l) > 0) { sat = true; break; }
            if (!sat) return &c;
        }
        return nullptr;
    }

    void record_model() {
        long long cost = blocking_true();
        if (minimize && found_any && cost >= best_cost) return;
        TotalAssignment w(inst.nvars());
        for (Var v = 1; v <= inst.nvars(); ++v)
            w.set(v, value[static_cast<size_t>(v)] > 0);
        best_cost = cost;
        best_witness = w;
        found_any = true;
    }

    // returns true when the search should stop entirely
    bool search() {
        if (budget > 0 && ++nodes > budget)
            throw ResourceLimitError("branch-and-bound node budget exceeded");
        size_t mark = trail.size();
        if (propagate()) {
            undo_to(mark);
            return false;
        }
        if (minimize && found_any && blocking_true() >= best_cost) {
            undo_to(mark);
            return false;
        }
        const std::vector<Lit>* c = first_unsatisfied();
        if (c == nullptr) {
            record_model();
            undo_to(mark);
            return stop_at_first;
        }
        Lit pick;
        for (const Lit& l : *c)
            if (lit_value(l) == 0) { pick = l; break; }
        for (int phase = 0; phase < 2; ++phase) {
            size_t mark2 = trail.size();
            assign(phase == 0 ? pick : pick.negated());
            if (search()) return true;
            undo_to(mark2);
        }
        undo_to(mark);
        return false;
    }
};

} // namespace

CostReport brute_cost(const Instance& inst, const OracleLimits& limits) {
    if (inst.nvars() <= std::min(limits.exhaustive_vars, kMaskVarLimit))
        return exhaustive_cost(inst);
    if (limits.bb_node_budget == 0)
        throw ResourceLimitError("instance beyond the exhaustive limit and no branch-and-bound budget");

    Dpll d(inst, limits.bb_node_budget, /*min_mode=*/true);
    CostReport out;
    out.method = CostReport::BranchAndBound;
    for (const auto& c : d.clauses)
        if (c.empty()) return out;
    d.search();
    if (d.found_any) {
        out.satisfiable = true;
        out.cost = d.best_cost;
        out.witness = d.best_witness;
    }
    return out;
}

std::vector<TotalAssignment> optimal_assignments(const Instance& inst,
                                                 const OracleLimits& limits) {
    if (inst.nvars() > std::min(limits.exhaustive_vars, kMaskVarLimit))
        throw ResourceLimitError("optimal_assignments requires the exhaustive regime");
    MaskProblem p(inst);
    std::vector<TotalAssignment> out;
    if (p.has_empty) return out;
    CostReport min = exhaustive_cost(inst);
    if (!min.satisfiable) return out;

    uint64_t space = 1ull << inst.nvars();
    for (uint64_t a = 0; a < space; ++a) {
        if (std::popcount(static_cast<uint32_t>(a) & p.blocking_mask) != min.cost) continue;
        if (!p.satisfies(static_cast<uint32_t>(a))) continue;
        out.push_back(TotalAssignment::from_bits(a, inst.nvars()));
    }
    return out;
}

bool brute_redundant(const Instance& inst, const Clause& c, const OracleLimits& limits) {
    CostReport before = brute_cost(inst, limits);
    Formula extended = inst.hard();
    extended.add(c);
    Instance with(extended, inst.blocking(), inst.nvars());
    CostReport after = brute_cost(with, limits);
    if (!before.satisfiable || !after.satisfiable)
        return before.satisfiable == after.satisfiable;
    return before.cost == after.cost;
}

std::optional<long long> min_pairwise_hamming(const std::vector<TotalAssignment>& a) {
    if (a.size() <= 1) return std::nullopt;
    for (size_t i = 1; i < a.size(); ++i)
        if (a[i].nvars() != a[0].nvars())
            throw std::invalid_argument("assignments over mixed variable universes");
    long long best = std::numeric_limits<long long>::max();
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            best = std::min(best, static_cast<long long>(a[i].hamming_distance(a[j])));
    return best;
}

std::optional<TotalAssignment> sat_solve(const Formula& gamma, int nvars,
                                         const OracleLimits& limits) {
    if (gamma.max_var() > nvars)
        throw std::invalid_argument("formula variable beyond the declared universe");
    Instance shim(gamma, {}, nvars);
    Dpll d(shim, limits.bb_node_budget, /*min_mode=*/false);
    d.stop_at_first = true;
    for (const auto& c : d.clauses)
        if (c.empty()) return std::nullopt;
    d.search();
    if (!d.found_any) return std::nullopt;
    return d.best_witness;
}

} // namespace costsr
