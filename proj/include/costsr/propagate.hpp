#pragma once

// Unit propagation and the efficiently checkable entailment relation |-1.
//
// unit_propagate is the reference implementation of the textbook loop over a
// Formula value. Propagator is the incremental two-watched-literal engine the
// proof checker runs on: the clause database grows monotonically and every
// |-1 query pushes an assumption frame, propagates and unwinds.

#include <optional>
#include <vector>

#include "costsr/model.hpp"

namespace costsr {

struct PropagationResult {
    enum Status { Fixpoint, Conflict };
    Status status = Fixpoint;
    // units consumed by the loop; on Conflict they reflect one propagation
    // order (the residual formula is order-independent, the trace is not)
    std::vector<Lit> implied_units;
    Formula residual;

    bool conflict() const { return status == Conflict; }
};

// Runs the unit propagation loop to its fixpoint, past any empty clause.
PropagationResult unit_propagate(const Formula& gamma);

// gamma |-1 c: unit propagation on gamma restricted by the negation of c
// derives the empty clause. Tautological c holds immediately.
bool derives_by_up(const Formula& gamma, const Clause& c);

struct DerivesAllResult {
    bool ok = true;
    std::optional<Clause> failing; // first clause of delta that is not derived
};

// gamma |-1 delta; short-circuits on the first failure.
DerivesAllResult derives_all(const Formula& gamma, const Formula& delta);

// Incremental watched-literal engine over a growable clause database.
// Root-level units are propagated eagerly and persist; queries stack
// assumption frames on top and always unwind back.
class Propagator {
public:
    explicit Propagator(int nvars);

    // Appends a clause. Tautologies and clauses satisfied at the root are
    // never watched. Must not be called while assumption frames are open.
    void add_clause(const Clause& c);

    bool root_conflict() const { return root_conflict_; }
    int nvars() const { return nvars_; }

    // db |-1 target, relative to the currently open assumption frames
    bool derives(const Clause& target);

    // Opens a frame, assumes v=value for each entry and propagates.
    // Returns true on conflict. Entries already assigned are skipped; an
    // entry contradicting an existing assignment is an immediate conflict.
    bool push_assignment(const std::vector<std::pair<Var, bool>>& assumptions);
    void pop_frame();

    bool value_is_assigned(Var v) const { return value_[static_cast<size_t>(v)] != 0; }
    bool assigned_value(Var v) const { return value_[static_cast<size_t>(v)] > 0; }

private:
    struct Watch {
        int clause_idx;
        Lit blocker;
    };

    // value_: 0 unassigned, +1 true, -1 false
    int lit_value(Lit l) const {
        int v = value_[static_cast<size_t>(l.var())];
        return l.positive() ? v : -v;
    }
    void assign(Lit l) {
        value_[static_cast<size_t>(l.var())] = l.positive() ? 1 : -1;
        trail_.push_back(l.var());
    }
    bool propagate();
    bool enqueue(Lit l); // true on conflict

    int nvars_;
    bool root_conflict_ = false;
    std::vector<std::vector<Lit>> clauses_;
    std::vector<std::vector<Watch>> watches_; // indexed by lit code
    std::vector<int8_t> value_;               // indexed by var
    std::vector<Var> trail_;
    size_t qhead_ = 0;
    std::vector<size_t> frames_; // trail marks of open assumption frames
};

} // namespace costsr
