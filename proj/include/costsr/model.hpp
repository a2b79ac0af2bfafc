#pragma once

// Core value types: variables, literals, clauses, clause multisets,
// substitutions, assignments and blocking-variable instances.
// All types are immutable values after construction.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace costsr {

using Var = int; // 1-based; dense within an instance (1..nvars)

// A literal is a variable or its negation. Encoded as 2*var+sign so that the
// canonical order (ascending variable, positive before negative) is the
// natural order on codes.
class Lit {
public:
    Lit() : code_(0) {} // invalid sentinel (variable 0)
    Lit(Var v, bool positive) : code_(2 * v + (positive ? 0 : 1)) {
        if (v < 1) throw std::invalid_argument("literal variable must be >= 1");
    }

    static Lit from_dimacs(int n) {
        if (n == 0) throw std::invalid_argument("0 is not a literal");
        return n > 0 ? Lit(n, true) : Lit(-n, false);
    }
    int to_dimacs() const { return positive() ? var() : -var(); }

    Var var() const { return code_ >> 1; }
    bool positive() const { return (code_ & 1) == 0; }
    Lit negated() const { Lit l; l.code_ = code_ ^ 1; return l; }
    Lit operator~() const { return negated(); }

    // watch/index code; 2*var for positive, 2*var+1 for negative
    int code() const { return code_; }

    bool operator==(const Lit& o) const { return code_ == o.code_; }
    bool operator!=(const Lit& o) const { return code_ != o.code_; }
    bool operator<(const Lit& o) const { return code_ < o.code_; }

private:
    int code_;
};

// Duplicate-free clause in canonical literal order. A clause containing both
// l and ~l is representable and flagged tautological. The empty clause is
// the contradiction.
class Clause {
public:
    Clause() = default;
    explicit Clause(std::vector<Lit> lits);
    static Clause from_dimacs(const std::vector<int>& lits);

    const std::vector<Lit>& lits() const { return lits_; }
    size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    bool tautological() const { return tautological_; }
    bool contains(Lit l) const;
    bool contains_var(Var v) const;
    Clause without(Lit l) const;

    std::vector<Lit>::const_iterator begin() const { return lits_.begin(); }
    std::vector<Lit>::const_iterator end() const { return lits_.end(); }

    bool operator==(const Clause& o) const { return lits_ == o.lits_; }
    bool operator!=(const Clause& o) const { return lits_ != o.lits_; }
    bool operator<(const Clause& o) const { return lits_ < o.lits_; }

    size_t hash() const;
    std::string to_dimacs() const; // "1 -3 0"

private:
    std::vector<Lit> lits_;
    bool tautological_ = false;
};

struct ClauseHash {
    size_t operator()(const Clause& c) const { return c.hash(); }
};

// Multiset of clauses. Entries keep first-insertion order; adding an existing
// clause increments its count.
class Formula {
public:
    struct Entry {
        Clause clause;
        uint32_t count;
    };

    Formula() = default;

    void add(const Clause& c, uint32_t count = 1);
    // number of clauses counted with multiplicity
    size_t size() const { return total_; }
    size_t distinct_size() const { return entries_.size(); }
    bool empty() const { return total_ == 0; }
    uint32_t count(const Clause& c) const;
    bool contains(const Clause& c) const { return count(c) > 0; }

    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<Entry>::const_iterator begin() const { return entries_.begin(); }
    std::vector<Entry>::const_iterator end() const { return entries_.end(); }

    Var max_var() const;
    std::vector<Var> vars() const; // sorted, distinct

    // multiset equality, independent of insertion order
    bool operator==(const Formula& o) const;
    bool operator!=(const Formula& o) const { return !(*this == o); }

private:
    std::vector<Entry> entries_;
    std::unordered_map<Clause, size_t, ClauseHash> index_;
    size_t total_ = 0;
};

// Total map from variables to {0, 1, literal}; variables absent from the map
// are fixed points. Application is simultaneous, never iterated.
class Substitution {
public:
    struct Image {
        enum Kind { False, True, Literal } kind;
        Lit lit; // valid when kind == Literal

        bool is_const() const { return kind != Literal; }
        bool const_value() const { return kind == True; }
        bool operator==(const Image& o) const {
            return kind == o.kind && (kind != Literal || lit == o.lit);
        }
    };

    Substitution() = default;
    static Substitution identity() { return Substitution(); }

    void set_constant(Var v, bool value);
    void set_literal(Var v, Lit image); // image == v itself erases the entry

    bool maps(Var v) const { return map_.count(v) > 0; }
    Image image_of_var(Var v) const; // fixed points come back as Literal(v,+)
    Image apply(Lit l) const;        // respects sigma(~x) = ~sigma(x)

    // true when every image is a constant or a fixed point
    bool is_assignment() const;
    // assignment domain: variables mapped to constants, sorted
    std::vector<Var> const_domain() const;
    // variables with sigma(v) != v, sorted
    std::vector<Var> moved_vars() const;

    size_t support_size() const { return map_.size(); }
    const std::map<Var, Image>& entries() const { return map_; }

    bool operator==(const Substitution& o) const { return map_ == o.map_; }

private:
    std::map<Var, Image> map_;
};

// (sigma . tau)(x) = sigma(tau(x)), with sigma extended as identity on constants
Substitution compose(const Substitution& sigma, const Substitution& tau);

// The assignment falsifying every literal of c. Rejects tautological c.
Substitution negation_of(const Clause& c);

// nullopt means the clause is satisfied (a literal maps to true, or the image
// is tautological). Otherwise the image clause with false constants dropped.
std::optional<Clause> restrict_clause(const Clause& c, const Substitution& s);

// Image multiset with satisfied clauses removed; counts of survivors preserved.
Formula restrict_formula(const Formula& f, const Substitution& s);

// Total assignment over variables 1..nvars.
class TotalAssignment {
public:
    explicit TotalAssignment(int nvars) : vals_(static_cast<size_t>(nvars) + 1, 0) {}
    static TotalAssignment from_bits(uint64_t bits, int nvars);

    int nvars() const { return static_cast<int>(vals_.size()) - 1; }
    bool value(Var v) const { return vals_.at(static_cast<size_t>(v)) != 0; }
    void set(Var v, bool val) { vals_.at(static_cast<size_t>(v)) = val ? 1 : 0; }

    bool satisfies(const Lit& l) const { return value(l.var()) == l.positive(); }
    bool satisfies(const Clause& c) const;
    bool satisfies(const Formula& f) const;

    Substitution to_substitution() const;
    std::string to_bitstring() const; // value of var 1 first

    int hamming_distance(const TotalAssignment& o) const;

    bool operator==(const TotalAssignment& o) const { return vals_ == o.vals_; }
    bool operator<(const TotalAssignment& o) const { return vals_ < o.vals_; }

private:
    std::vector<uint8_t> vals_;
};

// Hard-clause multiset plus the ordered set of designated blocking variables.
class Instance {
public:
    Instance(Formula hard, std::vector<Var> blocking, int nvars);

    const Formula& hard() const { return hard_; }
    const std::vector<Var>& blocking() const { return blocking_; }
    int nvars() const { return nvars_; }
    int num_blocking() const { return static_cast<int>(blocking_.size()); }
    bool is_blocking(Var v) const {
        return v >= 1 && v <= nvars_ && is_blocking_[static_cast<size_t>(v)] != 0;
    }

    // number of blocking variables set true; alpha must be total over nvars
    long long cost_of(const TotalAssignment& alpha) const;

private:
    Formula hard_;
    std::vector<Var> blocking_;
    int nvars_;
    std::vector<char> is_blocking_;
};

} // namespace costsr
