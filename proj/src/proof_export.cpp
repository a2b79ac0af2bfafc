#include <algorithm>
#include <map>
#include <sstream>

#include "costsr/proof.hpp"
#include "text_lines.hpp"

namespace costsr {

namespace {

void print_pb_clause(std::ostringstream& os, const Clause& c) {
    for (const Lit& l : c) {
        os << "+1 ";
        if (!l.positive()) os << '~';
        os << 'x' << l.var() << ' ';
    }
    os << ">= 1";
}

void print_pb_witness(std::ostringstream& os, const Substitution& w) {
    bool first = true;
    for (const auto& [v, img] : w.entries()) {
        if (!first) os << ' ';
        first = false;
        os << 'x' << v << " -> ";
        switch (img.kind) {
        case Substitution::Image::False: os << '0'; break;
        case Substitution::Image::True: os << '1'; break;
        case Substitution::Image::Literal:
            if (!img.lit.positive()) os << '~';
            os << 'x' << img.lit.var();
            break;
        }
    }
}

struct LinearForm {
    long long constant = 0;
    std::map<Var, long long> coeffs; // nonzero entries only once emitted
    long long bound = 0;             // constant + sum of max{c_v, 0}
};

// The difference of the restricted and the original objective, written under
// the negation of the step clause with negative literals eliminated:
// constant + sum of c_v * v over free variables.
LinearForm objective_delta(const Instance& inst, const Clause& c, const Substitution& sigma) {
    Substitution neg_c = negation_of(c);
    LinearForm lf;
    for (Var b : inst.blocking()) {
        Substitution::Image img = sigma.image_of_var(b);
        if (img.kind == Substitution::Image::True) {
            lf.constant += 1;
        } else if (img.kind == Substitution::Image::Literal) {
            Substitution::Image after = neg_c.apply(img.lit);
            if (after.kind == Substitution::Image::True) {
                lf.constant += 1;
            } else if (after.kind == Substitution::Image::Literal) {
                if (after.lit.positive()) {
                    lf.coeffs[after.lit.var()] += 1;
                } else {
                    lf.constant += 1;
                    lf.coeffs[after.lit.var()] -= 1;
                }
            }
        }
        Substitution::Image self = neg_c.image_of_var(b);
        if (self.kind == Substitution::Image::Literal)
            lf.coeffs[b] -= 1;
        else if (self.kind == Substitution::Image::True)
            lf.constant -= 1;
    }
    for (auto it = lf.coeffs.begin(); it != lf.coeffs.end();) {
        if (it->second == 0)
            it = lf.coeffs.erase(it);
        else
            ++it;
    }
    lf.bound = lf.constant;
    for (const auto& [v, cv] : lf.coeffs) lf.bound += std::max(cv, 0ll);
    return lf;
}

} // namespace

std::string export_veripb(const Instance& inst, const Proof& proof) {
    CheckOptions opts;
    opts.collect_flip = false;
    Verdict verdict = check_proof(inst, proof, opts);
    if (!verdict.accepted)
        throw std::invalid_argument("export requires an accepted proof: " + verdict.reason);

    std::ostringstream os;
    os << "pbp costsr 1\n";
    os << "obj";
    for (Var b : inst.blocking()) os << " +1 x" << b;
    os << " ;\n";
    os << "f " << inst.hard().size() << " ;\n";

    for (const ProofStep& s : proof.steps) {
        switch (s.kind) {
        case ProofStep::Inferred:
            os << "u ";
            print_pb_clause(os, s.clause);
            os << " ;\n";
            break;
        case ProofStep::Redundant: {
            os << "red ";
            print_pb_clause(os, s.clause);
            os << " ; ";
            print_pb_witness(os, s.witness);
            os << " ; begin\n";
            LinearForm lf = objective_delta(inst, s.clause, s.witness);
            CostCheckReport report = check_cost_condition(inst, s.clause, s.witness);
            if (lf.bound != report.max_delta)
                throw std::logic_error("cost sub-derivation disagrees with the cost check");
            os << "    costlin " << lf.constant;
            for (const auto& [v, cv] : lf.coeffs) os << ' ' << cv << " x" << v;
            os << " ;\n";
            for (const auto& [v, cv] : lf.coeffs)
                os << "    costvar x" << v << ' ' << cv << ' ' << std::max(cv, 0ll) << " ;\n";
            os << "    costbound " << lf.bound << " <= 0 ;\n";
            os << "end\n";
            break;
        }
        case ProofStep::Conclude:
            os << "conclude " << (s.bound == BoundKind::Eq ? "eq" : "geq") << ' ' << s.k
               << " ;\n";
            break;
        }
    }
    return os.str();
}

namespace {

using detail::Lines;
using detail::parse_int;

Var parse_pb_var(std::string_view tok, long long lineno) {
    if (tok.size() < 2 || tok[0] != 'x')
        throw ParseError("expected a variable token like x3", lineno);
    return static_cast<Var>(parse_int(tok.substr(1), lineno, "a variable index"));
}

Lit parse_pb_lit(std::string_view tok, long long lineno) {
    bool positive = true;
    if (!tok.empty() && tok[0] == '~') {
        positive = false;
        tok = tok.substr(1);
    }
    return Lit(parse_pb_var(tok, lineno), positive);
}

// "+1 <lit> ... >= 1" starting at toks[from]; returns index after the "1"
size_t parse_pb_clause(const std::vector<std::string_view>& toks, size_t from, long long lineno,
                       Clause& out) {
    std::vector<Lit> lits;
    size_t i = from;
    while (i < toks.size() && toks[i] != ">=") {
        if (toks[i] != "+1")
            throw ParseError("expected coefficient +1 in a clause constraint", lineno);
        if (i + 1 >= toks.size()) throw ParseError("dangling coefficient", lineno);
        lits.push_back(parse_pb_lit(toks[i + 1], lineno));
        i += 2;
    }
    if (i + 1 >= toks.size() || toks[i] != ">=" || toks[i + 1] != "1")
        throw ParseError("clause constraint must end with \">= 1\"", lineno);
    out = Clause(std::move(lits));
    return i + 2;
}

size_t parse_pb_witness(const std::vector<std::string_view>& toks, size_t from, long long lineno,
                        Substitution& w) {
    size_t i = from;
    while (i < toks.size() && toks[i] != ";") {
        Var v = parse_pb_var(toks[i], lineno);
        if (i + 2 >= toks.size() || toks[i + 1] != "->")
            throw ParseError("witness entry must be \"x<v> -> <image>\"", lineno);
        std::string_view img = toks[i + 2];
        if (img == "0")
            w.set_constant(v, false);
        else if (img == "1")
            w.set_constant(v, true);
        else
            w.set_literal(v, parse_pb_lit(img, lineno));
        i += 3;
    }
    return i;
}

void expect_semicolon_end(const std::vector<std::string_view>& toks, size_t at,
                          long long lineno) {
    if (at + 1 != toks.size() || toks[at] != ";")
        throw ParseError("expected \";\" at end of line", lineno);
}

} // namespace

PbScript parse_pb_script(std::string_view text) {
    Lines in{text};
    PbScript script;

    std::vector<std::string_view> toks = in.next();
    if (toks.size() != 3 || toks[0] != "pbp" || toks[1] != "costsr" || toks[2] != "1")
        throw ParseError("missing \"pbp costsr 1\" header", in.lineno);

    toks = in.next();
    if (toks.empty() || toks[0] != "obj") throw ParseError("missing objective line", in.lineno);
    {
        size_t i = 1;
        while (i < toks.size() && toks[i] != ";") {
            if (toks[i] != "+1") throw ParseError("objective coefficients must be +1", in.lineno);
            if (i + 1 >= toks.size()) throw ParseError("dangling coefficient", in.lineno);
            script.objective.push_back(parse_pb_var(toks[i + 1], in.lineno));
            i += 2;
        }
        expect_semicolon_end(toks, i, in.lineno);
    }

    toks = in.next();
    if (toks.size() != 3 || toks[0] != "f" || toks[2] != ";")
        throw ParseError("missing \"f <n> ;\" line", in.lineno);
    script.num_constraints = parse_int(toks[1], in.lineno, "a constraint count");

    for (toks = in.next(); !toks.empty(); toks = in.next()) {
        if (toks[0] == "u") {
            PbLine line;
            line.kind = PbLine::Rup;
            size_t at = parse_pb_clause(toks, 1, in.lineno, line.clause);
            expect_semicolon_end(toks, at, in.lineno);
            script.lines.push_back(std::move(line));
        } else if (toks[0] == "red") {
            PbLine line;
            line.kind = PbLine::Red;
            size_t at = parse_pb_clause(toks, 1, in.lineno, line.clause);
            if (at >= toks.size() || toks[at] != ";")
                throw ParseError("expected \";\" after the redundancy clause", in.lineno);
            size_t after_w = parse_pb_witness(toks, at + 1, in.lineno, line.witness);
            if (after_w + 1 >= toks.size() || toks[after_w] != ";" ||
                toks[after_w + 1] != "begin" || after_w + 2 != toks.size())
                throw ParseError("redundancy line must end with \"; begin\"", in.lineno);

            toks = in.next();
            if (toks.size() < 3 || toks[0] != "costlin")
                throw ParseError("redundancy block must start with costlin", in.lineno);
            line.cost_constant = parse_int(toks[1], in.lineno, "the constant term");
            {
                size_t i = 2;
                while (i < toks.size() && toks[i] != ";") {
                    long long cv = parse_int(toks[i], in.lineno, "a coefficient");
                    if (i + 1 >= toks.size()) throw ParseError("dangling coefficient", in.lineno);
                    line.cost_coeffs.emplace_back(parse_pb_var(toks[i + 1], in.lineno), cv);
                    i += 2;
                }
                expect_semicolon_end(toks, i, in.lineno);
            }
            for (toks = in.next(); !toks.empty() && toks[0] == "costvar"; toks = in.next()) {
                if (toks.size() != 5 || toks[4] != ";")
                    throw ParseError("costvar line must be \"costvar x<v> <c> <max> ;\"",
                                     in.lineno);
                Var v = parse_pb_var(toks[1], in.lineno);
                long long cv = parse_int(toks[2], in.lineno, "a coefficient");
                long long mx = parse_int(toks[3], in.lineno, "a bound");
                if (mx != std::max(cv, 0ll))
                    throw ParseError("costvar bound must equal max{c_v, 0}", in.lineno);
                line.cost_var_bounds.emplace_back(v, mx);
            }
            if (toks.empty() || toks[0] != "costbound" || toks.size() != 5 || toks[2] != "<=" ||
                toks[3] != "0" || toks[4] != ";")
                throw ParseError("expected \"costbound <c> <= 0 ;\"", in.lineno);
            line.cost_bound = parse_int(toks[1], in.lineno, "the bound constant");
            toks = in.next();
            if (toks.size() != 1 || toks[0] != "end")
                throw ParseError("redundancy block must close with \"end\"", in.lineno);
            script.lines.push_back(std::move(line));
        } else if (toks[0] == "conclude") {
            if (toks.size() != 4 || (toks[1] != "geq" && toks[1] != "eq") || toks[3] != ";")
                throw ParseError("expected \"conclude geq|eq <k> ;\"", in.lineno);
            PbLine line;
            line.kind = PbLine::Conclude;
            line.bound = toks[1] == "eq" ? BoundKind::Eq : BoundKind::Geq;
            line.k = parse_int(toks[2], in.lineno, "a bound");
            script.lines.push_back(std::move(line));
        } else {
            throw ParseError("unknown script line \"" + std::string(toks[0]) + "\"", in.lineno);
        }
    }
    script.text_lines = in.lineno;
    return script;
}

} // namespace costsr
