// Python bindings for the main operations: parsing, checking, generation,
// the oracle and the export. Text-oriented where a format exists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "costsr/gen.hpp"
#include "costsr/oracle.hpp"
#include "costsr/proof.hpp"

namespace py = pybind11;
using namespace costsr;

namespace {

py::object bound_obj(const Verdict& v) {
    if (!v.bound) return py::none();
    return py::make_tuple(v.bound->first == BoundKind::Eq ? "eq" : "geq", v.bound->second);
}

py::dict verdict_dict(const Verdict& v) {
    py::dict d;
    d["accepted"] = v.accepted;
    d["bound"] = bound_obj(v);
    d["failing_step"] = v.failing_step ? py::cast(*v.failing_step) : py::none();
    d["reason"] = v.reason;
    py::dict s;
    s["steps"] = v.stats.steps;
    s["inferred"] = v.stats.inferred;
    s["lpr"] = v.stats.lpr;
    s["spr"] = v.stats.spr;
    s["pr"] = v.stats.pr;
    s["sr"] = v.stats.sr;
    s["max_width"] = v.stats.max_width;
    s["max_exact_flip"] = v.stats.max_exact_flip;
    s["msr_copy"] = v.stats.msr_copy;
    s["msr_split"] = v.stats.msr_split;
    s["msr_merge"] = v.stats.msr_merge;
    d["stats"] = s;
    return d;
}

std::vector<int> assignment_bits(const TotalAssignment& a) {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(a.nvars()));
    for (Var v = 1; v <= a.nvars(); ++v) out.push_back(a.value(v) ? 1 : 0);
    return out;
}

// {var: True/False} for constants, {var: +/-lit} for literal images
Substitution witness_from_dict(const py::dict& d) {
    Substitution s;
    for (auto item : d) {
        Var v = py::cast<int>(item.first);
        if (py::isinstance<py::bool_>(item.second))
            s.set_constant(v, py::cast<bool>(item.second));
        else
            s.set_literal(v, Lit::from_dimacs(py::cast<int>(item.second)));
    }
    return s;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cost-redundancy proof systems for MaxSAT with blocking variables";

    py::class_<Instance>(m, "Instance")
        .def_property_readonly("nvars", &Instance::nvars)
        .def_property_readonly("num_clauses", [](const Instance& i) { return i.hard().size(); })
        .def_property_readonly("blocking", [](const Instance& i) { return i.blocking(); })
        .def("__repr__", [](const Instance& i) {
            return "<Instance vars=" + std::to_string(i.nvars()) +
                   " clauses=" + std::to_string(i.hard().size()) +
                   " blocking=" + std::to_string(i.num_blocking()) + ">";
        });

    py::register_exception<ParseError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<ResourceLimitError>(m, "ResourceLimit", PyExc_RuntimeError);

    m.def("parse_instance", [](const std::string& text) { return parse_instance(text); },
          py::arg("text"), "parse a BCNF instance");
    m.def("print_instance", &print_instance, py::arg("instance"));

    m.def(
        "check_proof",
        [](const Instance& inst, const std::string& proof_text) {
            return verdict_dict(check_proof(inst, parse_proof(proof_text)));
        },
        py::arg("instance"), py::arg("proof_text"),
        "check a redundancy proof; returns a verdict dict");
    m.def(
        "check_msr_proof",
        [](const Instance& inst, const std::string& proof_text) {
            return verdict_dict(check_msr_proof(inst, parse_msr_proof(proof_text)));
        },
        py::arg("instance"), py::arg("proof_text"),
        "check a MaxSAT-resolution proof; returns a verdict dict");

    m.def(
        "brute_cost",
        [](const Instance& inst) {
            CostReport r = brute_cost(inst);
            py::dict d;
            d["satisfiable"] = r.satisfiable;
            d["cost"] = r.satisfiable ? py::cast(r.cost) : py::none();
            d["witness"] = r.witness ? py::cast(assignment_bits(*r.witness)) : py::none();
            return d;
        },
        py::arg("instance"), "exact minimum cost by the oracle");
    m.def(
        "optimal_assignments",
        [](const Instance& inst) {
            std::vector<std::vector<int>> out;
            for (const TotalAssignment& a : optimal_assignments(inst))
                out.push_back(assignment_bits(a));
            return out;
        },
        py::arg("instance"));

    m.def("gen_bphp", [](int m, int n) { return gen_bphp(m, n); }, py::arg("m"), py::arg("n"));
    m.def(
        "gen_bphp_proof",
        [](int m, int n) { return print_proof(gen_bphp_proof(m, n)); }, py::arg("m"),
        py::arg("n"), "proof text for the pigeonhole instance");
    m.def("gen_hamming", [](int n) { return gen_hamming_family(n); }, py::arg("n"));
    m.def(
        "certify",
        [](const Instance& inst, int limit) {
            return print_proof(certify_by_enumeration(inst, limit));
        },
        py::arg("instance"), py::arg("limit") = 14,
        "enumeration-based certificate for a small instance");

    m.def(
        "blockify_wcnf",
        [](const std::string& wcnf_text) {
            Wcnf w = parse_wcnf(wcnf_text);
            Formula hard, soft;
            for (const Clause& c : w.hard) hard.add(c);
            for (const Clause& c : w.soft) soft.add(c);
            auto [inst, mapping] = blockify(hard, soft);
            return py::make_tuple(print_instance(inst), mapping.soft_to_blocking);
        },
        py::arg("wcnf_text"), "BCNF text plus the soft-to-blocking mapping");

    m.def(
        "export_veripb",
        [](const Instance& inst, const std::string& proof_text) {
            return export_veripb(inst, parse_proof(proof_text));
        },
        py::arg("instance"), py::arg("proof_text"),
        "pseudo-Boolean proof script for an accepted proof");

    m.def(
        "check_cost_condition",
        [](const Instance& inst, const std::vector<int>& clause, const py::dict& witness) {
            CostCheckReport r = check_cost_condition(inst, Clause::from_dimacs(clause),
                                                     witness_from_dict(witness));
            py::dict d;
            d["ok"] = r.ok;
            d["max_delta"] = r.max_delta;
            d["fixed_part"] = r.fixed_part;
            py::dict gains;
            for (const auto& [v, g] : r.free_var_gains) gains[py::cast(v)] = g;
            d["free_var_gains"] = gains;
            return d;
        },
        py::arg("instance"), py::arg("clause"), py::arg("witness"),
        "closed-form cost condition for one redundancy step");
    m.def(
        "flip_degree",
        [](const Instance& inst, const std::vector<int>& clause, const py::dict& witness,
           int limit) {
            FlipResult f = flip_degree(Clause::from_dimacs(clause), witness_from_dict(witness),
                                       inst, limit);
            return py::make_tuple(f.exact ? "exact" : "upper_bound", f.value);
        },
        py::arg("instance"), py::arg("clause"), py::arg("witness"), py::arg("limit") = 20);
    m.def(
        "classify_witness",
        [](const std::vector<int>& clause, const py::dict& witness) {
            return std::string(rule_class_name(
                classify_witness(Clause::from_dimacs(clause), witness_from_dict(witness))));
        },
        py::arg("clause"), py::arg("witness"));
}
