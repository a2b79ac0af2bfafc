// Command-line front end: proof checking, instance/proof generation, the
// exact-cost oracle, blocking-variable transformation and the PB export.
//
// Exit codes: 0 accepted/success, 1 rejected/refuted, 2 usage or format
// error, 3 resource limit.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "costsr/gen.hpp"
#include "costsr/oracle.hpp"
#include "costsr/proof.hpp"

using namespace costsr;

namespace {

constexpr int kExitAccepted = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    std::cout << "wrote " << path << "\n";
}

std::string bound_text(const Verdict& v) {
    if (!v.bound) return "";
    std::ostringstream os;
    os << (v.bound->first == BoundKind::Eq ? "eq " : "geq ") << v.bound->second;
    return os.str();
}

void print_stats(const Verdict& v, bool msr) {
    const VerdictStats& s = v.stats;
    std::cout << "steps " << s.steps << "\n";
    std::cout << "inferred " << s.inferred << "\n";
    std::cout << "redundant lpr=" << s.lpr << " spr=" << s.spr << " pr=" << s.pr
              << " sr=" << s.sr << "\n";
    if (msr)
        std::cout << "soft copy=" << s.msr_copy << " split=" << s.msr_split
                  << " merge=" << s.msr_merge << "\n";
    std::cout << "max-width " << s.max_width << "\n";
    if (s.max_exact_flip >= 0)
        std::cout << "max-exact-flip " << s.max_exact_flip << "\n";
    else
        std::cout << "max-exact-flip none\n";
}

nlohmann::json verdict_json(const Verdict& v, double ms) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["accepted"] = v.accepted;
    if (v.bound) {
        j["bound"] = {{"kind", v.bound->first == BoundKind::Eq ? "eq" : "geq"},
                      {"k", v.bound->second}};
    } else {
        j["bound"] = nullptr;
    }
    if (v.failing_step)
        j["failing_step"] = *v.failing_step;
    else
        j["failing_step"] = nullptr;
    j["reason"] = v.reason;
    j["stats"] = {{"steps", v.stats.steps},
                  {"inferred", v.stats.inferred},
                  {"lpr", v.stats.lpr},
                  {"spr", v.stats.spr},
                  {"pr", v.stats.pr},
                  {"sr", v.stats.sr},
                  {"max_width", v.stats.max_width},
                  {"max_exact_flip", v.stats.max_exact_flip},
                  {"msr_copy", v.stats.msr_copy},
                  {"msr_split", v.stats.msr_split},
                  {"msr_merge", v.stats.msr_merge}};
    j["timing_ms"] = ms;
    return j;
}

int run_check(const std::string& instance_path, const std::string& proof_path, bool msr,
              bool stats, bool json) {
    Instance inst = parse_instance(slurp(instance_path));
    std::string proof_text = slurp(proof_path);

    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    if (msr)
        v = check_msr_proof(inst, parse_msr_proof(proof_text));
    else
        v = check_proof(inst, parse_proof(proof_text));
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();

    if (json) {
        std::cout << verdict_json(v, ms).dump(2) << "\n";
    } else if (v.accepted) {
        std::cout << "ACCEPTED";
        std::string b = bound_text(v);
        if (!b.empty()) std::cout << ' ' << b;
        std::cout << "\n";
        if (stats) print_stats(v, msr);
    } else {
        std::cout << "REJECTED step " << (v.failing_step ? *v.failing_step : 0) << ": "
                  << v.reason << "\n";
        if (stats) print_stats(v, msr);
    }
    return v.accepted ? kExitAccepted : kExitRejected;
}

int run_cost(const std::string& instance_path, bool enumerate, int limit, long long budget) {
    Instance inst = parse_instance(slurp(instance_path));
    OracleLimits limits;
    limits.exhaustive_vars = limit;
    limits.bb_node_budget = budget;

    CostReport report = brute_cost(inst, limits);
    if (!report.satisfiable) {
        std::cout << "unsatisfiable\n";
        return kExitRejected;
    }
    std::cout << "cost " << report.cost << "\n";
    if (report.witness) std::cout << "witness " << report.witness->to_bitstring() << "\n";
    std::cout << "method "
              << (report.method == CostReport::Exhaustive ? "exhaustive" : "branch-and-bound")
              << "\n";
    if (enumerate) {
        std::vector<TotalAssignment> optima = optimal_assignments(inst, limits);
        std::cout << "optima " << optima.size() << "\n";
        for (const TotalAssignment& a : optima)
            std::cout << "optimum " << a.to_bitstring() << "\n";
        std::optional<long long> hd = min_pairwise_hamming(optima);
        if (hd)
            std::cout << "min-hamming " << *hd << "\n";
        else
            std::cout << "min-hamming infinite\n";
    }
    return kExitAccepted;
}

int run_gen(const std::string& family, const std::vector<std::string>& params, bool with_proof,
            std::string out_prefix) {
    Instance inst(Formula{}, {}, 0);
    Proof proof;
    bool have_proof = false;

    if (family == "bphp") {
        if (params.size() != 2) throw CLI::ValidationError("gen", "bphp needs <m> <n>");
        int m = std::stoi(params[0]);
        int n = std::stoi(params[1]);
        inst = gen_bphp(m, n);
        if (with_proof) {
            proof = gen_bphp_proof(m, n);
            have_proof = true;
        }
        if (out_prefix.empty())
            out_prefix = "bphp_" + std::to_string(m) + "_" + std::to_string(n);
    } else if (family == "hamming") {
        if (params.size() != 1) throw CLI::ValidationError("gen", "hamming needs <n>");
        int n = std::stoi(params[0]);
        inst = gen_hamming_family(n);
        if (with_proof)
            throw CLI::ValidationError("gen", "no proof generator for the hamming family");
        if (out_prefix.empty()) out_prefix = "hamming_" + std::to_string(n);
    } else if (family == "minunsat-lift") {
        if (params.size() != 2)
            throw CLI::ValidationError("gen", "minunsat-lift needs <formula.cnf> <refutation>");
        int nvars = 0;
        std::vector<Clause> f = parse_dimacs_cnf(slurp(params[0]), &nvars);
        Proof refutation = parse_proof(slurp(params[1]));
        TotalAssignment alpha = default_lift_witness(f, nvars);
        auto [lifted_inst, lifted_proof] = lift_min_unsat(f, nvars, refutation, alpha);
        inst = std::move(lifted_inst);
        proof = std::move(lifted_proof);
        have_proof = with_proof;
        if (out_prefix.empty()) out_prefix = "lifted";
    } else {
        throw CLI::ValidationError("gen", "unknown family (use bphp, hamming, minunsat-lift)");
    }

    spit(out_prefix + ".bcnf", print_instance(inst));
    if (have_proof) spit(out_prefix + ".csr", print_proof(proof));
    return kExitAccepted;
}

int run_blockify(const std::string& wcnf_path, std::string out_prefix) {
    Wcnf wcnf = parse_wcnf(slurp(wcnf_path));
    Formula hard, soft;
    for (const Clause& c : wcnf.hard) hard.add(c);
    for (const Clause& c : wcnf.soft) soft.add(c);
    auto [inst, mapping] = blockify(hard, soft);

    if (out_prefix.empty()) {
        out_prefix = wcnf_path;
        size_t dot = out_prefix.rfind('.');
        if (dot != std::string::npos && dot > 0) out_prefix = out_prefix.substr(0, dot);
    }
    spit(out_prefix + ".bcnf", print_instance(inst));

    std::ostringstream os;
    os << "map " << mapping.soft_to_blocking.size() << "\n";
    size_t idx = 0;
    for (const Formula::Entry& e : soft)
        for (uint32_t i = 0; i < e.count; ++i)
            os << mapping.soft_to_blocking[idx++] << ' ' << e.clause.to_dimacs() << "\n";
    spit(out_prefix + ".map", os.str());
    return kExitAccepted;
}

int run_export(const std::string& instance_path, const std::string& proof_path,
               const std::string& out_path) {
    Instance inst = parse_instance(slurp(instance_path));
    Proof proof = parse_proof(slurp(proof_path));
    std::string script;
    try {
        script = export_veripb(inst, proof);
    } catch (const std::invalid_argument& e) {
        std::cerr << "export: " << e.what() << "\n";
        return kExitRejected;
    }
    if (out_path.empty())
        std::cout << script;
    else
        spit(out_path, script);
    return kExitAccepted;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cost-redundancy proof toolkit for MaxSAT instances with blocking variables"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "check a proof against an instance");
    std::string check_instance, check_proof_path;
    bool check_msr = false, check_stats = false, check_json = false;
    check->add_option("instance", check_instance, "BCNF instance file")->required();
    check->add_option("proof", check_proof_path, "proof file")->required();
    check->add_flag("--msr", check_msr, "check a MaxSAT-resolution proof");
    check->add_flag("--stats", check_stats, "print step statistics");
    check->add_flag("--json", check_json, "machine-readable verdict");

    auto* gen = app.add_subcommand("gen", "generate instances and proofs");
    std::string gen_family;
    std::vector<std::string> gen_params;
    bool gen_proof = false;
    std::string gen_out;
    gen->add_option("family", gen_family, "bphp | hamming | minunsat-lift")->required();
    gen->add_option("params", gen_params, "family parameters");
    gen->add_flag("--proof", gen_proof, "also write the generated proof");
    gen->add_option("--out", gen_out, "output path prefix");

    auto* cost = app.add_subcommand("cost", "exact minimum cost by the oracle");
    std::string cost_instance;
    bool cost_enumerate = false;
    int cost_limit = 20;
    long long cost_budget = 10000000;
    cost->add_option("instance", cost_instance, "BCNF instance file")->required();
    cost->add_flag("--enumerate-optima", cost_enumerate,
                   "list every optimal assignment and their min Hamming distance");
    cost->add_option("--limit", cost_limit, "exhaustive enumeration limit in variables");
    cost->add_option("--budget", cost_budget,
                     "branch-and-bound node budget (0 forbids branch-and-bound)");

    auto* blockify_cmd = app.add_subcommand("blockify", "WCNF to blocking-variable instance");
    std::string blockify_in, blockify_out;
    blockify_cmd->add_option("wcnf", blockify_in, "WCNF input (2022 format)")->required();
    blockify_cmd->add_option("--out", blockify_out, "output path prefix");

    auto* export_cmd = app.add_subcommand("export", "pseudo-Boolean proof script");
    std::string export_instance, export_proof, export_out;
    export_cmd->add_option("instance", export_instance, "BCNF instance file")->required();
    export_cmd->add_option("proof", export_proof, "proof file")->required();
    export_cmd->add_option("--out", export_out, "output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (check->parsed())
            return run_check(check_instance, check_proof_path, check_msr, check_stats,
                             check_json);
        if (gen->parsed()) return run_gen(gen_family, gen_params, gen_proof, gen_out);
        if (cost->parsed())
            return run_cost(cost_instance, cost_enumerate, cost_limit, cost_budget);
        if (blockify_cmd->parsed()) return run_blockify(blockify_in, blockify_out);
        if (export_cmd->parsed()) return run_export(export_instance, export_proof, export_out);
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
