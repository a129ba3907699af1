// Command line front end.
//
//   loci gen      --seed 7 --observed 5 --latent 2         random system
//   loci run      --fixture y_structure --algo both        derive the PAG
//   loci compare  --trials 200 --seed 3                    campaign of trials
//   loci trace    "X => Y" --fixture y_structure           derivation of one atom
//   loci export   --fixture example_two --format dot       graph conversion
//
// Exit codes: 0 success, 1 engines or trials disagree, 2 usage or input
// parse problem, 3 the facts are mutually inconsistent, 4 requested item
// not found (unknown fixture, missing file, undetermined atom).

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "loci/campaign.hpp"
#include "loci/fci.hpp"
#include "loci/fixtures.hpp"
#include "loci/graph_io.hpp"
#include "loci/io_json.hpp"
#include "loci/loci.hpp"
#include "loci/oracle.hpp"
#include "loci/random_dag.hpp"

namespace {

constexpr int kExitDisagree = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconsistent = 3;
constexpr int kExitNotFound = 4;

struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

void put_block(std::ostream& out, const std::string& text) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

loci::CausalDag load_system(const std::string& fixture, const std::string& dag_file) {
    if (!fixture.empty()) {
        try {
            return loci::fixture_dag(fixture);
        } catch (const std::invalid_argument& e) {
            std::string names;
            for (const auto& f : loci::fixtures()) names += std::string(" ") + f.name;
            throw NotFoundError(std::string(e.what()) + "; available:" + names);
        }
    }
    if (!dag_file.empty()) return loci::parse_dag(slurp(dag_file));
    throw CLI::ValidationError("input", "pass --fixture <name> or --dag <file>");
}

// Options shared by run and trace.
struct EngineOpts {
    std::string fixture;
    std::string dag_file;
    std::string facts_file;
    loci::LociConfig cfg;

    void attach(CLI::App* cmd) {
        cmd->add_option("--fixture", fixture, "named example system");
        cmd->add_option("--dag", dag_file, "graph text file with the true system");
        cmd->add_option("--facts", facts_file, "replay a recorded fact log instead of querying the system");
        cmd->add_option("--max-cond", cfg.max_cond, "largest conditioning set searched, -1 for no cap")
            ->capture_default_str();
        cmd->add_flag("--batch-closure", cfg.batch_closure, "close the statement store once at the end");
        cmd->add_flag("--strict-blocking", cfg.strict_blocking, "re-verify blocking-node evidence against the system");
        cmd->add_flag("--keep-wide-disjunctions", cfg.keep_wide_disjunctions,
                      "keep derived disjunctions with more than two node targets");
    }

    loci::LociResult run_statements(const loci::DagOracle& oracle) const {
        if (facts_file.empty()) return loci::run_loci(oracle, cfg);
        auto stream = loci::parse_ci_facts(slurp(facts_file), oracle.labels());
        return loci::run_loci_on_facts(oracle.labels(), stream, cfg, &oracle);
    }
};

std::string statements_report(const loci::LociResult& r, const std::vector<std::string>& labels) {
    std::ostringstream out;
    out << "== statement engine ==\n";
    put_block(out, loci::format_mixed(r.pag));
    out << "-- facts --\n";
    put_block(out, loci::format_ci_facts(r.facts, labels));
    out << "-- statements --\n";
    put_block(out, r.statements.statement_log());
    if (!r.blocking_log.empty()) {
        out << "-- blocking --\n";
        for (const auto& line : r.blocking_log) out << line << '\n';
    }
    for (const auto& line : r.strict_notes) out << "note: " << line << '\n';
    return out.str();
}

std::string rules_report(const loci::FciResult& r) {
    std::ostringstream out;
    out << "== orientation rules ==\n";
    put_block(out, loci::format_mixed(r.pag));
    if (!r.rule_counts.empty()) {
        out << "-- rule firings --\n";
        for (const auto& [rule, count] : r.rule_counts) out << rule << " x" << count << '\n';
    }
    return out.str();
}

int cmd_gen(std::uint64_t seed, loci::RandomDagSpec spec, const std::string& out_path) {
    if (spec.n_observed + spec.n_latent + spec.n_selection > 60)
        throw std::invalid_argument("at most 60 nodes in total");
    emit(loci::format_dag(loci::random_dag(spec, seed)), out_path);
    return 0;
}

int cmd_run(const EngineOpts& eng, const std::string& algo, std::optional<unsigned long long> seed, bool json,
            const std::string& out_path) {
    if (!eng.facts_file.empty() && algo != "loci")
        throw CLI::ValidationError("--facts", "fact replay drives the statement engine only; use --algo loci");
    loci::CausalDag dag = load_system(eng.fixture, eng.dag_file);
    loci::DagOracle oracle(dag);

    std::optional<loci::LociResult> lr;
    std::optional<loci::FciResult> fr;
    if (algo != "fci") lr = eng.run_statements(oracle);
    if (algo != "loci") {
        loci::FciConfig fcfg;
        fcfg.max_cond = eng.cfg.max_cond;
        fcfg.shuffle_seed = seed;
        fr = loci::run_fci(oracle, fcfg);
    }
    const bool agree = !lr || !fr || lr->pag == fr->pag;

    if (json) {
        nlohmann::json j;
        j["dag"] = loci::to_json(dag);
        if (lr) j["loci"] = loci::to_json(*lr);
        if (fr) j["fci"] = loci::to_json(*fr);
        if (lr && fr) j["agree"] = agree;
        emit(j.dump(2) + "\n", out_path);
    } else {
        std::ostringstream out;
        if (lr) out << statements_report(*lr, oracle.labels());
        if (fr) out << rules_report(*fr);
        if (lr && fr) out << (agree ? "engines agree\n" : "ENGINES DISAGREE\n");
        emit(out.str(), out_path);
    }
    return agree ? 0 : kExitDisagree;
}

int cmd_compare(loci::CampaignSpec spec, bool quiet, const std::string& out_path) {
    loci::CampaignResult res = loci::run_campaign(spec, quiet ? nullptr : &std::cerr);
    std::ostringstream out;
    for (const auto& line : res.report) out << line << '\n';
    emit(out.str(), out_path);
    return res.ok() ? 0 : kExitDisagree;
}

int cmd_trace(const EngineOpts& eng, const std::string& atom) {
    loci::CausalDag dag = load_system(eng.fixture, eng.dag_file);
    loci::DagOracle oracle(dag);
    const auto& labels = oracle.labels();

    const auto arrow = atom.find("=>");
    if (arrow == std::string::npos)
        throw CLI::ValidationError("atom", "expected 'SOURCE => TARGET' where TARGET may be S");
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t");
        return s.substr(a, b - a + 1);
    };
    const std::string src_label = trim(atom.substr(0, arrow));
    const std::string tgt_label = trim(atom.substr(arrow + 2));
    auto index_of = [&](const std::string& name) {
        const auto it = std::find(labels.begin(), labels.end(), name);
        if (it == labels.end()) throw CLI::ValidationError("atom", "unknown variable '" + name + "'");
        return static_cast<loci::NodeId>(it - labels.begin());
    };
    const loci::NodeId src = index_of(src_label);
    loci::NodeId tgt = loci::kSelectionTarget;
    if (tgt_label != "S" || std::find(labels.begin(), labels.end(), "S") != labels.end()) tgt = index_of(tgt_label);
    if (tgt != loci::kSelectionTarget && src == tgt)
        throw CLI::ValidationError("atom", "source and target must differ");

    loci::LociResult r = eng.run_statements(oracle);
    const loci::Status s = r.statements.query(src, tgt);
    if (s == loci::Status::Unknown) {
        std::cerr << r.statements.atom_text(src, tgt) << ": not determined by the recorded facts\n";
        for (const auto& d : r.statements.disjuncts())
            if (d.live && d.subject == src)
                std::cerr << "still open: " << r.statements.disjunct_text(d.subject, d.targets, d.selection) << '\n';
        return kExitNotFound;
    }
    std::cout << r.statements.atom_text(src, tgt) << ": "
              << (s == loci::Status::Established ? "established" : "refuted") << '\n'
              << r.statements.trace_text(r.statements.atom_trace(src, tgt));
    return 0;
}

int cmd_export(const std::string& fixture, const std::string& dag_file, const std::string& format, bool pag,
               const std::string& algo, const std::string& out_path) {
    loci::CausalDag dag = load_system(fixture, dag_file);
    if (!pag) {
        if (format == "dot") emit(loci::to_dot(dag), out_path);
        else if (format == "json") emit(loci::to_json(dag).dump(2) + "\n", out_path);
        else emit(loci::format_dag(dag), out_path);
        return 0;
    }
    loci::DagOracle oracle(dag);
    const loci::MixedGraph g = algo == "fci" ? loci::run_fci(oracle).pag : loci::run_loci(oracle).pag;
    if (format == "dot") emit(loci::to_dot(g), out_path);
    else if (format == "json") emit(loci::to_json(g).dump(2) + "\n", out_path);
    else emit(loci::format_mixed(g), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal discovery by logical inference over independence facts"};
    app.set_config("--config", "", "read options from an INI file; command line flags win");
    app.require_subcommand(1);
    // --config may appear after the subcommand name; let unmatched options
    // climb back to the main app instead of failing there.
    app.fallthrough();

    auto* gen = app.add_subcommand("gen", "generate a seeded random causal system");
    std::uint64_t gen_seed = 1;
    loci::RandomDagSpec gen_spec;
    bool gen_anywhere = false;
    std::string gen_out;
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--observed", gen_spec.n_observed, "observed variable count")->capture_default_str();
    gen->add_option("--latent", gen_spec.n_latent, "hidden confounder count")->capture_default_str();
    gen->add_option("--selection", gen_spec.n_selection, "selection variable count")->capture_default_str();
    gen->add_option("--edge-prob", gen_spec.edge_probability, "independent edge probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_flag("--selection-anywhere", gen_anywhere,
                  "allow selection variables to have children instead of forcing them to be sinks");
    gen->add_option("--out", gen_out, "write to this file instead of standard output");

    auto* run = app.add_subcommand("run", "derive the PAG of one system");
    EngineOpts run_eng;
    std::string run_algo = "both";
    std::optional<unsigned long long> run_seed;
    bool run_json = false;
    std::string run_out;
    run->add_option("--algo", run_algo, "loci, fci, or both")
        ->check(CLI::IsMember({"loci", "fci", "both"}))
        ->capture_default_str();
    run_eng.attach(run);
    run->add_option("--seed", run_seed, "shuffle the orientation-rule scan order with this seed");
    run->add_flag("--json", run_json, "emit a JSON report");
    run->add_option("--out", run_out, "write to this file instead of standard output");

    auto* compare = app.add_subcommand("compare", "run both engines over many random systems");
    loci::CampaignSpec cmp_spec;
    bool cmp_no_inv = false;
    bool cmp_quiet = false;
    std::string cmp_out;
    compare->add_option("--trials", cmp_spec.trials, "number of random systems")->capture_default_str();
    compare->add_option("--seed", cmp_spec.seed, "campaign seed")->capture_default_str();
    compare->add_option("--min-observed", cmp_spec.min_observed)->capture_default_str();
    compare->add_option("--max-observed", cmp_spec.max_observed)->capture_default_str();
    compare->add_option("--max-latent", cmp_spec.max_latent)->capture_default_str();
    compare->add_option("--max-selection", cmp_spec.max_selection)->capture_default_str();
    compare->add_option("--edge-probs", cmp_spec.edge_probabilities, "edge probabilities cycled across trials")
        ->delimiter(',');
    compare->add_flag("--no-invariants", cmp_no_inv, "skip the equivalence-class mark check on small systems");
    compare->add_option("--invariant-max-observed", cmp_spec.invariant_max_observed,
                        "mark check only on systems up to this many observed variables")
        ->capture_default_str();
    compare->add_flag("--timings", cmp_spec.timings, "append per-trial wall time to the report");
    compare->add_flag("--quiet", cmp_quiet, "no progress lines on standard error");
    compare->add_option("--out", cmp_out, "write the report to this file instead of standard output");

    auto* trace = app.add_subcommand("trace", "show the derivation of one causal atom");
    EngineOpts trace_eng;
    std::string trace_atom;
    trace->add_option("atom", trace_atom, "atom to trace, e.g. 'X => Y' or 'X => S'")->required();
    trace_eng.attach(trace);

    auto* exp = app.add_subcommand("export", "convert a system or its PAG to another format");
    std::string exp_fixture, exp_dag, exp_format, exp_algo = "loci", exp_out;
    bool exp_pag = false;
    exp->add_option("--fixture", exp_fixture, "named example system");
    exp->add_option("--dag", exp_dag, "graph text file with the true system");
    exp->add_option("--format", exp_format, "dot, json, or native")
        ->check(CLI::IsMember({"dot", "json", "native"}))
        ->required();
    exp->add_flag("--pag", exp_pag, "export the derived PAG instead of the input graph");
    exp->add_option("--algo", exp_algo, "engine used with --pag")
        ->check(CLI::IsMember({"loci", "fci"}))
        ->capture_default_str();
    exp->add_option("--out", exp_out, "write to this file instead of standard output");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) {
            gen_spec.selection_sinks = !gen_anywhere;
            return cmd_gen(gen_seed, gen_spec, gen_out);
        }
        if (run->parsed()) return cmd_run(run_eng, run_algo, run_seed, run_json, run_out);
        if (compare->parsed()) {
            cmp_spec.check_invariant_marks = !cmp_no_inv;
            return cmd_compare(cmp_spec, cmp_quiet, cmp_out);
        }
        if (trace->parsed()) return cmd_trace(trace_eng, trace_atom);
        if (exp->parsed()) return cmd_export(exp_fixture, exp_dag, exp_format, exp_pag, exp_algo, exp_out);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    } catch (const loci::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const loci::InconsistencyError& e) {
        std::cerr << "inconsistent: " << e.what() << '\n';
        return kExitInconsistent;
    } catch (const NotFoundError& e) {
        std::cerr << e.what() << '\n';
        return kExitNotFound;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
