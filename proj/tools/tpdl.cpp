// tpdl -- command-line front end for the PDL/TPDL toolkit.
//
// Subcommands:
//   decide        run the proof-search game on a box-forward sequent and emit
//                 either a checked cyclic proof or a checked countermodel
//   check-proof   validate a proof file against one of the three systems
//   model-check   evaluate a sequent at every state of a model file
//   closure       print the Fischer-Ladner closure of a formula
//   countermodel  exhaustive countermodel search up to a state bound
//   canonical     build the canonical countermodel over closure divisions
//
// Exit codes: 0 positive verdict (proved / accepted / holds / model built),
// 1 negative verdict (refuted / rejected / fails / no countermodel exists),
// 2 inconclusive (budget or bound too small), 3 usage, parse, or internal
// errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tpdl/canonical.hpp"
#include "tpdl/cyclic.hpp"
#include "tpdl/game.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
    std::cout << "written to " << out_path << "\n";
}

int count_nodes(const tpdl::NodePtr& n) {
    int total = 1;
    for (const auto& c : n->children) total += count_nodes(c);
    return total;
}

std::string model_with_failure_comment(const tpdl::KripkeModel& m, int state) {
    std::string text = "# fails at state " + m.states[static_cast<size_t>(state)] + "\n";
    return text + tpdl::render_model(m);
}

int run_decide(const std::string& sequent_text, uint64_t budget, const std::string& out_path) {
    tpdl::Sequent goal = tpdl::parse_sequent(sequent_text);
    tpdl::Decision d = tpdl::decide(goal, budget);
    switch (d.verdict) {
        case tpdl::Verdict::Proved:
            std::cout << "PROVED: " << tpdl::render_sequent(goal) << "  ("
                      << count_nodes(d.proof.root) << " proof nodes, " << d.positions_visited
                      << " positions visited)\n";
            write_output(out_path, tpdl::render_proof_text(d.proof));
            return 0;
        case tpdl::Verdict::Refuted:
            std::cout << "REFUTED: " << tpdl::render_sequent(goal) << "  ("
                      << d.model.size() << " states, " << d.positions_visited
                      << " positions visited)\n";
            write_output(out_path, model_with_failure_comment(d.model, d.model_state));
            return 1;
        default:
            std::cout << "INCONCLUSIVE: budget exhausted after " << d.positions_visited
                      << " positions\n";
            return 2;
    }
}

int run_check_proof(const std::string& path, const std::string& system_name) {
    tpdl::System sys = tpdl::system_from_string(system_name);
    tpdl::PreProof proof = tpdl::parse_proof_text(read_file(path));
    tpdl::CheckResult res = tpdl::check_cyclic_proof(sys, proof);
    if (!res) {
        std::cout << "REJECTED: " << res.error << "\n";
        return 1;
    }
    std::cout << "ACCEPTED: " << tpdl::to_string(sys) << " proof of "
              << tpdl::render_sequent(proof.root->seq) << "  (" << count_nodes(proof.root)
              << " nodes)\n";
    return 0;
}

int run_model_check(const std::string& model_path, const std::string& sequent_text) {
    tpdl::KripkeModel m = tpdl::parse_model(read_file(model_path));
    tpdl::Sequent s = tpdl::parse_sequent(sequent_text);
    tpdl::ModelChecker mc(m);
    int failures = 0;
    for (int w = 0; w < m.size(); ++w) {
        bool ok = mc.sequent_holds_at(w, s);
        if (!ok) ++failures;
        std::cout << m.states[static_cast<size_t>(w)] << ": " << (ok ? "holds" : "FAILS") << "\n";
    }
    if (failures == 0) {
        std::cout << "sequent holds at all " << m.size() << " states\n";
        return 0;
    }
    std::cout << "sequent fails at " << failures << " of " << m.size() << " states\n";
    return 1;
}

int run_closure(const std::string& formula_text) {
    const tpdl::Formula* f = tpdl::parse_formula(formula_text);
    tpdl::FormulaSet closure = tpdl::fl(f);
    std::cout << "formula: " << tpdl::render(f) << "\n";
    std::cout << "length: " << tpdl::length(f) << "\n";
    std::cout << "closure (" << closure.size() << " formulas):\n";
    for (const tpdl::Formula* g : closure) std::cout << "  " << tpdl::render(g) << "\n";
    return 0;
}

int run_countermodel(const std::string& sequent_text, int bound, uint64_t budget,
                     const std::string& out_path) {
    tpdl::Sequent s = tpdl::parse_sequent(sequent_text);
    tpdl::CountermodelSearch found = tpdl::find_countermodel_bounded(s, bound, budget);
    switch (found.status) {
        case tpdl::CountermodelSearch::Status::Found:
            std::cout << "COUNTERMODEL: " << tpdl::render_sequent(s) << "  ("
                      << found.model.size() << " states, " << found.models_checked
                      << " models checked)\n";
            write_output(out_path, model_with_failure_comment(found.model, found.state));
            return 1;
        case tpdl::CountermodelSearch::Status::BudgetExhausted:
            std::cout << "INCONCLUSIVE: budget exhausted after " << found.models_checked
                      << " models\n";
            return 2;
        default: break;
    }
    // None within the bound.  That is a validity certificate only once the
    // bound covers the small-model threshold 2^|closure|.
    size_t closure_size = tpdl::fl_set(tpdl::sequent_formulas(s)).size();
    bool complete = closure_size < 31 && bound >= (1 << closure_size);
    std::cout << "no countermodel with at most " << bound << " states  ("
              << found.models_checked << " models checked)\n";
    if (complete) {
        std::cout << "VALID: bound covers the small-model threshold 2^" << closure_size << "\n";
        return 0;
    }
    std::cout << "INCONCLUSIVE: small-model threshold is 2^" << closure_size << "\n";
    return 2;
}

int run_canonical(const std::string& sequent_text, int bound, uint64_t budget, int max_closure,
                  const std::string& out_path) {
    tpdl::Sequent s = tpdl::parse_sequent(sequent_text);
    size_t closure_size = tpdl::fl_set(tpdl::sequent_formulas(s)).size();
    if (closure_size > static_cast<size_t>(max_closure)) {
        std::cerr << "error: closure has " << closure_size << " formulas, above --max-closure "
                  << max_closure << " (" << (size_t{1} << closure_size)
                  << " divisions); raise the limit to proceed\n";
        return 3;
    }
    tpdl::ValidityOracle oracle(bound, budget);
    std::optional<tpdl::CanonicalModel> built;
    try {
        built = tpdl::canonical_counter_model(s, oracle);
    } catch (const std::runtime_error& e) {
        std::cerr << "self-check failed: " << e.what() << "\n";
        return 2;
    }
    if (!built) {
        std::cout << "VALID within bound " << bound << ": no canonical countermodel\n";
        return 1;
    }
    std::ostringstream text;
    text << "# canonical countermodel for: " << tpdl::render_sequent(s) << "\n";
    text << "# saturated: " << tpdl::render_sequent(built->saturated) << "\n";
    for (size_t i = 0; i < built->state_sequents.size(); ++i)
        text << "# " << built->model.states[i] << ": "
             << tpdl::render_sequent(built->state_sequents[i]) << "\n";
    text << "# fails at state " << built->model.states[static_cast<size_t>(built->designated)]
         << "\n";
    text << tpdl::render_model(built->model);
    std::cout << "CANONICAL: " << built->model.size() << " states over a closure of "
              << closure_size << " formulas  (" << oracle.queries_made()
              << " oracle queries)\n";
    write_output(out_path, text.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision procedure and proof toolkit for propositional dynamic logic"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text"}))
        ->capture_default_str();

    std::string sequent_text, formula_text, path, out_path, system_name = "cgpdl";
    uint64_t budget = 10'000'000;
    int bound = 3, max_closure = 4;

    CLI::App* decide = app.add_subcommand(
        "decide", "decide a box-forward sequent; emits a cyclic proof or a countermodel");
    decide->add_option("sequent", sequent_text, "sequent, e.g. \"p, [a]p |- p\"")->required();
    decide->add_option("--budget", budget, "max game positions to visit")->capture_default_str();
    decide->add_option("--out", out_path, "write the proof or model to this file");

    CLI::App* check = app.add_subcommand("check-proof", "validate a proof file");
    check->add_option("file", path, "proof file")->required();
    check->add_option("--system", system_name, "proof system: gtpdl, cgtpdl, or cgpdl")
        ->capture_default_str();

    CLI::App* mcheck = app.add_subcommand("model-check", "evaluate a sequent on a model file");
    mcheck->add_option("model", path, "model file")->required();
    mcheck->add_option("sequent", sequent_text, "sequent to evaluate")->required();

    CLI::App* closure = app.add_subcommand("closure", "print the Fischer-Ladner closure");
    closure->add_option("formula", formula_text, "formula, e.g. \"[a*]p -> p\"")->required();

    CLI::App* counter = app.add_subcommand(
        "countermodel", "exhaustive countermodel search up to a state bound");
    counter->add_option("sequent", sequent_text, "sequent to refute")->required();
    counter->add_option("--bound", bound, "max states (1..12)")->capture_default_str();
    counter->add_option("--budget", budget, "max models to check (0 = unlimited)")
        ->capture_default_str();
    counter->add_option("--out", out_path, "write the model to this file");

    CLI::App* canonical = app.add_subcommand(
        "canonical", "build the canonical countermodel over closure divisions");
    canonical->add_option("sequent", sequent_text, "sequent to refute")->required();
    canonical->add_option("--bound", bound, "oracle countermodel bound")->capture_default_str();
    canonical->add_option("--budget", budget, "oracle budget per query (0 = unlimited)")
        ->capture_default_str();
    canonical->add_option("--max-closure", max_closure, "largest closure to expand into divisions")
        ->capture_default_str();
    canonical->add_option("--out", out_path, "write the model to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (app.got_subcommand(decide)) return run_decide(sequent_text, budget, out_path);
        if (app.got_subcommand(check)) return run_check_proof(path, system_name);
        if (app.got_subcommand(mcheck)) return run_model_check(path, sequent_text);
        if (app.got_subcommand(closure)) return run_closure(formula_text);
        if (app.got_subcommand(counter))
            return run_countermodel(sequent_text, bound, budget, out_path);
        if (app.got_subcommand(canonical))
            return run_canonical(sequent_text, bound, budget, max_closure, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
