// End-to-end tests of the command-line tool: spawn the built binary, check
// exit codes and the stable lines of its output.  TPDL_CLI_PATH and
// TPDL_DATA_DIR come from the build.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "tpdl/kripke.hpp"
#include "tpdl/proof.hpp"

namespace {

struct RunResult {
    int code = -1;
    std::string out;  // stdout and stderr interleaved

    bool contains(const std::string& needle) const { return out.find(needle) != std::string::npos; }
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(TPDL_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

std::string data(const std::string& name) { return std::string(TPDL_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("usage errors exit 3, help exits 0") {
    CHECK(run("").code == 3);
    CHECK(run("--no-such-flag").code == 3);
    CHECK(run("decide").code == 3);          // missing sequent
    CHECK(run("frobnicate x").code == 3);    // unknown subcommand
    CHECK(run("--format xml closure p").code == 3);
    RunResult help = run("--help");
    CHECK(help.code == 0);
    CHECK(help.contains("decide"));
    CHECK(help.contains("check-proof"));
}

TEST_CASE("decide: proved, refuted, inconclusive") {
    RunResult proved = run("decide " + q("p, [a][a*]p |- [a*]p"));
    CHECK(proved.code == 0);
    CHECK(proved.contains("PROVED: p, [a][a*]p |- [a*]p"));
    CHECK(proved.contains("(node Cs"));

    RunResult refuted = run("decide " + q("|- [?p*]p"));
    CHECK(refuted.code == 1);
    CHECK(refuted.contains("REFUTED: |- [?p*]p"));
    CHECK(refuted.contains("# fails at state w1"));
    CHECK(refuted.contains("states: w1"));

    RunResult out_of_gas = run("decide --budget 2 " + q("p |- [?p*]p"));
    CHECK(out_of_gas.code == 2);
    CHECK(out_of_gas.contains("INCONCLUSIVE"));

    CHECK(run("decide " + q("|- [-a]p")).code == 3);   // backward box
    CHECK(run("decide " + q("p |-|- q")).code == 3);   // parse error
}

TEST_CASE("decide --out writes the artifact") {
    std::string path = "cli_decide_out.tmp";
    RunResult r = run("decide --out " + path + " " + q("p |- p"));
    CHECK(r.code == 0);
    CHECK(r.contains("written to " + path));
    std::string text = slurp(path);
    CHECK(text.rfind("(node", 0) == 0);
    tpdl::PreProof proof = tpdl::parse_proof_text(text);  // round-trips
    CHECK(tpdl::render_sequent(proof.root->seq) == "p |- p");
    std::remove(path.c_str());
}

TEST_CASE("check-proof accepts the library of worked proofs") {
    struct Row {
        const char* file;
        const char* system;
        int code;
    };
    const Row rows[] = {
        {"gtpdl_induction.proof", "gtpdl", 0},
        {"gtpdl_induction.proof", "cgpdl", 1},   // StarR is not a cyclic-system rule
        {"gtpdl_rev_diamond.proof", "gtpdl", 0},
        {"gtpdl_rev_diamond.proof", "cgtpdl", 0},
        {"gtpdl_cut_rev.proof", "gtpdl", 0},
        {"gtpdl_cut_rev.proof", "cgtpdl", 0},
        {"gtpdl_cut_star.proof", "gtpdl", 0},
        {"gtpdl_cut_star.proof", "cgtpdl", 1},
        {"cgtpdl_star_unfold.proof", "cgtpdl", 0},
        {"cgtpdl_star_unfold.proof", "gtpdl", 1},  // buds need the cyclic reading
        {"cgtpdl_star_unfold.proof", "cgpdl", 1},  // BoxModal is not forward-only
        {"cgpdl_star_loop.proof", "cgpdl", 0},
        {"cgpdl_star_loop.proof", "cgtpdl", 1},    // K is the forward-only box rule
    };
    for (const Row& row : rows) {
        CAPTURE(row.file); CAPTURE(row.system);
        RunResult r = run("check-proof --system " + std::string(row.system) + " " +
                          q(data(row.file)));
        CHECK(r.code == row.code);
        CHECK(r.contains(row.code == 0 ? "ACCEPTED" : "REJECTED"));
    }

    // Default system is the forward-only cyclic one.
    CHECK(run("check-proof " + q(data("cgpdl_star_loop.proof"))).code == 0);

    RunResult loop = run("check-proof " + q(data("cgpdl_empty_wk_loop.proof")));
    CHECK(loop.code == 1);
    CHECK(loop.contains("REJECTED"));
    CHECK(loop.contains("trace"));

    CHECK(run("check-proof --system g4ip " + q(data("cgpdl_star_loop.proof"))).code == 3);
    CHECK(run("check-proof /no/such/file.proof").code == 3);
}

TEST_CASE("model-check reports per-state verdicts") {
    RunResult all = run("model-check " + q(data("chain.model")) + " " + q("|- [a]p"));
    CHECK(all.code == 0);
    CHECK(all.contains("w1: holds"));
    CHECK(all.contains("w3: holds"));
    CHECK(all.contains("holds at all 3 states"));

    RunResult some = run("model-check " + q(data("chain.model")) + " " + q("|- p"));
    CHECK(some.code == 1);
    CHECK(some.contains("w1: FAILS"));
    CHECK(some.contains("w2: holds"));
    CHECK(some.contains("fails at 1 of 3 states"));

    // Backward boxes look along incoming edges.
    RunResult rev = run("model-check " + q(data("chain.model")) + " " + q("|- [-a]p"));
    CHECK(rev.code == 1);
    CHECK(rev.contains("w1: holds"));   // no predecessors
    CHECK(rev.contains("w2: FAILS"));   // w1 does not satisfy p
    CHECK(rev.contains("w3: holds"));

    RunResult star = run("model-check " + q(data("loop.model")) + " " + q("|- [(a;b)*]p"));
    CHECK(star.code == 0);
    CHECK(star.contains("holds at all 1 states"));

    CHECK(run("model-check /no/such.model " + q("|- p")).code == 3);
    CHECK(run("model-check " + q(data("chain.model")) + " " + q("|- [")).code == 3);
}

TEST_CASE("closure lists the Fischer-Ladner closure in schedule order") {
    RunResult r = run("closure " + q("[a*]p"));
    CHECK(r.code == 0);
    CHECK(r.contains("formula: [a*]p"));
    CHECK(r.contains("length: 3"));
    CHECK(r.contains("closure (3 formulas):"));
    // Shortest first.
    CHECK(r.out.find("  p\n") < r.out.find("  [a*]p\n"));
    CHECK(r.out.find("  [a*]p\n") < r.out.find("  [a][a*]p\n"));

    CHECK(run("closure " + q("p ->")).code == 3);
}

TEST_CASE("countermodel search: found, valid, inconclusive") {
    RunResult found = run("countermodel " + q("p |- q"));
    CHECK(found.code == 1);
    CHECK(found.contains("COUNTERMODEL: p |- q  (1 states"));
    CHECK(found.contains("# fails at state w1"));

    // Closure {p} has threshold 2^1, so bound 3 certifies validity.
    RunResult valid = run("countermodel " + q("p |- p"));
    CHECK(valid.code == 0);
    CHECK(valid.contains("no countermodel with at most 3 states"));
    CHECK(valid.contains("VALID"));

    // Closure {p, q} needs bound 4; the default 3 cannot certify.
    RunResult shy = run("countermodel " + q("p, q |- p"));
    CHECK(shy.code == 2);
    CHECK(shy.contains("INCONCLUSIVE: small-model threshold is 2^2"));
    RunResult enough = run("countermodel --bound 4 " + q("p, q |- p"));
    CHECK(enough.code == 0);
    CHECK(enough.contains("VALID"));

    RunResult starve = run("countermodel --budget 1 " + q("p |- p"));
    CHECK(starve.code == 2);
    CHECK(starve.contains("INCONCLUSIVE: budget exhausted after 1 models"));

    CHECK(run("countermodel --bound 0 " + q("p |- q")).code == 3);
    CHECK(run("countermodel --bound 13 " + q("p |- q")).code == 3);
}

TEST_CASE("countermodel --out emits a loadable model file") {
    std::string path = "cli_counter_out.tmp";
    RunResult r = run("countermodel --out " + path + " " + q("|- [a*]p"));
    CHECK(r.code == 1);
    std::string text = slurp(path);
    CHECK(text.rfind("# fails at state ", 0) == 0);
    tpdl::KripkeModel m = tpdl::parse_model(text);
    CHECK(m.size() >= 1);
    std::remove(path.c_str());
}

TEST_CASE("canonical builds, certifies validity, and guards its blow-up") {
    RunResult built = run("canonical " + q("|- [a*]p"));
    CHECK(built.code == 0);
    CHECK(built.contains("CANONICAL: 4 states over a closure of 3 formulas"));
    CHECK(built.contains("# saturated: |- p, [a*]p, [a][a*]p"));
    CHECK(built.contains("# w1: |- p, [a*]p, [a][a*]p"));
    CHECK(built.contains("# fails at state w1"));
    CHECK(built.contains("states: w1 w2 w3 w4"));

    RunResult valid = run("canonical " + q("p |- p"));
    CHECK(valid.code == 1);
    CHECK(valid.contains("VALID within bound 3"));

    RunResult big = run("canonical " + q("|- [a;b][a;b]p"));
    CHECK(big.code == 3);
    CHECK(big.contains("closure has 7 formulas"));
    CHECK(big.contains("--max-closure"));

    RunResult starved = run("canonical --budget 1 " + q("p |- q"));
    CHECK(starved.code == 2);
    CHECK(starved.contains("self-check failed"));
}

TEST_CASE("canonical --out round-trips through the model parser") {
    std::string path = "cli_canonical_out.tmp";
    RunResult r = run("canonical --out " + path + " " + q("|- [a*]p"));
    CHECK(r.code == 0);
    tpdl::KripkeModel m = tpdl::parse_model(slurp(path));
    CHECK(m.size() == 4);
    CHECK(m.edges.count("a") == 1);
    std::remove(path.c_str());
}
