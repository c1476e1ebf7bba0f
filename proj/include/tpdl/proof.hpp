// proof.hpp -- sequent-calculus kernel: rule instances, proof trees, derived
// rules, and the proof file format.
//
// Three systems share one rule vocabulary:
//
//   GTPDL   finite proofs over the full language (forward and backward boxes),
//           with the StarR induction rule.
//   CGTPDL  StarR replaced by the star-unfolding rule Cs; proofs may be
//           cyclic (buds tied back to interior companion nodes).
//   CGPDL   forward-only fragment of CGTPDL plus the K rule; every sequent
//           in a CGPDL proof must be box-forward (no [-pi]).
//
// Sequents are read as sets, so rules apply with implicit contraction: a
// left-principal rule may either consume its principal formula or keep a
// copy in the premise context, and the checker accepts both readings.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tpdl/sequent.hpp"

namespace tpdl {

enum class System { GTPDL, CGTPDL, CGPDL };

enum class RuleName {
    Ax,
    Bot,
    ImpL,
    ImpR,
    Wk,
    Cut,
    BoxModal,
    RevBoxModal,
    SeqL,
    SeqR,
    ChoiceL,
    ChoiceR,
    StarL,
    StarR,
    Cs,
    TestL,
    TestR,
    K,
};

const char* to_string(RuleName r);
const char* to_string(System s);
RuleName rule_from_string(const std::string& name);    // throws std::invalid_argument
System system_from_string(const std::string& name);    // throws std::invalid_argument

// Whether a rule may appear in a proof of the given system.
bool rule_in_system(System sys, RuleName r);

// How many premises an instance of the rule has.
int premise_count(RuleName r);

struct CheckResult {
    bool ok = true;
    std::string error;

    static CheckResult failure(std::string msg) { return {false, std::move(msg)}; }
    explicit operator bool() const { return ok; }
};

// The data a successful rule check pins down, enough to drive trace
// construction: which rule fired, on which principal formula, and (for Cut)
// the cut formula.  principal is null for Ax, Bot, Wk and Cut.
struct ResolvedRule {
    RuleName rule = RuleName::Ax;
    const Formula* principal = nullptr;
    const Formula* cut_formula = nullptr;
};

// Checks one rule application: `premises` are the premise sequents in rule
// order (for ImpL/TestL the consequent-extending premise first, for ChoiceR
// the pi0 premise first, for Cs the base premise first, for Cut the premise
// proving the cut formula first).  `principal` / `cut` pin the instance when
// several formulas could have been principal; when null the checker tries
// candidates in schedule order and accepts the first that fits.
CheckResult check_rule_instance(System sys, RuleName rule, const Sequent& conclusion,
                                const std::vector<Sequent>& premises,
                                const Formula* principal = nullptr,
                                const Formula* cut = nullptr,
                                ResolvedRule* resolved = nullptr);

// Rules that could fire on a sequent (some instance exists), in declaration
// order, restricted to the system's rule set.
std::vector<RuleName> applicable_rule_schemas(System sys, const Sequent& s);

// ---------------------------------------------------------------------------
// Proof trees.

struct DerivationNode;
using NodePtr = std::shared_ptr<DerivationNode>;

struct DerivationNode {
    Sequent seq;
    RuleName rule = RuleName::Ax;
    bool is_bud = false;
    std::string bud_id;                   // set iff is_bud
    const Formula* principal = nullptr;   // optional annotation
    const Formula* cut_formula = nullptr; // optional annotation, Cut only
    std::vector<NodePtr> children;
};

NodePtr mk_node(RuleName rule, Sequent seq, std::vector<NodePtr> children = {},
                const Formula* principal = nullptr, const Formula* cut = nullptr);
NodePtr mk_bud(std::string id, Sequent seq);

// A proof with its back-edges.  Each bud id maps to the child-index path
// (from the root; empty path = root itself) of its companion node, which
// must be an interior node carrying the same sequent.  A proof of GTPDL has
// no buds; for CGTPDL/CGPDL this structure is a pre-proof, and becomes a
// proof once the global trace condition holds (see cyclic.hpp).
struct PreProof {
    NodePtr root;
    std::map<std::string, std::vector<int>> companions;
};

// Structural soundness + every rule instance checks in `sys`.  Does NOT
// check the global trace condition; check_cyclic_proof does.
CheckResult check_proof(System sys, const PreProof& proof);

// Locates a node by child-index path; throws std::out_of_range on a bad path.
const DerivationNode* node_at_path(const PreProof& proof, const std::vector<int>& path);

// ---------------------------------------------------------------------------
// Characteristic formulas and sequent divisions.

// Left-associated conjunction/disjunction over a list in schedule order.
// big_and({}) is true (false -> false), big_or({}) is false; singletons fold
// to the element itself.
const Formula* big_and(const std::vector<const Formula*>& fs);
const Formula* big_or(const std::vector<const Formula*>& fs);

// /\ant -> \/con.
const Formula* char_wff(const Sequent& s);

// All 2^|xs| ways to split xs into a sequent (bit i of the enumeration mask
// set = xs[i] goes to the antecedent), masks ascending.  xs must be in
// schedule order; at most 25 formulas.
std::vector<Sequent> divisions(const FormulaSet& xs);

// ---------------------------------------------------------------------------
// Derived rules.  Each constructor assembles a small tree of primitive rule
// applications around the given subproof(s) and returns its root; the result
// always passes check_proof for any system containing the primitives used
// (these use only ImpL, ImpR, Wk, Bot, Cut, StarL, ChoiceL).  Premises are
// absorbed by weakening, so the subproofs' sequents need not match the
// schematic contexts exactly -- smaller sequents are fine.

// Wraps `premise` in a weakening step up to `target`; premise->seq must be
// componentwise included in target.
NodePtr wk_to(const Sequent& target, NodePtr premise);

// d : G |- phi, D          =>   G, ~phi |- D
NodePtr derived_not_l(const Formula* phi, NodePtr d);
// d : G, phi |- D          =>   G |- ~phi, D
NodePtr derived_not_r(const Formula* phi, NodePtr d);
// d0 : G0, phi |- D0  and  d1 : G1, psi |- D1
//                          =>   G0, G1, phi|psi |- D0, D1
NodePtr derived_or_l(const Formula* phi, const Formula* psi, NodePtr d0, NodePtr d1);
// d : G |- phi, psi, D     =>   G |- phi|psi, D
NodePtr derived_or_r(const Formula* phi, const Formula* psi, NodePtr d);
// d : G, phi, psi |- D     =>   G, phi&psi |- D
NodePtr derived_and_l(const Formula* phi, const Formula* psi, NodePtr d);
// d0 : G0 |- phi, D0  and  d1 : G1 |- psi, D1
//                          =>   G0, G1 |- phi&psi, D0, D1
NodePtr derived_and_r(const Formula* phi, const Formula* psi, NodePtr d0, NodePtr d1);
// d : G, psi |- D          =>   G, [pi*]psi |- D
NodePtr derived_star_l_base(const Program* pi, const Formula* psi, NodePtr d);
// d : G, [pi][pi*]psi |- D =>   G, [pi*]psi |- D
NodePtr derived_star_l_step(const Program* pi, const Formula* psi, NodePtr d);
// d : G, [pi_i]psi |- D    =>   G, [pi0+pi1]psi |- D   (choice_box = [pi0+pi1]psi)
NodePtr derived_choice_l(const Formula* choice_box, NodePtr d);
// d0 : G0 |- chi, D0  and  d1 : G1, chi |- D1
//                          =>   G0, G1 |- D0, D1
NodePtr derived_cut(const Formula* chi, NodePtr d0, NodePtr d1);

// Folded forms over lists in schedule order (lambda/mu may be empty).
// ds[i] : G_i |- lambda_i, D_i   =>   UG_i |- /\lambda, UD_i
NodePtr derived_big_and_r(const std::vector<const Formula*>& lambda,
                          const std::vector<NodePtr>& ds);
// d : G, lambda_1, ..., lambda_k |- D   =>   G, /\lambda |- D
NodePtr derived_big_and_l(const std::vector<const Formula*>& lambda, NodePtr d);
// ds[i] : G_i, mu_i |- D_i       =>   UG_i, \/mu |- UD_i
NodePtr derived_big_or_l(const std::vector<const Formula*>& mu,
                         const std::vector<NodePtr>& ds);
// d : G |- mu_1, ..., mu_k, D    =>   G |- \/mu, D
NodePtr derived_big_or_r(const std::vector<const Formula*>& mu, NodePtr d);

// ---------------------------------------------------------------------------
// Proof files.  One s-expression per proof:
//
//   (node <Rule> [principal: <formula>] [cut: <formula>] (seq <sequent>)
//     <child> ...)
//   (bud <id> (seq <sequent>))
//
// followed by one `(companion <bud-id> <child-index> ...)` per bud (an empty
// index list names the root).  Formula annotations use the parenthesized
// rendering, sequents the `G |- D` rendering; `#` starts a comment that runs
// to the end of the line.
PreProof parse_proof_text(const std::string& text);
std::string render_proof_text(const PreProof& proof);

}  // namespace tpdl
