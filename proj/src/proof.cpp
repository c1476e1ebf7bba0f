// proof.cpp -- rule instance checking, proof tree validation, derived rules,
// characteristic formulas, and the proof file reader/writer.

#include "tpdl/proof.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "tpdl/closure.hpp"

namespace tpdl {

namespace {

struct RuleInfo {
    RuleName rule;
    const char* name;
    int premises;
    bool has_principal;
};

constexpr RuleInfo kRules[] = {
    {RuleName::Ax, "Ax", 0, false},
    {RuleName::Bot, "Bot", 0, false},
    {RuleName::ImpL, "ImpL", 2, true},
    {RuleName::ImpR, "ImpR", 1, true},
    {RuleName::Wk, "Wk", 1, false},
    {RuleName::Cut, "Cut", 2, false},
    {RuleName::BoxModal, "BoxModal", 1, true},
    {RuleName::RevBoxModal, "RevBoxModal", 1, true},
    {RuleName::SeqL, "SeqL", 1, true},
    {RuleName::SeqR, "SeqR", 1, true},
    {RuleName::ChoiceL, "ChoiceL", 1, true},
    {RuleName::ChoiceR, "ChoiceR", 2, true},
    {RuleName::StarL, "StarL", 1, true},
    {RuleName::StarR, "StarR", 1, true},
    {RuleName::Cs, "Cs", 2, true},
    {RuleName::TestL, "TestL", 2, true},
    {RuleName::TestR, "TestR", 1, true},
    {RuleName::K, "K", 1, true},
};

const RuleInfo& info(RuleName r) { return kRules[static_cast<int>(r)]; }

}  // namespace

const char* to_string(RuleName r) { return info(r).name; }

const char* to_string(System s) {
    switch (s) {
        case System::GTPDL: return "GTPDL";
        case System::CGTPDL: return "CGTPDL";
        case System::CGPDL: return "CGPDL";
    }
    return "?";
}

RuleName rule_from_string(const std::string& name) {
    for (const RuleInfo& ri : kRules)
        if (name == ri.name) return ri.rule;
    throw std::invalid_argument("unknown rule name \"" + name + "\"");
}

System system_from_string(const std::string& name) {
    std::string upper = name;
    for (char& c : upper) c = (char)std::toupper((unsigned char)c);
    for (System s : {System::GTPDL, System::CGTPDL, System::CGPDL})
        if (upper == to_string(s)) return s;
    throw std::invalid_argument("unknown proof system \"" + name + "\"");
}

bool rule_in_system(System sys, RuleName r) {
    switch (sys) {
        case System::GTPDL:
            return r != RuleName::Cs && r != RuleName::K;
        case System::CGTPDL:
            return r != RuleName::StarR && r != RuleName::K;
        case System::CGPDL:
            return r != RuleName::StarR && r != RuleName::BoxModal &&
                   r != RuleName::RevBoxModal;
    }
    return false;
}

int premise_count(RuleName r) { return info(r).premises; }

// ---------------------------------------------------------------------------
// Rule instance checking.

namespace {

bool is_implies(const Formula* f) { return f->kind == FKind::Implies; }
bool is_box(const Formula* f) { return f->kind == FKind::Box; }
bool is_revbox(const Formula* f) { return f->kind == FKind::RevBox; }
bool is_box_over(const Formula* f, PKind pk) {
    return f->kind == FKind::Box && f->prog->kind == pk;
}

// Principal candidates for a rule whose principal lives in `side`: the
// pinned formula if one was supplied (and fits), otherwise every formula of
// the right shape, in schedule order.
template <typename Pred>
std::vector<const Formula*> candidates(const FormulaSet& side, const Formula* pinned,
                                       Pred pred) {
    std::vector<const Formula*> out;
    if (pinned) {
        if (pred(pinned) && fs_contains(side, pinned)) out.push_back(pinned);
        return out;
    }
    for (const Formula* f : side)
        if (pred(f)) out.push_back(f);
    return out;
}

// The two context readings of a left principal: consumed, or kept by
// contraction.  (Same shape works on the right.)
std::vector<FormulaSet> context_options(const FormulaSet& side, const Formula* pr) {
    return {fs_erase(side, pr), side};
}

FormulaSet map_box(const Program* pi, const FormulaSet& fs, bool reverse) {
    FormulaSet out;
    out.reserve(fs.size());
    for (const Formula* f : fs)
        out.push_back(reverse ? f_revbox(pi, f) : f_box(pi, f));
    return default_schedule(out);
}

CheckResult ok_result(ResolvedRule* resolved, RuleName rule, const Formula* principal,
                      const Formula* cut) {
    if (resolved) *resolved = {rule, principal, cut};
    return {};
}

}  // namespace

CheckResult check_rule_instance(System sys, RuleName rule, const Sequent& c,
                                const std::vector<Sequent>& ps, const Formula* principal,
                                const Formula* cut, ResolvedRule* resolved) {
    const RuleInfo& ri = info(rule);
    if (!rule_in_system(sys, rule))
        return CheckResult::failure(std::string(ri.name) + " is not a rule of " +
                                    to_string(sys));
    if (static_cast<int>(ps.size()) != ri.premises)
        return CheckResult::failure(std::string(ri.name) + " takes " +
                                    std::to_string(ri.premises) + " premises, got " +
                                    std::to_string(ps.size()));
    if (principal && !ri.has_principal)
        return CheckResult::failure(std::string(ri.name) +
                                    " does not take a principal annotation");
    if (cut && rule != RuleName::Cut)
        return CheckResult::failure("only Cut takes a cut annotation");
    if (sys == System::CGPDL) {
        if (!sequent_is_pdl(c))
            return CheckResult::failure("CGPDL conclusion contains a backward box");
        for (const Sequent& p : ps)
            if (!sequent_is_pdl(p))
                return CheckResult::failure("CGPDL premise contains a backward box");
    }

    auto no_instance = [&]() {
        return CheckResult::failure(std::string("premises do not match any ") + ri.name +
                                    " instance" +
                                    (principal ? " with the given principal" : "") +
                                    " for " + render_sequent(c));
    };

    switch (rule) {
        case RuleName::Ax:
            if (fs_intersects(c.ant, c.con)) return ok_result(resolved, rule, nullptr, nullptr);
            return CheckResult::failure("Ax needs a formula on both sides of " +
                                        render_sequent(c));

        case RuleName::Bot:
            if (fs_contains(c.ant, f_false()))
                return ok_result(resolved, rule, nullptr, nullptr);
            return CheckResult::failure("Bot needs false in the antecedent of " +
                                        render_sequent(c));

        case RuleName::ImpL:
            for (const Formula* pr : candidates(c.ant, principal, is_implies))
                for (const FormulaSet& g : context_options(c.ant, pr)) {
                    Sequent p0{g, fs_insert(c.con, pr->lhs)};
                    Sequent p1{fs_insert(g, pr->rhs), c.con};
                    if (ps[0] == p0 && ps[1] == p1)
                        return ok_result(resolved, rule, pr, nullptr);
                }
            return no_instance();

        case RuleName::ImpR:
            for (const Formula* pr : candidates(c.con, principal, is_implies))
                for (const FormulaSet& d : context_options(c.con, pr)) {
                    Sequent p{fs_insert(c.ant, pr->lhs), fs_insert(d, pr->rhs)};
                    if (ps[0] == p) return ok_result(resolved, rule, pr, nullptr);
                }
            return no_instance();

        case RuleName::Wk:
            if (fs_subset(ps[0].ant, c.ant) && fs_subset(ps[0].con, c.con))
                return ok_result(resolved, rule, nullptr, nullptr);
            return CheckResult::failure("Wk premise " + render_sequent(ps[0]) +
                                        " is not included in " + render_sequent(c));

        case RuleName::Cut: {
            FormulaSet chis = cut ? fs_make({cut}) : fs_union(ps[0].con, ps[1].ant);
            for (const Formula* chi : chis)
                if (ps[0].ant == c.ant && ps[0].con == fs_insert(c.con, chi) &&
                    ps[1].ant == fs_insert(c.ant, chi) && ps[1].con == c.con)
                    return ok_result(resolved, rule, nullptr, chi);
            return CheckResult::failure(
                "premises do not match any Cut instance for " + render_sequent(c));
        }

        case RuleName::BoxModal:
        case RuleName::RevBoxModal: {
            bool rev = rule == RuleName::RevBoxModal;
            auto shape = rev ? is_revbox : is_box;
            for (const Formula* pr : candidates(c.con, principal, shape)) {
                const Program* pi = pr->prog;
                FormulaSet bodies;
                bool all_boxed = true;
                for (const Formula* a : c.ant) {
                    if (!shape(a) || a->prog != pi) {
                        all_boxed = false;
                        break;
                    }
                    bodies.push_back(a->body);
                }
                if (!all_boxed) continue;
                bodies = default_schedule(bodies);
                for (const FormulaSet& d : context_options(c.con, pr)) {
                    // Premise: bodies |- body, mirrored-box d
                    FormulaSet pcon = fs_insert(map_box(pi, d, !rev), pr->body);
                    if (ps[0].ant == bodies && ps[0].con == pcon)
                        return ok_result(resolved, rule, pr, nullptr);
                }
            }
            return no_instance();
        }

        case RuleName::SeqL:
        case RuleName::SeqR: {
            bool left = rule == RuleName::SeqL;
            const FormulaSet& side = left ? c.ant : c.con;
            auto shape = [](const Formula* f) { return is_box_over(f, PKind::Seq); };
            for (const Formula* pr : candidates(side, principal, shape)) {
                const Formula* un =
                    f_box(pr->prog->lhs, f_box(pr->prog->rhs, pr->body));
                for (const FormulaSet& ctx : context_options(side, pr)) {
                    Sequent p = left ? Sequent{fs_insert(ctx, un), c.con}
                                     : Sequent{c.ant, fs_insert(ctx, un)};
                    if (ps[0] == p) return ok_result(resolved, rule, pr, nullptr);
                }
            }
            return no_instance();
        }

        case RuleName::ChoiceL: {
            auto shape = [](const Formula* f) { return is_box_over(f, PKind::Choice); };
            for (const Formula* pr : candidates(c.ant, principal, shape)) {
                const Formula* u0 = f_box(pr->prog->lhs, pr->body);
                const Formula* u1 = f_box(pr->prog->rhs, pr->body);
                for (const FormulaSet& g : context_options(c.ant, pr)) {
                    Sequent p{fs_insert(fs_insert(g, u0), u1), c.con};
                    if (ps[0] == p) return ok_result(resolved, rule, pr, nullptr);
                }
            }
            return no_instance();
        }

        case RuleName::ChoiceR: {
            auto shape = [](const Formula* f) { return is_box_over(f, PKind::Choice); };
            for (const Formula* pr : candidates(c.con, principal, shape)) {
                const Formula* u0 = f_box(pr->prog->lhs, pr->body);
                const Formula* u1 = f_box(pr->prog->rhs, pr->body);
                for (const FormulaSet& d : context_options(c.con, pr)) {
                    Sequent p0{c.ant, fs_insert(d, u0)};
                    Sequent p1{c.ant, fs_insert(d, u1)};
                    if (ps[0] == p0 && ps[1] == p1)
                        return ok_result(resolved, rule, pr, nullptr);
                }
            }
            return no_instance();
        }

        case RuleName::StarL: {
            auto shape = [](const Formula* f) { return is_box_over(f, PKind::Star); };
            for (const Formula* pr : candidates(c.ant, principal, shape)) {
                const Formula* step = f_box(pr->prog->sub, pr);
                for (const FormulaSet& g : context_options(c.ant, pr)) {
                    Sequent p{fs_insert(fs_insert(g, pr->body), step), c.con};
                    if (ps[0] == p) return ok_result(resolved, rule, pr, nullptr);
                }
            }
            return no_instance();
        }

        case RuleName::StarR: {
            // Conclusion must be exactly [pi*]G, phi |- [pi*]phi; premise
            // G, phi |- [pi]phi.
            if (c.con.size() != 1 || !is_box_over(c.con[0], PKind::Star))
                return CheckResult::failure(
                    "StarR conclusion consequent must be a single starred box: " +
                    render_sequent(c));
            const Formula* pr = c.con[0];
            if (principal && principal != pr) return no_instance();
            const Formula* phi = pr->body;
            const Program* star = pr->prog;
            if (!fs_contains(c.ant, phi))
                return CheckResult::failure(
                    "StarR conclusion antecedent must contain the box body: " +
                    render_sequent(c));
            FormulaSet pcon = fs_make({f_box(star->sub, phi)});
            // G from the starred part of the antecedent; phi may itself be
            // starred with the same program, in which case it can be read as
            // part of [pi*]G too.
            std::vector<FormulaSet> star_parts{fs_erase(c.ant, phi)};
            if (is_box(phi) && phi->prog == star) star_parts.push_back(c.ant);
            for (const FormulaSet& part : star_parts) {
                FormulaSet g;
                bool all_starred = true;
                for (const Formula* a : part) {
                    if (!is_box(a) || a->prog != star) {
                        all_starred = false;
                        break;
                    }
                    g.push_back(a->body);
                }
                if (!all_starred) continue;
                Sequent p{fs_insert(default_schedule(g), phi), pcon};
                if (ps[0] == p) return ok_result(resolved, rule, pr, nullptr);
            }
            return no_instance();
        }

        case RuleName::Cs: {
            auto shape = [](const Formula* f) { return is_box_over(f, PKind::Star); };
            for (const Formula* pr : candidates(c.con, principal, shape)) {
                const Formula* step = f_box(pr->prog->sub, pr);
                for (const FormulaSet& d : context_options(c.con, pr)) {
                    Sequent p0{c.ant, fs_insert(d, pr->body)};
                    Sequent p1{c.ant, fs_insert(d, step)};
                    if (ps[0] == p0 && ps[1] == p1)
                        return ok_result(resolved, rule, pr, nullptr);
                }
            }
            return no_instance();
        }

        case RuleName::TestL: {
            auto shape = [](const Formula* f) { return is_box_over(f, PKind::Test); };
            for (const Formula* pr : candidates(c.ant, principal, shape)) {
                for (const FormulaSet& g : context_options(c.ant, pr)) {
                    Sequent p0{g, fs_insert(c.con, pr->prog->test)};
                    Sequent p1{fs_insert(g, pr->body), c.con};
                    if (ps[0] == p0 && ps[1] == p1)
                        return ok_result(resolved, rule, pr, nullptr);
                }
            }
            return no_instance();
        }

        case RuleName::TestR: {
            auto shape = [](const Formula* f) { return is_box_over(f, PKind::Test); };
            for (const Formula* pr : candidates(c.con, principal, shape)) {
                for (const FormulaSet& d : context_options(c.con, pr)) {
                    Sequent p{fs_insert(c.ant, pr->prog->test), fs_insert(d, pr->body)};
                    if (ps[0] == p) return ok_result(resolved, rule, pr, nullptr);
                }
            }
            return no_instance();
        }

        case RuleName::K: {
            // Premise G |- phi; conclusion may add any context around [pi]G
            // |- [pi]phi.
            for (const Formula* pr : candidates(c.con, principal, is_box)) {
                if (ps[0].con != fs_make({pr->body})) continue;
                bool all_present = true;
                for (const Formula* g : ps[0].ant)
                    if (!fs_contains(c.ant, f_box(pr->prog, g))) {
                        all_present = false;
                        break;
                    }
                if (all_present) return ok_result(resolved, rule, pr, nullptr);
            }
            return no_instance();
        }
    }
    return CheckResult::failure("unhandled rule");
}

std::vector<RuleName> applicable_rule_schemas(System sys, const Sequent& s) {
    auto any = [](const FormulaSet& side, auto pred) {
        return std::any_of(side.begin(), side.end(), pred);
    };
    auto modal_ok = [&](bool rev) {
        auto shape = rev ? is_revbox : is_box;
        for (const Formula* pr : s.con) {
            if (!shape(pr)) continue;
            bool all = true;
            for (const Formula* a : s.ant)
                if (!shape(a) || a->prog != pr->prog) {
                    all = false;
                    break;
                }
            if (all) return true;
        }
        return false;
    };
    auto star_r_ok = [&]() {
        if (s.con.size() != 1 || !is_box_over(s.con[0], PKind::Star)) return false;
        const Formula* pr = s.con[0];
        if (!fs_contains(s.ant, pr->body)) return false;
        std::vector<FormulaSet> parts{fs_erase(s.ant, pr->body)};
        if (is_box(pr->body) && pr->body->prog == pr->prog) parts.push_back(s.ant);
        for (const FormulaSet& part : parts) {
            bool all = true;
            for (const Formula* a : part)
                if (!is_box(a) || a->prog != pr->prog) {
                    all = false;
                    break;
                }
            if (all) return true;
        }
        return false;
    };

    std::vector<RuleName> out;
    for (const RuleInfo& ri : kRules) {
        if (!rule_in_system(sys, ri.rule)) continue;
        bool applies = false;
        switch (ri.rule) {
            case RuleName::Ax: applies = fs_intersects(s.ant, s.con); break;
            case RuleName::Bot: applies = fs_contains(s.ant, f_false()); break;
            case RuleName::ImpL: applies = any(s.ant, is_implies); break;
            case RuleName::ImpR: applies = any(s.con, is_implies); break;
            case RuleName::Wk: applies = !s.ant.empty() || !s.con.empty(); break;
            case RuleName::Cut: applies = true; break;
            case RuleName::BoxModal: applies = modal_ok(false); break;
            case RuleName::RevBoxModal: applies = modal_ok(true); break;
            case RuleName::SeqL:
                applies = any(s.ant, [](const Formula* f) { return is_box_over(f, PKind::Seq); });
                break;
            case RuleName::SeqR:
                applies = any(s.con, [](const Formula* f) { return is_box_over(f, PKind::Seq); });
                break;
            case RuleName::ChoiceL:
                applies = any(s.ant, [](const Formula* f) { return is_box_over(f, PKind::Choice); });
                break;
            case RuleName::ChoiceR:
                applies = any(s.con, [](const Formula* f) { return is_box_over(f, PKind::Choice); });
                break;
            case RuleName::StarL:
                applies = any(s.ant, [](const Formula* f) { return is_box_over(f, PKind::Star); });
                break;
            case RuleName::StarR: applies = star_r_ok(); break;
            case RuleName::Cs:
                applies = any(s.con, [](const Formula* f) { return is_box_over(f, PKind::Star); });
                break;
            case RuleName::TestL:
                applies = any(s.ant, [](const Formula* f) { return is_box_over(f, PKind::Test); });
                break;
            case RuleName::TestR:
                applies = any(s.con, [](const Formula* f) { return is_box_over(f, PKind::Test); });
                break;
            case RuleName::K: applies = any(s.con, is_box); break;
        }
        if (applies) out.push_back(ri.rule);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Proof trees.

NodePtr mk_node(RuleName rule, Sequent seq, std::vector<NodePtr> children,
                const Formula* principal, const Formula* cut) {
    auto n = std::make_shared<DerivationNode>();
    n->rule = rule;
    n->seq = std::move(seq);
    n->children = std::move(children);
    n->principal = principal;
    n->cut_formula = cut;
    return n;
}

NodePtr mk_bud(std::string id, Sequent seq) {
    auto n = std::make_shared<DerivationNode>();
    n->is_bud = true;
    n->bud_id = std::move(id);
    n->seq = std::move(seq);
    return n;
}

const DerivationNode* node_at_path(const PreProof& proof, const std::vector<int>& path) {
    const DerivationNode* n = proof.root.get();
    if (!n) throw std::out_of_range("proof has no root");
    for (int i : path) {
        if (i < 0 || static_cast<size_t>(i) >= n->children.size())
            throw std::out_of_range("proof path leaves the tree");
        n = n->children[static_cast<size_t>(i)].get();
    }
    return n;
}

namespace {

std::string path_str(const std::vector<int>& path) {
    std::string out = "root";
    for (int i : path) out += "/" + std::to_string(i);
    return out;
}

CheckResult walk_proof(System sys, const DerivationNode* n, std::vector<int>& path,
                       std::map<std::string, const DerivationNode*>& buds) {
    if (!n) return CheckResult::failure("null node at " + path_str(path));
    if (n->is_bud) {
        if (n->bud_id.empty())
            return CheckResult::failure("bud without id at " + path_str(path));
        if (!n->children.empty())
            return CheckResult::failure("bud " + n->bud_id + " has children");
        if (!buds.emplace(n->bud_id, n).second)
            return CheckResult::failure("duplicate bud id " + n->bud_id);
        return {};
    }
    std::vector<Sequent> premises;
    premises.reserve(n->children.size());
    for (const NodePtr& ch : n->children) {
        if (!ch) return CheckResult::failure("null child at " + path_str(path));
        premises.push_back(ch->seq);
    }
    CheckResult r = check_rule_instance(sys, n->rule, n->seq, premises, n->principal,
                                        n->cut_formula);
    if (!r) return CheckResult::failure("at " + path_str(path) + ": " + r.error);
    for (size_t i = 0; i < n->children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        r = walk_proof(sys, n->children[i].get(), path, buds);
        path.pop_back();
        if (!r) return r;
    }
    return {};
}

}  // namespace

CheckResult check_proof(System sys, const PreProof& proof) {
    if (!proof.root) return CheckResult::failure("proof has no root");
    std::map<std::string, const DerivationNode*> buds;
    std::vector<int> path;
    CheckResult r = walk_proof(sys, proof.root.get(), path, buds);
    if (!r) return r;

    if (sys == System::GTPDL && !buds.empty())
        return CheckResult::failure("GTPDL proofs are finite trees; bud " +
                                    buds.begin()->first + " is not allowed");
    for (const auto& [id, bud] : buds) {
        auto it = proof.companions.find(id);
        if (it == proof.companions.end())
            return CheckResult::failure("bud " + id + " has no companion entry");
        const DerivationNode* comp;
        try {
            comp = node_at_path(proof, it->second);
        } catch (const std::out_of_range&) {
            return CheckResult::failure("companion path for bud " + id +
                                        " leaves the tree");
        }
        if (comp->is_bud)
            return CheckResult::failure("companion of bud " + id + " is itself a bud");
        if (!(comp->seq == bud->seq))
            return CheckResult::failure("companion of bud " + id +
                                        " carries a different sequent");
    }
    for (const auto& [id, p] : proof.companions)
        if (!buds.count(id))
            return CheckResult::failure("companion entry for unknown bud " + id);
    return {};
}

// ---------------------------------------------------------------------------
// Characteristic formulas and divisions.

const Formula* big_and(const std::vector<const Formula*>& fs) {
    if (fs.empty()) return f_top();
    const Formula* acc = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
    return acc;
}

const Formula* big_or(const std::vector<const Formula*>& fs) {
    if (fs.empty()) return f_false();
    const Formula* acc = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) acc = f_or(acc, fs[i]);
    return acc;
}

const Formula* char_wff(const Sequent& s) {
    return f_implies(big_and(s.ant), big_or(s.con));
}

std::vector<Sequent> divisions(const FormulaSet& xs) {
    if (xs.size() > 25)
        throw std::invalid_argument("refusing to enumerate divisions of more than 25 formulas");
    std::vector<Sequent> out;
    size_t total = size_t{1} << xs.size();
    out.reserve(total);
    for (size_t mask = 0; mask < total; ++mask) {
        Sequent s;
        for (size_t i = 0; i < xs.size(); ++i)
            ((mask >> i) & 1 ? s.ant : s.con).push_back(xs[i]);
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Derived rules.  Uniform scheme: compute the conclusion, apply primitives
// with full (contracted) contexts so premises only ever grow, and absorb the
// given subproofs with weakening.

NodePtr wk_to(const Sequent& target, NodePtr premise) {
    if (!fs_subset(premise->seq.ant, target.ant) ||
        !fs_subset(premise->seq.con, target.con))
        throw std::invalid_argument("wk_to: premise " + render_sequent(premise->seq) +
                                    " is not included in " + render_sequent(target));
    return mk_node(RuleName::Wk, target, {std::move(premise)});
}

NodePtr derived_not_l(const Formula* phi, NodePtr d) {
    const Formula* np = f_not(phi);
    Sequent c{fs_insert(d->seq.ant, np), fs_erase(d->seq.con, phi)};
    Sequent p0{c.ant, fs_insert(c.con, phi)};
    Sequent p1{fs_insert(c.ant, f_false()), c.con};
    return mk_node(RuleName::ImpL, c, {wk_to(p0, std::move(d)), mk_node(RuleName::Bot, p1)},
                   np);
}

NodePtr derived_not_r(const Formula* phi, NodePtr d) {
    const Formula* np = f_not(phi);
    Sequent c{fs_erase(d->seq.ant, phi), fs_insert(d->seq.con, np)};
    Sequent p{fs_insert(c.ant, phi), fs_insert(c.con, f_false())};
    return mk_node(RuleName::ImpR, c, {wk_to(p, std::move(d))}, np);
}

NodePtr derived_or_l(const Formula* phi, const Formula* psi, NodePtr d0, NodePtr d1) {
    const Formula* orf = f_or(phi, psi);
    Sequent c{fs_insert(fs_union(fs_erase(d0->seq.ant, phi), fs_erase(d1->seq.ant, psi)),
                        orf),
              fs_union(d0->seq.con, d1->seq.con)};
    Sequent p0{c.ant, fs_insert(c.con, f_not(phi))};
    Sequent p1{fs_insert(c.ant, psi), c.con};
    return mk_node(RuleName::ImpL, c,
                   {wk_to(p0, derived_not_r(phi, std::move(d0))), wk_to(p1, std::move(d1))},
                   orf);
}

NodePtr derived_or_r(const Formula* phi, const Formula* psi, NodePtr d) {
    const Formula* orf = f_or(phi, psi);
    const Formula* np = f_not(phi);
    Sequent c{d->seq.ant, fs_insert(fs_erase(fs_erase(d->seq.con, phi), psi), orf)};
    Sequent q{fs_insert(c.ant, np), fs_insert(c.con, psi)};
    Sequent q0{q.ant, fs_insert(q.con, phi)};
    Sequent q1{fs_insert(q.ant, f_false()), q.con};
    NodePtr inner = mk_node(RuleName::ImpL, q,
                            {wk_to(q0, std::move(d)), mk_node(RuleName::Bot, q1)}, np);
    return mk_node(RuleName::ImpR, c, {std::move(inner)}, orf);
}

NodePtr derived_and_l(const Formula* phi, const Formula* psi, NodePtr d) {
    const Formula* andf = f_and(phi, psi);
    const Formula* inner_imp = f_implies(phi, f_implies(psi, f_false()));
    Sequent c{fs_insert(fs_erase(fs_erase(d->seq.ant, phi), psi), andf), d->seq.con};
    Sequent p0{c.ant, fs_insert(c.con, inner_imp)};
    Sequent p1{fs_insert(c.ant, f_false()), c.con};
    Sequent r1{fs_insert(p0.ant, phi), fs_insert(p0.con, f_implies(psi, f_false()))};
    Sequent r2{fs_insert(r1.ant, psi), fs_insert(r1.con, f_false())};
    NodePtr n2 = mk_node(RuleName::ImpR, r1, {wk_to(r2, std::move(d))},
                         f_implies(psi, f_false()));
    NodePtr n1 = mk_node(RuleName::ImpR, p0, {std::move(n2)}, inner_imp);
    return mk_node(RuleName::ImpL, c, {std::move(n1), mk_node(RuleName::Bot, p1)}, andf);
}

NodePtr derived_and_r(const Formula* phi, const Formula* psi, NodePtr d0, NodePtr d1) {
    const Formula* andf = f_and(phi, psi);
    const Formula* inner_imp = f_implies(phi, f_implies(psi, f_false()));
    const Formula* npsi = f_implies(psi, f_false());
    Sequent c{fs_union(d0->seq.ant, d1->seq.ant),
              fs_insert(fs_union(fs_erase(d0->seq.con, phi), fs_erase(d1->seq.con, psi)),
                        andf)};
    Sequent q{fs_insert(c.ant, inner_imp), fs_insert(c.con, f_false())};
    Sequent q0{q.ant, fs_insert(q.con, phi)};
    Sequent q1{fs_insert(q.ant, npsi), q.con};
    Sequent q10{q1.ant, fs_insert(q1.con, psi)};
    Sequent q11{fs_insert(q1.ant, f_false()), q1.con};
    NodePtr inner1 = mk_node(RuleName::ImpL, q1,
                             {wk_to(q10, std::move(d1)), mk_node(RuleName::Bot, q11)}, npsi);
    NodePtr inner = mk_node(RuleName::ImpL, q,
                            {wk_to(q0, std::move(d0)), std::move(inner1)}, inner_imp);
    return mk_node(RuleName::ImpR, c, {std::move(inner)}, andf);
}

NodePtr derived_star_l_base(const Program* pi, const Formula* psi, NodePtr d) {
    const Formula* star = f_box(p_star(pi), psi);
    Sequent c{fs_insert(fs_erase(d->seq.ant, psi), star), d->seq.con};
    Sequent p{fs_insert(fs_insert(c.ant, psi), f_box(pi, star)), c.con};
    return mk_node(RuleName::StarL, c, {wk_to(p, std::move(d))}, star);
}

NodePtr derived_star_l_step(const Program* pi, const Formula* psi, NodePtr d) {
    const Formula* star = f_box(p_star(pi), psi);
    const Formula* step = f_box(pi, star);
    Sequent c{fs_insert(fs_erase(d->seq.ant, step), star), d->seq.con};
    Sequent p{fs_insert(fs_insert(c.ant, psi), step), c.con};
    return mk_node(RuleName::StarL, c, {wk_to(p, std::move(d))}, star);
}

NodePtr derived_choice_l(const Formula* choice_box, NodePtr d) {
    if (choice_box->kind != FKind::Box || choice_box->prog->kind != PKind::Choice)
        throw std::invalid_argument("derived_choice_l needs a [pi0+pi1] box");
    const Formula* u0 = f_box(choice_box->prog->lhs, choice_box->body);
    const Formula* u1 = f_box(choice_box->prog->rhs, choice_box->body);
    Sequent c{fs_insert(fs_erase(fs_erase(d->seq.ant, u0), u1), choice_box), d->seq.con};
    Sequent p{fs_insert(fs_insert(c.ant, u0), u1), c.con};
    return mk_node(RuleName::ChoiceL, c, {wk_to(p, std::move(d))}, choice_box);
}

NodePtr derived_cut(const Formula* chi, NodePtr d0, NodePtr d1) {
    Sequent c{fs_union(d0->seq.ant, fs_erase(d1->seq.ant, chi)),
              fs_union(fs_erase(d0->seq.con, chi), d1->seq.con)};
    Sequent p0{c.ant, fs_insert(c.con, chi)};
    Sequent p1{fs_insert(c.ant, chi), c.con};
    return mk_node(RuleName::Cut, c, {wk_to(p0, std::move(d0)), wk_to(p1, std::move(d1))},
                   nullptr, chi);
}

NodePtr derived_big_and_r(const std::vector<const Formula*>& lambda,
                          const std::vector<NodePtr>& ds) {
    if (lambda.size() != ds.size())
        throw std::invalid_argument("derived_big_and_r: one subproof per conjunct");
    if (lambda.empty()) {
        Sequent c{{}, fs_make({f_top()})};
        Sequent p{fs_make({f_false()}), fs_insert(c.con, f_false())};
        return mk_node(RuleName::ImpR, c, {mk_node(RuleName::Bot, p)}, f_top());
    }
    if (lambda.size() == 1) {
        Sequent c{ds[0]->seq.ant, fs_insert(ds[0]->seq.con, lambda[0])};
        return wk_to(c, ds[0]);
    }
    std::vector<const Formula*> rest(lambda.begin(), lambda.end() - 1);
    std::vector<NodePtr> drest(ds.begin(), ds.end() - 1);
    return derived_and_r(big_and(rest), lambda.back(), derived_big_and_r(rest, drest),
                         ds.back());
}

NodePtr derived_big_and_l(const std::vector<const Formula*>& lambda, NodePtr d) {
    if (lambda.empty()) {
        Sequent c{fs_insert(d->seq.ant, f_top()), d->seq.con};
        return wk_to(c, std::move(d));
    }
    if (lambda.size() == 1) {
        Sequent c{fs_insert(d->seq.ant, lambda[0]), d->seq.con};
        return wk_to(c, std::move(d));
    }
    std::vector<const Formula*> rest(lambda.begin(), lambda.end() - 1);
    return derived_and_l(big_and(rest), lambda.back(),
                         derived_big_and_l(rest, std::move(d)));
}

NodePtr derived_big_or_l(const std::vector<const Formula*>& mu,
                         const std::vector<NodePtr>& ds) {
    if (mu.size() != ds.size())
        throw std::invalid_argument("derived_big_or_l: one subproof per disjunct");
    if (mu.empty()) return mk_node(RuleName::Bot, Sequent{fs_make({f_false()}), {}});
    if (mu.size() == 1) {
        Sequent c{fs_insert(ds[0]->seq.ant, mu[0]), ds[0]->seq.con};
        return wk_to(c, ds[0]);
    }
    std::vector<const Formula*> rest(mu.begin(), mu.end() - 1);
    std::vector<NodePtr> drest(ds.begin(), ds.end() - 1);
    return derived_or_l(big_or(rest), mu.back(), derived_big_or_l(rest, drest), ds.back());
}

NodePtr derived_big_or_r(const std::vector<const Formula*>& mu, NodePtr d) {
    if (mu.empty()) {
        Sequent c{d->seq.ant, fs_insert(d->seq.con, f_false())};
        return wk_to(c, std::move(d));
    }
    if (mu.size() == 1) {
        Sequent c{d->seq.ant, fs_insert(d->seq.con, mu[0])};
        return wk_to(c, std::move(d));
    }
    std::vector<const Formula*> rest(mu.begin(), mu.end() - 1);
    return derived_or_r(big_or(rest), mu.back(), derived_big_or_r(rest, std::move(d)));
}

// ---------------------------------------------------------------------------
// Proof files.

namespace {

struct ProofParser {
    std::string src;
    size_t pos = 0;

    explicit ProofParser(const std::string& text) {
        // Strip # comments; neither formulas nor sequents contain '#'.
        src.reserve(text.size());
        bool comment = false;
        for (char ch : text) {
            if (ch == '\n') comment = false;
            else if (ch == '#') comment = true;
            if (!comment) src.push_back(ch);
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("proof file, offset " + std::to_string(pos) + ": " + msg);
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= src.size();
    }

    char peek() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input");
        return src[pos];
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string word() {
        skip_ws();
        size_t start = pos;
        while (pos < src.size()) {
            char c = src[pos];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ++pos;
            else break;
        }
        if (pos == start) fail("expected a name");
        return src.substr(start, pos - start);
    }

    // A formula annotation value: a balanced parenthesized group, or a token
    // run that only stops at whitespace/')' outside parentheses (covers forms
    // like [a](p -> q)).
    std::string annotation_value() {
        skip_ws();
        std::string out;
        int depth = 0;
        bool first = true;
        while (pos < src.size()) {
            char c = src[pos];
            if (depth == 0 && !first &&
                (std::isspace(static_cast<unsigned char>(c)) || c == ')'))
                break;
            if (c == '(') ++depth;
            if (c == ')') {
                if (depth == 0) break;
                --depth;
            }
            out.push_back(c);
            ++pos;
            first = false;
            if (depth == 0 && !out.empty() && out[0] == '(') break;  // balanced group done
        }
        if (out.empty()) fail("expected a formula");
        return out;
    }

    const Formula* annotation_formula() {
        std::string text = annotation_value();
        try {
            return parse_formula(text);
        } catch (const std::exception& e) {
            fail("bad formula \"" + text + "\": " + e.what());
        }
    }

    Sequent seq_group() {
        expect('(');
        if (word() != "seq") fail("expected (seq ...)");
        skip_ws();
        std::string body;
        int depth = 0;
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '(') ++depth;
            if (c == ')') {
                if (depth == 0) break;
                --depth;
            }
            body.push_back(c);
            ++pos;
        }
        expect(')');
        try {
            return parse_sequent(body);
        } catch (const std::exception& e) {
            fail("bad sequent \"" + body + "\": " + e.what());
        }
    }

    // Peeks the keyword that follows '(' without consuming anything.
    std::string group_keyword() {
        size_t save = pos;
        expect('(');
        std::string w = word();
        pos = save;
        return w;
    }

    NodePtr node_expr() {
        expect('(');
        std::string kind = word();
        if (kind == "bud") {
            std::string id = word();
            Sequent seq = seq_group();
            expect(')');
            return mk_bud(std::move(id), std::move(seq));
        }
        if (kind != "node") fail("expected (node ...) or (bud ...)");
        RuleName rule = RuleName::Ax;
        std::string rn = word();
        try {
            rule = rule_from_string(rn);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        const Formula* principal = nullptr;
        const Formula* cut = nullptr;
        while (peek() != '(') {
            std::string key = word();
            if (pos >= src.size() || src[pos] != ':') fail("expected ':' after " + key);
            ++pos;
            if (key == "principal") principal = annotation_formula();
            else if (key == "cut") cut = annotation_formula();
            else fail("unknown annotation \"" + key + "\"");
        }
        if (group_keyword() != "seq") fail("expected (seq ...) before children");
        Sequent seq = seq_group();
        std::vector<NodePtr> children;
        while (peek() == '(') children.push_back(node_expr());
        expect(')');
        return mk_node(rule, std::move(seq), std::move(children), principal, cut);
    }
};

}  // namespace

PreProof parse_proof_text(const std::string& text) {
    ProofParser p(text);
    PreProof proof;
    proof.root = p.node_expr();
    while (!p.at_end()) {
        p.expect('(');
        if (p.word() != "companion") p.fail("expected (companion ...)");
        std::string id = p.word();
        std::vector<int> path;
        while (p.peek() != ')') {
            std::string n = p.word();
            size_t used = 0;
            int idx;
            try {
                idx = std::stoi(n, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != n.size() || idx < 0) p.fail("bad path index \"" + n + "\"");
            path.push_back(idx);
        }
        p.expect(')');
        if (!proof.companions.emplace(std::move(id), std::move(path)).second)
            p.fail("duplicate companion entry");
    }
    return proof;
}

namespace {

void render_node(const DerivationNode* n, int depth, std::string& out) {
    std::string ind(2 * static_cast<size_t>(depth), ' ');
    if (n->is_bud) {
        out += ind + "(bud " + n->bud_id + " (seq " + render_sequent(n->seq) + "))";
        return;
    }
    out += ind + "(node " + to_string(n->rule);
    if (n->principal) out += " principal: " + n->principal->text;
    if (n->cut_formula) out += " cut: " + n->cut_formula->text;
    out += " (seq " + render_sequent(n->seq) + ")";
    for (const NodePtr& ch : n->children) {
        out += "\n";
        render_node(ch.get(), depth + 1, out);
    }
    out += ")";
}

}  // namespace

std::string render_proof_text(const PreProof& proof) {
    std::string out;
    render_node(proof.root.get(), 0, out);
    out += "\n";
    for (const auto& [id, path] : proof.companions) {
        out += "(companion " + id;
        for (int i : path) out += " " + std::to_string(i);
        out += ")\n";
    }
    return out;
}

}  // namespace tpdl
