// game.cpp -- proof-search game: positions, moves, path-DFS solving, and the
// two strategy extractions.

#include "tpdl/game.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "tpdl/cyclic.hpp"

namespace tpdl {

int fresh_tag(const Track& t) {
    int expect = 1;
    for (const auto& [tag, f] : t) {
        if (tag == expect) ++expect;
        else if (tag > expect) break;
    }
    return expect;
}

const Formula* tracked_formula(const Track& t, int tag) {
    for (const auto& [g, f] : t)
        if (g == tag) return f;
    return nullptr;
}

Track retag(Track t, const Formula* from, const Formula* to) {
    for (auto& [tag, f] : t)
        if (f == from) f = to;
    return t;
}

namespace {

Track track_insert(Track t, int tag, const Formula* f) {
    auto it = std::lower_bound(t.begin(), t.end(), tag,
                               [](const auto& e, int v) { return e.first < v; });
    t.insert(it, {tag, f});
    return t;
}

FormulaSet full_schedule(const Sequent& s) {
    return reducible(fl_set(sequent_formulas(s)));
}

}  // namespace

Position initial_position(const Sequent& s) {
    Position p;
    p.seq = s;
    for (size_t i = 0; i < s.con.size(); ++i)
        p.track.emplace_back(static_cast<int>(i) + 1, s.con[i]);
    p.sched = full_schedule(s);
    return p;
}

bool prover_terminal(const Position& p) {
    return fs_intersects(p.seq.ant, p.seq.con) || fs_contains(p.seq.ant, f_false());
}

const char* to_string(MoveKind k) {
    switch (k) {
        case MoveKind::GImpL: return "GImpL";
        case MoveKind::GImpR: return "GImpR";
        case MoveKind::GSeqL: return "GSeqL";
        case MoveKind::GSeqR: return "GSeqR";
        case MoveKind::GChoiceL: return "GChoiceL";
        case MoveKind::GChoiceR: return "GChoiceR";
        case MoveKind::GStarL: return "GStarL";
        case MoveKind::GCs: return "GCs";
        case MoveKind::GTestL: return "GTestL";
        case MoveKind::GTestR: return "GTestR";
        case MoveKind::GK: return "GK";
        case MoveKind::GRetry: return "GRetry";
    }
    return "?";
}

namespace {

const Formula* selected_formula(const Position& p) {
    FormulaSet active = fs_intersection(fs_union(p.seq.ant, p.seq.con), p.sched);
    return active.empty() ? nullptr : active.front();  // least in schedule order
}

}  // namespace

Turn turn(const Position& p) {
    const Formula* sel = selected_formula(p);
    if (!sel) return Turn::ProverChoice;
    bool left = fs_contains(p.seq.ant, sel);
    if (sel->kind == FKind::Implies)
        return left ? Turn::RefuterChoice : Turn::Forced;
    switch (sel->prog->kind) {
        case PKind::Choice: return left ? Turn::Forced : Turn::RefuterChoice;
        case PKind::Star: return left ? Turn::Forced : Turn::RefuterChoice;
        case PKind::Test: return left ? Turn::RefuterChoice : Turn::Forced;
        default: return Turn::Forced;
    }
}

std::vector<Move> legal_moves(const Position& p) {
    const FormulaSet& ant = p.seq.ant;
    const FormulaSet& con = p.seq.con;
    std::vector<Move> out;

    const Formula* sel = selected_formula(p);
    if (!sel) {
        // Joint position: GK through each distinct tracked atomic box, in
        // schedule order, then GRetry.
        FormulaSet boxes;
        for (const auto& [tag, f] : p.track)
            if (f->kind == FKind::Box && f->prog->kind == PKind::Atom)
                boxes.push_back(f);
        boxes = default_schedule(boxes);
        for (const Formula* b : boxes) {
            FormulaSet bodies;
            for (const Formula* a : ant)
                if (a->kind == FKind::Box && a->prog == b->prog)
                    bodies.push_back(a->body);
            Position r;
            r.seq = {default_schedule(bodies), fs_make({b->body})};
            r.track = {{0, b->body}};
            r.sched = full_schedule(r.seq);
            out.push_back({MoveKind::GK, b, 0, tracked_formula(p.track, 0) != b,
                           std::move(r)});
        }
        Position r;
        r.seq = p.seq;
        r.track = p.track;
        r.sched = full_schedule(p.seq);
        out.push_back({MoveKind::GRetry, nullptr, 0, false, std::move(r)});
        return out;
    }

    bool left = fs_contains(ant, sel);
    FormulaSet rest = fs_erase(p.sched, sel);
    auto push = [&](MoveKind kind, int option, Sequent seq, Track track) {
        out.push_back({kind, sel, option, false,
                       Position{std::move(seq), std::move(track), rest}});
    };

    if (sel->kind == FKind::Implies) {
        if (left) {
            Track t0 = fs_contains(con, sel->lhs)
                           ? p.track
                           : track_insert(p.track, fresh_tag(p.track), sel->lhs);
            push(MoveKind::GImpL, 0, {ant, fs_insert(con, sel->lhs)}, std::move(t0));
            push(MoveKind::GImpL, 1, {fs_insert(ant, sel->rhs), con}, p.track);
        } else {
            push(MoveKind::GImpR, 0, {fs_insert(ant, sel->lhs), fs_insert(con, sel->rhs)},
                 retag(p.track, sel, sel->rhs));
        }
        return out;
    }
    if (sel->kind != FKind::Box) throw std::logic_error("unreducible formula selected");

    const Program* prog = sel->prog;
    const Formula* body = sel->body;
    switch (prog->kind) {
        case PKind::Seq: {
            const Formula* unf = f_box(prog->lhs, f_box(prog->rhs, body));
            if (left)
                push(MoveKind::GSeqL, 0, {fs_insert(ant, unf), con}, p.track);
            else
                push(MoveKind::GSeqR, 0, {ant, fs_insert(con, unf)},
                     retag(p.track, sel, unf));
            break;
        }
        case PKind::Choice: {
            const Formula* u0 = f_box(prog->lhs, body);
            const Formula* u1 = f_box(prog->rhs, body);
            if (left) {
                push(MoveKind::GChoiceL, 0, {fs_insert(fs_insert(ant, u0), u1), con},
                     p.track);
            } else {
                push(MoveKind::GChoiceR, 0, {ant, fs_insert(con, u0)},
                     retag(p.track, sel, u0));
                push(MoveKind::GChoiceR, 1, {ant, fs_insert(con, u1)},
                     retag(p.track, sel, u1));
            }
            break;
        }
        case PKind::Star: {
            const Formula* step = f_box(prog->sub, sel);
            if (left) {
                push(MoveKind::GStarL, 0, {fs_insert(fs_insert(ant, body), step), con},
                     p.track);
            } else {
                push(MoveKind::GCs, 0, {ant, fs_insert(con, body)},
                     retag(p.track, sel, body));
                push(MoveKind::GCs, 1, {ant, fs_insert(con, step)},
                     retag(p.track, sel, step));
            }
            break;
        }
        case PKind::Test: {
            const Formula* chi = prog->test;
            if (left) {
                Track t0 = fs_contains(con, chi)
                               ? p.track
                               : track_insert(p.track, fresh_tag(p.track), chi);
                push(MoveKind::GTestL, 0, {ant, fs_insert(con, chi)}, std::move(t0));
                push(MoveKind::GTestL, 1, {fs_insert(ant, body), con}, p.track);
            } else {
                push(MoveKind::GTestR, 0, {fs_insert(ant, chi), fs_insert(con, body)},
                     retag(p.track, sel, body));
            }
            break;
        }
        case PKind::Atom:
            throw std::logic_error("atomic box selected for reduction");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solving: depth-first over the position graph, comparing each new position
// against the current path; a hit is a repeat, decided by the window
// condition.

namespace {

struct BudgetExhausted {};

struct Solver {
    uint64_t budget;
    uint64_t visited = 0;

    struct PathEntry {
        Position pos;
        MoveKind move_in;
        bool resets0_in;
    };
    std::vector<PathEntry> path;

    // The window [m .. path.size()] of positions path[m..] plus `cur`
    // (which equals path[m].pos): the prover wins iff no track-0-resetting
    // box jump happened inside and some tag lives throughout with its
    // formula changing at least once.
    bool prover_wins_window(size_t m, const Position& cur, MoveKind mk_in,
                            bool resets0_in) const {
        for (size_t i = m + 1; i < path.size(); ++i)
            if (path[i].move_in == MoveKind::GK && path[i].resets0_in) return false;
        if (mk_in == MoveKind::GK && resets0_in) return false;

        std::vector<const Position*> window;
        for (size_t i = m; i < path.size(); ++i) window.push_back(&path[i].pos);
        window.push_back(&cur);

        for (const auto& [tag, f] : path[m].pos.track) {
            bool everywhere = true;
            bool changed = false;
            const Formula* prev = f;
            for (size_t i = 1; i < window.size() && everywhere; ++i) {
                const Formula* here = tracked_formula(window[i]->track, tag);
                if (!here) everywhere = false;
                else {
                    if (here != prev) changed = true;
                    prev = here;
                }
            }
            if (everywhere && changed) return true;
        }
        return false;
    }

    Winner run(const Position& pos, MoveKind mk_in, bool resets0_in, StrategyNode& out) {
        if (++visited > budget) throw BudgetExhausted{};
        out.pos = pos;

        if (fs_intersects(pos.seq.ant, pos.seq.con)) {
            out.kind = StrategyNode::Kind::AxLike;
            return Winner::Prover;
        }
        if (fs_contains(pos.seq.ant, f_false())) {
            out.kind = StrategyNode::Kind::BotLike;
            return Winner::Prover;
        }
        for (size_t m = 0; m < path.size(); ++m)
            if (path[m].pos == pos) {
                out.kind = StrategyNode::Kind::Repeat;
                out.repeat_depth = static_cast<int>(m);
                return prover_wins_window(m, pos, mk_in, resets0_in) ? Winner::Prover
                                                                     : Winner::Refuter;
            }

        Turn t = turn(pos);
        out.kind = t == Turn::RefuterChoice ? StrategyNode::Kind::RefuterChoice
                   : t == Turn::ProverChoice ? StrategyNode::Kind::ProverChoice
                                             : StrategyNode::Kind::Forced;
        std::vector<Move> moves = legal_moves(pos);
        path.push_back({pos, mk_in, resets0_in});

        // The chooser keeps the first winning move; the opponent must cover
        // all of them.
        Winner chooser_wins =
            t == Turn::RefuterChoice ? Winner::Refuter : Winner::Prover;
        Winner result = chooser_wins == Winner::Prover ? Winner::Refuter : Winner::Prover;
        std::vector<StrategyNode> kept_children;
        std::vector<Move> kept_moves;
        for (Move& mv : moves) {
            StrategyNode child;
            Winner w = run(mv.result, mv.kind, mv.resets_track0, child);
            if (w == chooser_wins) {
                result = chooser_wins;
                kept_children.clear();
                kept_moves.clear();
                kept_children.push_back(std::move(child));
                kept_moves.push_back(std::move(mv));
                break;
            }
            kept_children.push_back(std::move(child));
            kept_moves.push_back(std::move(mv));
        }
        path.pop_back();
        out.moves = std::move(kept_moves);
        out.children = std::move(kept_children);
        return result;
    }
};

}  // namespace

SolveOutcome solve(const Sequent& s, uint64_t budget) {
    if (!sequent_is_pdl(s))
        throw std::invalid_argument("the proof-search game handles forward-only sequents");
    Solver solver{budget, 0, {}};
    SolveOutcome outcome;
    try {
        StrategyNode root;
        Winner w = solver.run(initial_position(s), MoveKind::GRetry, false, root);
        outcome.winner = w;
        outcome.strategy = std::move(root);
    } catch (const BudgetExhausted&) {
        outcome.winner = std::nullopt;
    }
    outcome.positions_visited = solver.visited;
    return outcome;
}

// ---------------------------------------------------------------------------
// Prover strategy -> cyclic proof.

namespace {

struct ProofFolder {
    PreProof proof;
    int buds = 0;

    NodePtr build(const StrategyNode& n, std::vector<int>& path) {
        switch (n.kind) {
            case StrategyNode::Kind::AxLike:
                return mk_node(RuleName::Ax, n.pos.seq);
            case StrategyNode::Kind::BotLike:
                return mk_node(RuleName::Bot, n.pos.seq);
            case StrategyNode::Kind::Repeat: {
                std::string id = "b" + std::to_string(++buds);
                proof.companions[id] = std::vector<int>(
                    path.begin(), path.begin() + n.repeat_depth);
                return mk_bud(id, n.pos.seq);
            }
            default:
                break;
        }
        if (n.moves.empty()) throw std::logic_error("prover strategy node without moves");
        RuleName rule;
        switch (n.moves[0].kind) {
            case MoveKind::GImpL: rule = RuleName::ImpL; break;
            case MoveKind::GImpR: rule = RuleName::ImpR; break;
            case MoveKind::GSeqL: rule = RuleName::SeqL; break;
            case MoveKind::GSeqR: rule = RuleName::SeqR; break;
            case MoveKind::GChoiceL: rule = RuleName::ChoiceL; break;
            case MoveKind::GChoiceR: rule = RuleName::ChoiceR; break;
            case MoveKind::GStarL: rule = RuleName::StarL; break;
            case MoveKind::GCs: rule = RuleName::Cs; break;
            case MoveKind::GTestL: rule = RuleName::TestL; break;
            case MoveKind::GTestR: rule = RuleName::TestR; break;
            case MoveKind::GK: rule = RuleName::K; break;
            case MoveKind::GRetry: rule = RuleName::Wk; break;
            default: throw std::logic_error("unmapped move kind");
        }
        std::vector<NodePtr> children;
        for (size_t i = 0; i < n.children.size(); ++i) {
            path.push_back(static_cast<int>(i));
            children.push_back(build(n.children[i], path));
            path.pop_back();
        }
        const Formula* principal =
            (rule == RuleName::Wk) ? nullptr : n.moves[0].subject;
        return mk_node(rule, n.pos.seq, std::move(children), principal);
    }
};

}  // namespace

PreProof strategy_to_proof(const StrategyNode& prover_strategy) {
    ProofFolder folder;
    std::vector<int> path;
    folder.proof.root = folder.build(prover_strategy, path);
    return folder.proof;
}

// ---------------------------------------------------------------------------
// Refuter strategy -> countermodel.

namespace {

struct ModelFolder {
    std::vector<const StrategyNode*> nodes;                      // flattened
    std::vector<std::vector<std::pair<int, const Move*>>> edges; // per node

    int flatten(const StrategyNode& n, std::vector<int>& path_ids) {
        if (n.kind == StrategyNode::Kind::AxLike || n.kind == StrategyNode::Kind::BotLike)
            throw std::logic_error("refuter strategy contains a closed position");
        int id = static_cast<int>(nodes.size());
        nodes.push_back(&n);
        edges.emplace_back();
        path_ids.push_back(id);
        std::vector<std::pair<int, const Move*>> local;
        for (size_t i = 0; i < n.children.size(); ++i) {
            const StrategyNode& ch = n.children[i];
            if (ch.kind == StrategyNode::Kind::Repeat)
                local.emplace_back(path_ids[ch.repeat_depth], &n.moves[i]);
            else
                local.emplace_back(flatten(ch, path_ids), &n.moves[i]);
        }
        path_ids.pop_back();
        edges[id] = std::move(local);
        return id;
    }

    // Follow the unique non-GK edge from `start` until a node repeats;
    // returns the walk and the index where the cycle begins.
    std::pair<std::vector<int>, int> walk_world(int start) const {
        std::vector<int> walk;
        std::map<int, int> seen;
        int cur = start;
        while (!seen.count(cur)) {
            seen[cur] = static_cast<int>(walk.size());
            walk.push_back(cur);
            int next = -1;
            for (const auto& [target, mv] : edges[cur])
                if (mv->kind != MoveKind::GK) {
                    if (next != -1)
                        throw std::logic_error("ambiguous refuter continuation");
                    next = target;
                }
            if (next == -1) throw std::logic_error("refuter walk has no continuation");
            cur = next;
        }
        return {std::move(walk), seen[cur]};
    }
};

bool transforming_edge(const Track& from, const Track& to) {
    for (const auto& [tag, f] : from) {
        const Formula* g = tracked_formula(to, tag);
        if (g && g != f) return true;
    }
    return false;
}

}  // namespace

ExtractedModel strategy_to_model(const StrategyNode& refuter_strategy) {
    ModelFolder mf;
    std::vector<int> path_ids;
    mf.flatten(refuter_strategy, path_ids);

    // World start nodes: the root plus every box-jump target, deduplicated
    // by position.
    std::vector<int> starts{0};
    auto known_start = [&](const Position& pos) {
        for (int s : starts)
            if (mf.nodes[s]->pos == pos) return true;
        return false;
    };
    for (size_t u = 0; u < mf.nodes.size(); ++u)
        for (const auto& [target, mv] : mf.edges[u])
            if (mv->kind == MoveKind::GK && !known_start(mf.nodes[target]->pos))
                starts.push_back(target);

    // Per world: walk to the cycle, then find the core -- the first joint
    // position after which the sequent is constant and no edge (cycle wrap
    // included) rewrites a tracked formula.
    std::vector<int> cores;
    for (int s : starts) {
        auto [walk, cycle_start] = mf.walk_world(s);
        int e = static_cast<int>(walk.size());
        int core = -1;
        for (int k = 0; k < e && core < 0; ++k) {
            if (mf.nodes[walk[k]]->kind != StrategyNode::Kind::ProverChoice) continue;
            const Sequent& base = mf.nodes[walk[k]]->pos.seq;
            bool ok = true;
            for (int i = k; i < e && ok; ++i)
                if (!(mf.nodes[walk[i]]->pos.seq == base)) ok = false;
            for (int i = k; i < e && ok; ++i) {
                int next = (i + 1 < e) ? walk[i + 1] : walk[cycle_start];
                if (transforming_edge(mf.nodes[walk[i]]->pos.track,
                                      mf.nodes[next]->pos.track))
                    ok = false;
            }
            if (ok) core = walk[k];
        }
        if (core < 0)
            throw std::logic_error("refuter strategy world does not stabilize");
        cores.push_back(core);
    }

    KripkeModel model;
    for (size_t i = 0; i < starts.size(); ++i)
        model.states.push_back("w" + std::to_string(i + 1));
    model.valuation.resize(starts.size());
    int n = model.size();

    auto world_of = [&](const Position& pos) {
        for (size_t j = 0; j < starts.size(); ++j)
            if (mf.nodes[starts[j]]->pos == pos) return static_cast<int>(j);
        throw std::logic_error("box jump target is not a world");
    };

    for (size_t i = 0; i < starts.size(); ++i) {
        const Position& core = mf.nodes[cores[i]]->pos;
        for (const Formula* a : core.seq.ant)
            if (a->kind == FKind::Prop) model.valuation[i].insert(a->name);
        // One atomic edge per tracked box, to the world the jump lands in.
        for (const auto& [target, mv] : mf.edges[cores[i]]) {
            if (mv->kind != MoveKind::GK) continue;
            int j = world_of(mf.nodes[target]->pos);
            Rel& r = model.edges
                         .try_emplace(mv->subject->prog->name, n,
                                      std::vector<bool>(n, false))
                         .first->second;
            r[static_cast<int>(i)][j] = true;
        }
    }
    return {std::move(model), 0};
}

// ---------------------------------------------------------------------------

Decision decide(const Sequent& s, uint64_t budget) {
    Decision d;
    SolveOutcome outcome = solve(s, budget);
    d.positions_visited = outcome.positions_visited;
    if (!outcome.winner) return d;

    if (*outcome.winner == Winner::Prover) {
        d.proof = strategy_to_proof(outcome.strategy);
        CheckResult r = check_cyclic_proof(System::CGPDL, d.proof);
        if (!r)
            throw std::logic_error("internal error: extracted proof fails validation: " +
                                   r.error);
        d.verdict = Verdict::Proved;
    } else {
        ExtractedModel em = strategy_to_model(outcome.strategy);
        if (sequent_holds_at(em.model, em.state, s))
            throw std::logic_error(
                "internal error: extracted countermodel does not refute the sequent");
        d.model = std::move(em.model);
        d.model_state = em.state;
        d.verdict = Verdict::Refuted;
    }
    return d;
}

}  // namespace tpdl
