// cyclic.cpp -- trace relations, proof flattening, and the global trace
// condition via composition closure.

#include "tpdl/cyclic.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "tpdl/closure.hpp"

namespace tpdl {

namespace {

bool trace_less(const TracePair& a, const TracePair& b) {
    if (a.from != b.from) return schedule_less(a.from, b.from);
    if (a.to != b.to) return schedule_less(a.to, b.to);
    return a.progress > b.progress;  // progressing first, so dedup keeps it
}

}  // namespace

TraceRelation normalize_traces(TraceRelation r) {
    std::sort(r.begin(), r.end(), trace_less);
    r.erase(std::unique(r.begin(), r.end(),
                        [](const TracePair& a, const TracePair& b) {
                            return a.from == b.from && a.to == b.to;
                        }),
            r.end());
    return r;
}

TraceRelation compose_traces(const TraceRelation& a, const TraceRelation& b) {
    TraceRelation out;
    for (const TracePair& p : a)
        for (const TracePair& q : b)
            if (p.to == q.from)
                out.push_back({p.from, q.to, p.progress || q.progress});
    return normalize_traces(std::move(out));
}

TraceRelation trace_relation(const Sequent& conclusion, const Sequent& premise,
                             int premise_index, const ResolvedRule& rule) {
    TraceRelation out;
    switch (rule.rule) {
        case RuleName::BoxModal:
        case RuleName::RevBoxModal:
        case RuleName::K:
            // The modal step moves to another world; only the principal box
            // survives, as its body.
            out.push_back({rule.principal, rule.principal->body, false});
            return normalize_traces(std::move(out));
        default:
            break;
    }
    for (const Formula* d : fs_intersection(conclusion.con, premise.con))
        out.push_back({d, d, false});
    const Formula* pr = rule.principal;
    switch (rule.rule) {
        case RuleName::ImpR:
            out.push_back({pr, pr->rhs, false});
            break;
        case RuleName::SeqR:
            out.push_back({pr, f_box(pr->prog->lhs, f_box(pr->prog->rhs, pr->body)), false});
            break;
        case RuleName::ChoiceR:
            out.push_back(
                {pr, f_box(premise_index == 0 ? pr->prog->lhs : pr->prog->rhs, pr->body),
                 false});
            break;
        case RuleName::TestR:
            out.push_back({pr, pr->body, false});
            break;
        case RuleName::Cs:
            if (premise_index == 0)
                out.push_back({pr, pr->body, false});
            else
                out.push_back({pr, f_box(pr->prog->sub, pr), true});  // unfolding step
            break;
        default:
            break;
    }
    return normalize_traces(std::move(out));
}

// ---------------------------------------------------------------------------
// Flattening.

CheckResult build_derivation_graph(System sys, const PreProof& proof,
                                   DerivationGraph& out) {
    CheckResult r = check_proof(sys, proof);
    if (!r) return r;

    out = DerivationGraph{};
    std::map<const DerivationNode*, int> ids;
    std::vector<const DerivationNode*> interior;

    // Preorder over interior nodes.
    std::vector<const DerivationNode*> stack{proof.root.get()};
    while (!stack.empty()) {
        const DerivationNode* n = stack.back();
        stack.pop_back();
        if (n->is_bud) continue;
        ids.emplace(n, static_cast<int>(interior.size()));
        interior.push_back(n);
        for (auto it = n->children.rbegin(); it != n->children.rend(); ++it)
            stack.push_back(it->get());
    }

    out.sequents.reserve(interior.size());
    for (const DerivationNode* n : interior) out.sequents.push_back(n->seq);
    out.edges.resize(interior.size());

    for (const DerivationNode* n : interior) {
        std::vector<Sequent> premises;
        for (const NodePtr& ch : n->children) premises.push_back(ch->seq);
        ResolvedRule resolved;
        CheckResult rc = check_rule_instance(sys, n->rule, n->seq, premises, n->principal,
                                             n->cut_formula, &resolved);
        if (!rc) return rc;  // unreachable after check_proof
        for (size_t i = 0; i < n->children.size(); ++i) {
            const DerivationNode* ch = n->children[i].get();
            const DerivationNode* target = ch;
            if (ch->is_bud)
                target = node_at_path(proof, proof.companions.at(ch->bud_id));
            out.edges[ids.at(n)].push_back(
                {ids.at(target),
                 trace_relation(n->seq, ch->seq, static_cast<int>(i), resolved)});
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Global trace condition.

namespace {

bool has_progressing_diagonal(const TraceRelation& r) {
    for (const TracePair& p : r)
        if (p.from == p.to && p.progress) return true;
    return false;
}

// Composition-closure item: the relation realized by some concrete path
// from `from` to `to`; provenance reconstructs that path.
struct Item {
    int from;
    int to;
    TraceRelation rel;
    int prev;       // index of the item this extends, -1 for a single edge
    int last_node;  // == to; kept for path reconstruction
};

using RelKey = std::vector<std::tuple<const Formula*, const Formula*, bool>>;

RelKey rel_key(const TraceRelation& r) {
    RelKey k;
    k.reserve(r.size());
    for (const TracePair& p : r) k.emplace_back(p.from, p.to, p.progress);
    return k;
}

std::vector<int> item_path(const std::vector<Item>& items, int idx) {
    std::vector<int> rev;
    while (idx >= 0) {
        rev.push_back(items[idx].last_node);
        int prev = items[idx].prev;
        if (prev < 0) rev.push_back(items[idx].from);
        idx = prev;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

std::vector<int> bfs_path(const DerivationGraph& g, int to) {
    std::vector<int> parent(g.size(), -2);
    parent[0] = -1;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (u == to) break;
        for (const DerivationGraph::Edge& e : g.edges[u])
            if (parent[e.target] == -2) {
                parent[e.target] = u;
                queue.push_back(e.target);
            }
    }
    if (parent[to] == -2) return {};  // cannot happen: every node hangs off the root
    std::vector<int> path;
    for (int u = to; u != -1; u = parent[u]) path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

GtcResult check_gtc(const DerivationGraph& g) {
    std::vector<Item> items;
    std::map<std::tuple<int, int, RelKey>, int> seen;
    std::deque<int> work;

    auto add = [&](Item item) {
        auto key = std::make_tuple(item.from, item.to, rel_key(item.rel));
        if (seen.count(key)) return;
        seen.emplace(std::move(key), static_cast<int>(items.size()));
        work.push_back(static_cast<int>(items.size()));
        items.push_back(std::move(item));
    };

    for (int u = 0; u < g.size(); ++u)
        for (const DerivationGraph::Edge& e : g.edges[u])
            add({u, e.target, e.traces, -1, e.target});

    while (!work.empty()) {
        int idx = work.front();
        work.pop_front();
        Item cur = items[idx];  // copy: items may reallocate below

        if (cur.from == cur.to && compose_traces(cur.rel, cur.rel) == cur.rel &&
            !has_progressing_diagonal(cur.rel)) {
            GtcResult bad;
            bad.holds = false;
            bad.cycle = item_path(items, idx);
            bad.stem = bfs_path(g, cur.from);
            bad.error = "global trace condition fails: the cycle at node " +
                        std::to_string(cur.from) + " (" +
                        render_sequent(g.sequents[cur.from]) +
                        ") admits no infinitely progressing trace";
            return bad;
        }
        for (const DerivationGraph::Edge& e : g.edges[cur.to])
            add({cur.from, e.target, compose_traces(cur.rel, e.traces), idx, e.target});
    }
    return {};
}

CheckResult check_cyclic_proof(System sys, const PreProof& proof) {
    DerivationGraph g;
    CheckResult r = build_derivation_graph(sys, proof, g);
    if (!r) return r;
    GtcResult gr = check_gtc(g);
    if (!gr.holds) return CheckResult::failure(gr.error);
    return {};
}

}  // namespace tpdl
