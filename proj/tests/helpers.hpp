// helpers.hpp -- shared test utilities: seeded random term generators, an
// exhaustive small-sequent corpus, and an independent trace-condition oracle
// the cyclic checker is compared against.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tpdl/cyclic.hpp"
#include "tpdl/kripke.hpp"

namespace helpers {

using namespace tpdl;

// Deterministic term generator.  formula(budget) / program(budget) produce a
// term of exactly that length, so sampling a length first gives full control
// over size distributions.
struct Gen {
    std::mt19937 rng;
    bool allow_revbox = true;
    std::vector<std::string> props = {"p", "q", "r"};
    std::vector<std::string> atoms = {"a", "b"};

    explicit Gen(uint32_t seed, bool revbox = true) : rng(seed), allow_revbox(revbox) {}

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    const Formula* formula(int budget) {
        if (budget <= 1) return pick(4) == 0 ? f_false() : f_prop(props[pick((int)props.size())]);
        if (budget == 2) {
            // Only boxes over length-1 programs fit.
            const Program* a = p_atom(atoms[pick((int)atoms.size())]);
            return allow_revbox && pick(3) == 0 ? f_revbox(a, formula(1)) : f_box(a, formula(1));
        }
        switch (pick(allow_revbox ? 8 : 6)) {
            case 0:
            case 1:
            case 2: {
                int l = 1 + pick(budget - 2);
                return f_implies(formula(l), formula(budget - 1 - l));
            }
            case 6:
            case 7: {
                int s = 1 + pick(budget - 1);
                return f_revbox(program(s), formula(budget - s));
            }
            default: {
                int s = 1 + pick(budget - 1);
                return f_box(program(s), formula(budget - s));
            }
        }
    }

    const Program* program(int budget) {
        if (budget <= 1) return p_atom(atoms[pick((int)atoms.size())]);
        if (budget == 2) return pick(2) == 0 ? p_star(program(1)) : p_test(formula(1));
        switch (pick(6)) {
            case 0: return p_star(program(budget - 1));
            case 1: return p_test(formula(budget - 1));
            case 2:
            case 3: {
                int l = 1 + pick(budget - 2);
                return p_seq(program(l), program(budget - 1 - l));
            }
            default: {
                int l = 1 + pick(budget - 2);
                return p_choice(program(l), program(budget - 1 - l));
            }
        }
    }

    FormulaSet formula_set(int count, int max_len) {
        FormulaSet out;
        for (int i = 0; i < count; ++i) out = fs_insert(out, formula(1 + pick(max_len)));
        return out;
    }

    Sequent sequent(int side_max, int max_len) {
        return Sequent{formula_set(pick(side_max + 1), max_len),
                       formula_set(pick(side_max + 1), max_len)};
    }

    KripkeModel model(int n_states) {
        KripkeModel m;
        for (int i = 0; i < n_states; ++i) m.states.push_back("w" + std::to_string(i + 1));
        m.valuation.resize((size_t)n_states);
        for (const std::string& a : atoms) {
            Rel rel((size_t)n_states, std::vector<bool>((size_t)n_states, false));
            for (int i = 0; i < n_states; ++i)
                for (int j = 0; j < n_states; ++j) rel[(size_t)i][(size_t)j] = pick(3) == 0;
            m.edges.emplace(a, std::move(rel));
        }
        for (int i = 0; i < n_states; ++i)
            for (const std::string& p : props)
                if (pick(2) == 0) m.valuation[(size_t)i].insert(p);
        return m;
    }
};

// ---------------------------------------------------------------------------
// Exhaustive corpora of box-forward terms by exact length.

inline const std::vector<const Formula*>& formulas_of_length(int len);

inline const std::vector<const Program*>& programs_of_length(int len) {
    static std::map<int, std::vector<const Program*>> memo;
    auto it = memo.find(len);
    if (it != memo.end()) return it->second;
    std::vector<const Program*> out;
    if (len == 1) {
        out.push_back(p_atom("a"));
    } else if (len >= 2) {
        for (const Program* sub : programs_of_length(len - 1)) out.push_back(p_star(sub));
        for (const Formula* f : formulas_of_length(len - 1)) out.push_back(p_test(f));
        for (int l = 1; l <= len - 2; ++l)
            for (const Program* lhs : programs_of_length(l))
                for (const Program* rhs : programs_of_length(len - 1 - l)) {
                    out.push_back(p_seq(lhs, rhs));
                    out.push_back(p_choice(lhs, rhs));
                }
    }
    return memo.emplace(len, std::move(out)).first->second;
}

// Every PDL formula of exactly this length over the proposition p and the
// atomic program a.
inline const std::vector<const Formula*>& formulas_of_length(int len) {
    static std::map<int, std::vector<const Formula*>> memo;
    auto it = memo.find(len);
    if (it != memo.end()) return it->second;
    std::vector<const Formula*> out;
    if (len == 1) {
        out.push_back(f_false());
        out.push_back(f_prop("p"));
    } else if (len >= 2) {
        for (int l = 1; l <= len - 2; ++l)
            for (const Formula* lhs : formulas_of_length(l))
                for (const Formula* rhs : formulas_of_length(len - 1 - l))
                    out.push_back(f_implies(lhs, rhs));
        for (int s = 1; s <= len - 1; ++s)
            for (const Program* prog : programs_of_length(s))
                for (const Formula* body : formulas_of_length(len - s))
                    out.push_back(f_box(prog, body));
    }
    return memo.emplace(len, std::move(out)).first->second;
}

// Every sequent whose two sides together spend at most max_total length
// (formulas on both sides are charged twice).  Deterministic order.
inline std::vector<Sequent> sequents_up_to_total_length(int max_total) {
    std::vector<const Formula*> pool;
    for (int len = 1; len <= max_total; ++len)
        for (const Formula* f : formulas_of_length(len)) pool.push_back(f);

    std::vector<Sequent> out;
    std::vector<const Formula*> ant, con;
    auto rec = [&](auto&& self, size_t i, int remaining) -> void {
        if (i == pool.size() || pool[i]->len > remaining) {
            out.push_back(Sequent{default_schedule(ant), default_schedule(con)});
            return;
        }
        int l = pool[i]->len;
        self(self, i + 1, remaining);
        ant.push_back(pool[i]);
        self(self, i + 1, remaining - l);
        if (2 * l <= remaining) {
            con.push_back(pool[i]);
            self(self, i + 1, remaining - 2 * l);
            con.pop_back();
        }
        ant.pop_back();
        con.push_back(pool[i]);
        self(self, i + 1, remaining - l);
        con.pop_back();
    };
    rec(rec, 0, max_total);
    return out;
}

// ---------------------------------------------------------------------------
// Closedness checklist.  A Fischer-Ladner closed set satisfies eleven
// decomposition facts; the checker reports each one separately so failures
// name the clause that broke.

inline std::vector<bool> closedness_items(const FormulaSet& x) {
    std::vector<bool> ok(11, true);
    auto require = [&](int item, const Formula* f) {
        if (!fs_contains(x, f)) ok[(size_t)item] = false;
    };
    for (const Formula* f : x) {
        if (f->kind == FKind::Implies) {
            require(0, f->lhs);
            require(0, f->rhs);
            continue;
        }
        if (f->kind != FKind::Box && f->kind != FKind::RevBox) continue;
        bool rev = f->kind == FKind::RevBox;
        auto rebox = [rev](const Program* p, const Formula* g) {
            return rev ? f_revbox(p, g) : f_box(p, g);
        };
        require(1, f->body);
        switch (f->prog->kind) {
            case PKind::Seq:
                if (!rev) {
                    require(2, f_box(f->prog->lhs, f_box(f->prog->rhs, f->body)));
                    require(3, f_box(f->prog->rhs, f->body));
                } else {
                    require(4, f_revbox(f->prog->rhs, f_revbox(f->prog->lhs, f->body)));
                    require(5, f_revbox(f->prog->lhs, f->body));
                }
                break;
            case PKind::Choice:
                require(rev ? 7 : 6, rebox(f->prog->lhs, f->body));
                require(rev ? 7 : 6, rebox(f->prog->rhs, f->body));
                break;
            case PKind::Star:
                require(rev ? 9 : 8, rebox(f->prog->sub, f));
                break;
            case PKind::Test:
                require(10, f->prog->test);
                break;
            case PKind::Atom:
                break;
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// Independent trace-condition oracle.
//
// A cycle relation is the composition of edge traces around some cycle; the
// condition holds iff every such relation R has a progressing diagonal in
// some power R^k -- that is the trace that survives repeating the cycle
// forever.  This enumerates cycle relations per start node by breadth-first
// search over (node, composed relation) pairs, with no idempotency shortcut,
// so it exercises none of the checker's machinery.

using TraceRel = std::map<std::pair<const Formula*, const Formula*>, bool>;

inline TraceRel rel_of_traces(const TraceRelation& traces) {
    TraceRel r;
    for (const TracePair& t : traces) {
        auto [it, fresh] = r.emplace(std::make_pair(t.from, t.to), t.progress);
        if (!fresh) it->second = it->second || t.progress;
    }
    return r;
}

inline TraceRel rel_compose(const TraceRel& a, const TraceRel& b) {
    TraceRel r;
    for (const auto& [ab_pair, p1] : a)
        for (const auto& [bc_pair, p2] : b) {
            if (ab_pair.second != bc_pair.first) continue;
            auto [it, fresh] =
                r.emplace(std::make_pair(ab_pair.first, bc_pair.second), p1 || p2);
            if (!fresh) it->second = it->second || (p1 || p2);
        }
    return r;
}

inline bool rel_has_progressing_power(const TraceRel& rel) {
    std::set<TraceRel> seen;
    TraceRel power = rel;
    while (seen.insert(power).second) {
        for (const auto& [pair, progress] : power)
            if (pair.first == pair.second && progress) return true;
        power = rel_compose(power, rel);
    }
    return false;
}

inline bool gtc_oracle(const DerivationGraph& g) {
    int n = (int)g.sequents.size();
    for (int start = 0; start < n; ++start) {
        std::set<std::pair<int, TraceRel>> visited;
        std::vector<std::pair<int, TraceRel>> queue;
        for (const auto& e : g.edges[(size_t)start]) {
            auto state = std::make_pair(e.target, rel_of_traces(e.traces));
            if (visited.insert(state).second) queue.push_back(state);
        }
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            auto [node, rel] = queue[qi];
            if (node == start && !rel_has_progressing_power(rel)) return false;
            for (const auto& e : g.edges[(size_t)node]) {
                auto state = std::make_pair(e.target, rel_compose(rel, rel_of_traces(e.traces)));
                if (visited.insert(state).second) queue.push_back(state);
            }
        }
    }
    return true;
}

}  // namespace helpers
