// kripke.cpp -- model checking and the exhaustive bounded countermodel search.

#include "tpdl/kripke.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tpdl {

int KripkeModel::state_index(const std::string& name) const {
    for (size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<int>(i);
    return -1;
}

const std::vector<bool>& ModelChecker::sat(const Formula* f) {
    auto it = formula_memo_.find(f);
    if (it != formula_memo_.end()) return it->second;

    int n = model_.size();
    std::vector<bool> v(n, false);
    switch (f->kind) {
        case FKind::False:
            break;
        case FKind::Prop:
            for (int w = 0; w < n; ++w)
                v[w] = model_.valuation[w].count(f->name) != 0;
            break;
        case FKind::Implies: {
            const std::vector<bool>& lhs = sat(f->lhs);
            const std::vector<bool>& rhs = sat(f->rhs);
            for (int w = 0; w < n; ++w) v[w] = !lhs[w] || rhs[w];
            break;
        }
        case FKind::Box: {
            const Rel& r = program_relation(f->prog);
            const std::vector<bool>& body = sat(f->body);
            for (int w = 0; w < n; ++w) {
                bool ok = true;
                for (int u = 0; u < n && ok; ++u)
                    if (r[w][u] && !body[u]) ok = false;
                v[w] = ok;
            }
            break;
        }
        case FKind::RevBox: {
            const Rel& r = program_relation(f->prog);
            const std::vector<bool>& body = sat(f->body);
            for (int w = 0; w < n; ++w) {
                bool ok = true;
                for (int u = 0; u < n && ok; ++u)
                    if (r[u][w] && !body[u]) ok = false;
                v[w] = ok;
            }
            break;
        }
    }
    return formula_memo_.emplace(f, std::move(v)).first->second;
}

const Rel& ModelChecker::program_relation(const Program* p) {
    auto it = program_memo_.find(p);
    if (it != program_memo_.end()) return it->second;

    int n = model_.size();
    Rel r(n, std::vector<bool>(n, false));
    switch (p->kind) {
        case PKind::Atom: {
            auto edge = model_.edges.find(p->name);
            if (edge != model_.edges.end()) r = edge->second;
            break;
        }
        case PKind::Seq: {
            const Rel& a = program_relation(p->lhs);
            const Rel& b = program_relation(p->rhs);
            for (int w = 0; w < n; ++w)
                for (int u = 0; u < n; ++u)
                    if (a[w][u])
                        for (int v = 0; v < n; ++v)
                            if (b[u][v]) r[w][v] = true;
            break;
        }
        case PKind::Choice: {
            const Rel& a = program_relation(p->lhs);
            const Rel& b = program_relation(p->rhs);
            for (int w = 0; w < n; ++w)
                for (int v = 0; v < n; ++v) r[w][v] = a[w][v] || b[w][v];
            break;
        }
        case PKind::Star: {
            // Reflexive-transitive closure of the sub-relation (Warshall).
            r = program_relation(p->sub);
            for (int w = 0; w < n; ++w) r[w][w] = true;
            for (int k = 0; k < n; ++k)
                for (int w = 0; w < n; ++w)
                    if (r[w][k])
                        for (int v = 0; v < n; ++v)
                            if (r[k][v]) r[w][v] = true;
            break;
        }
        case PKind::Test: {
            const std::vector<bool>& t = sat(p->test);
            for (int w = 0; w < n; ++w) r[w][w] = t[w];
            break;
        }
    }
    return program_memo_.emplace(p, std::move(r)).first->second;
}

bool ModelChecker::satisfies(int state, const Formula* f) { return sat(f)[state]; }

bool ModelChecker::sequent_holds_at(int state, const Sequent& s) {
    for (const Formula* g : s.ant)
        if (!sat(g)[state]) return true;  // antecedent not fully true
    for (const Formula* d : s.con)
        if (sat(d)[state]) return true;
    return false;
}

bool satisfies(const KripkeModel& m, int state, const Formula* f) {
    ModelChecker mc(m);
    return mc.satisfies(state, f);
}

bool sequent_holds_at(const KripkeModel& m, int state, const Sequent& s) {
    ModelChecker mc(m);
    return mc.sequent_holds_at(state, s);
}

namespace {

std::runtime_error model_error(int line_no, const std::string& msg) {
    return std::runtime_error("model file, line " + std::to_string(line_no) + ": " + msg);
}

bool valid_state_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_'))
            return false;
    return true;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

KripkeModel parse_model(const std::string& text) {
    KripkeModel m;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_states = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (size_t hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::vector<std::string> tokens = split_ws(line);
        if (tokens.empty()) continue;

        if (tokens[0] == "states:") {
            if (have_states) throw model_error(line_no, "duplicate states: line");
            for (size_t i = 1; i < tokens.size(); ++i) {
                if (!valid_state_name(tokens[i]))
                    throw model_error(line_no, "bad state name \"" + tokens[i] + "\"");
                if (m.state_index(tokens[i]) >= 0)
                    throw model_error(line_no, "duplicate state \"" + tokens[i] + "\"");
                m.states.push_back(tokens[i]);
            }
            if (m.states.empty()) throw model_error(line_no, "model needs at least one state");
            m.valuation.resize(m.states.size());
            have_states = true;
            continue;
        }
        if (!have_states)
            throw model_error(line_no, "the states: line must come first");

        if (tokens[0] == "prog") {
            if (tokens.size() < 2 || tokens[1].empty() || tokens[1].back() != ':')
                throw model_error(line_no, "expected \"prog <name>:\"");
            std::string name = tokens[1].substr(0, tokens[1].size() - 1);
            Rel& r = m.edges.try_emplace(name, m.size(), std::vector<bool>(m.size(), false))
                         .first->second;
            for (size_t i = 2; i < tokens.size(); ++i) {
                size_t arrow = tokens[i].find("->");
                if (arrow == std::string::npos)
                    throw model_error(line_no, "bad edge \"" + tokens[i] + "\" (want a->b)");
                int from = m.state_index(tokens[i].substr(0, arrow));
                int to = m.state_index(tokens[i].substr(arrow + 2));
                if (from < 0 || to < 0)
                    throw model_error(line_no, "unknown state in edge \"" + tokens[i] + "\"");
                r[from][to] = true;
            }
            continue;
        }
        if (tokens[0] == "val") {
            if (tokens.size() < 2 || tokens[1].empty() || tokens[1].back() != ':')
                throw model_error(line_no, "expected \"val <state>:\"");
            int w = m.state_index(tokens[1].substr(0, tokens[1].size() - 1));
            if (w < 0) throw model_error(line_no, "unknown state in val line");
            for (size_t i = 2; i < tokens.size(); ++i)
                m.valuation[w].insert(tokens[i]);
            continue;
        }
        throw model_error(line_no, "unrecognized directive \"" + tokens[0] + "\"");
    }
    if (!have_states) throw std::runtime_error("model file has no states: line");
    return m;
}

std::string render_model(const KripkeModel& m) {
    std::string out = "states:";
    for (const std::string& s : m.states) out += " " + s;
    out += "\n";
    for (const auto& [name, r] : m.edges) {
        std::string line = "prog " + name + ":";
        bool any = false;
        for (int w = 0; w < m.size(); ++w)
            for (int v = 0; v < m.size(); ++v)
                if (r[w][v]) {
                    line += " " + m.states[w] + "->" + m.states[v];
                    any = true;
                }
        if (any) out += line + "\n";
    }
    for (int w = 0; w < m.size(); ++w) {
        if (m.valuation[w].empty()) continue;
        std::string line = "val " + m.states[w] + ":";
        for (const std::string& p : m.valuation[w]) line += " " + p;
        out += line + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bounded countermodel search.  Small models are evaluated with bitmask
// columns (one uint32_t per formula, bit w = true at state w) over a
// topologically ordered list of subterms, so a model costs a few dozen word
// operations instead of a ModelChecker allocation.

namespace {

constexpr int kMaxFastStates = 12;

struct EvalPlan {
    // Mixed evaluation order; each step refers to either a formula or a
    // program whose operands appear earlier.
    struct Step {
        bool is_prog;
        const Formula* f = nullptr;
        const Program* p = nullptr;
    };
    std::vector<Step> order;
    std::unordered_map<const Formula*, int> fidx;
    std::unordered_map<const Program*, int> pidx;
    std::vector<std::string> props;  // sorted
    std::vector<std::string> atoms;  // sorted
    std::unordered_map<std::string, int> prop_index;
    std::unordered_map<std::string, int> atom_index;

    void add_formula(const Formula* f) {
        if (fidx.count(f)) return;
        switch (f->kind) {
            case FKind::False:
            case FKind::Prop:
                break;
            case FKind::Implies:
                add_formula(f->lhs);
                add_formula(f->rhs);
                break;
            case FKind::Box:
            case FKind::RevBox:
                add_program(f->prog);
                add_formula(f->body);
                break;
        }
        fidx.emplace(f, static_cast<int>(fidx.size()));
        order.push_back({false, f, nullptr});
    }

    void add_program(const Program* p) {
        if (pidx.count(p)) return;
        switch (p->kind) {
            case PKind::Atom:
                break;
            case PKind::Seq:
            case PKind::Choice:
                add_program(p->lhs);
                add_program(p->rhs);
                break;
            case PKind::Star:
                add_program(p->sub);
                break;
            case PKind::Test:
                add_formula(p->test);
                break;
        }
        pidx.emplace(p, static_cast<int>(pidx.size()));
        order.push_back({true, nullptr, p});
    }
};

struct FastModel {
    int n = 0;
    // rows[atom][w] = successor mask of w; vals[prop] = mask of states
    std::vector<std::vector<uint32_t>> atom_rows;
    std::vector<uint32_t> prop_masks;
};

class FastEvaluator {
  public:
    FastEvaluator(const EvalPlan& plan, int n)
        : plan_(plan),
          n_(n),
          full_((n >= 32) ? 0xffffffffu : ((1u << n) - 1)),
          fsat_(plan.fidx.size()),
          prel_(plan.pidx.size(), std::vector<uint32_t>(n)) {}

    void run(const FastModel& m) {
        for (const EvalPlan::Step& step : plan_.order) {
            if (step.is_prog)
                eval_program(step.p, m);
            else
                eval_formula(step.f, m);
        }
    }

    uint32_t sat_mask(const Formula* f) const { return fsat_[plan_.fidx.at(f)]; }

  private:
    void eval_formula(const Formula* f, const FastModel& m) {
        uint32_t out = 0;
        switch (f->kind) {
            case FKind::False:
                break;
            case FKind::Prop:
                out = m.prop_masks[plan_.prop_index.at(f->name)];
                break;
            case FKind::Implies:
                out = (~fsat_[plan_.fidx.at(f->lhs)] | fsat_[plan_.fidx.at(f->rhs)]) & full_;
                break;
            case FKind::Box: {
                const std::vector<uint32_t>& rows = prel_[plan_.pidx.at(f->prog)];
                uint32_t body = fsat_[plan_.fidx.at(f->body)];
                for (int w = 0; w < n_; ++w)
                    if ((rows[w] & ~body) == 0) out |= 1u << w;
                break;
            }
            case FKind::RevBox: {
                const std::vector<uint32_t>& rows = prel_[plan_.pidx.at(f->prog)];
                uint32_t body = fsat_[plan_.fidx.at(f->body)];
                out = full_;
                for (int v = 0; v < n_; ++v)
                    if (!((body >> v) & 1)) out &= ~rows[v];
                break;
            }
        }
        fsat_[plan_.fidx.at(f)] = out;
    }

    void eval_program(const Program* p, const FastModel& m) {
        std::vector<uint32_t>& rows = prel_[plan_.pidx.at(p)];
        switch (p->kind) {
            case PKind::Atom:
                rows = m.atom_rows[plan_.atom_index.at(p->name)];
                break;
            case PKind::Seq: {
                const std::vector<uint32_t>& a = prel_[plan_.pidx.at(p->lhs)];
                const std::vector<uint32_t>& b = prel_[plan_.pidx.at(p->rhs)];
                for (int w = 0; w < n_; ++w) {
                    uint32_t acc = 0;
                    uint32_t src = a[w];
                    while (src) {
                        int u = __builtin_ctz(src);
                        src &= src - 1;
                        acc |= b[u];
                    }
                    rows[w] = acc;
                }
                break;
            }
            case PKind::Choice: {
                const std::vector<uint32_t>& a = prel_[plan_.pidx.at(p->lhs)];
                const std::vector<uint32_t>& b = prel_[plan_.pidx.at(p->rhs)];
                for (int w = 0; w < n_; ++w) rows[w] = a[w] | b[w];
                break;
            }
            case PKind::Star: {
                rows = prel_[plan_.pidx.at(p->sub)];
                for (int w = 0; w < n_; ++w) rows[w] |= 1u << w;
                for (int k = 0; k < n_; ++k)
                    for (int w = 0; w < n_; ++w)
                        if ((rows[w] >> k) & 1) rows[w] |= rows[k];
                break;
            }
            case PKind::Test: {
                uint32_t t = fsat_[plan_.fidx.at(p->test)];
                for (int w = 0; w < n_; ++w) rows[w] = ((t >> w) & 1) ? (1u << w) : 0;
                break;
            }
        }
    }

    const EvalPlan& plan_;
    int n_;
    uint32_t full_;
    std::vector<uint32_t> fsat_;
    std::vector<std::vector<uint32_t>> prel_;
};

// LSB-first odometer; returns false once all combinations have been visited.
bool advance(std::vector<uint8_t>& bits) {
    for (uint8_t& b : bits) {
        if (!b) {
            b = 1;
            return true;
        }
        b = 0;
    }
    return false;
}

KripkeModel materialize(const FastModel& fm, const EvalPlan& plan) {
    KripkeModel m;
    for (int w = 0; w < fm.n; ++w) m.states.push_back("w" + std::to_string(w + 1));
    m.valuation.resize(fm.n);
    for (size_t ai = 0; ai < plan.atoms.size(); ++ai) {
        bool any = false;
        Rel r(fm.n, std::vector<bool>(fm.n, false));
        for (int w = 0; w < fm.n; ++w)
            for (int v = 0; v < fm.n; ++v)
                if ((fm.atom_rows[ai][w] >> v) & 1) r[w][v] = any = true;
        if (any) m.edges.emplace(plan.atoms[ai], std::move(r));
    }
    for (size_t pi = 0; pi < plan.props.size(); ++pi)
        for (int w = 0; w < fm.n; ++w)
            if ((fm.prop_masks[pi] >> w) & 1) m.valuation[w].insert(plan.props[pi]);
    return m;
}

}  // namespace

CountermodelSearch find_countermodel_bounded(const Sequent& s, int max_states,
                                             uint64_t max_models) {
    if (max_states < 1)
        throw std::invalid_argument("countermodel search needs a bound of at least 1");
    if (max_states > kMaxFastStates)
        throw std::invalid_argument("countermodel search supports at most " +
                                    std::to_string(kMaxFastStates) + " states");

    EvalPlan plan;
    std::set<std::string> prop_set, atom_set;
    for (const Formula* f : sequent_formulas(s)) {
        plan.add_formula(f);
        collect_props(f, prop_set);
        collect_atom_programs(f, atom_set);
    }
    plan.props.assign(prop_set.begin(), prop_set.end());
    plan.atoms.assign(atom_set.begin(), atom_set.end());
    for (size_t i = 0; i < plan.props.size(); ++i) plan.prop_index[plan.props[i]] = i;
    for (size_t i = 0; i < plan.atoms.size(); ++i) plan.atom_index[plan.atoms[i]] = i;

    CountermodelSearch result;
    for (int n = 1; n <= max_states; ++n) {
        FastEvaluator ev(plan, n);
        FastModel fm;
        fm.n = n;
        fm.atom_rows.assign(plan.atoms.size(), std::vector<uint32_t>(n, 0));
        fm.prop_masks.assign(plan.props.size(), 0);

        std::vector<uint8_t> edge_bits(plan.atoms.size() * n * n, 0);
        std::vector<uint8_t> val_bits(plan.props.size() * n, 0);
        do {
            // Bit layout: ((atom * n) + from) * n + to.
            for (size_t ai = 0; ai < plan.atoms.size(); ++ai)
                for (int w = 0; w < n; ++w) {
                    uint32_t row = 0;
                    for (int v = 0; v < n; ++v)
                        if (edge_bits[(ai * n + w) * n + v]) row |= 1u << v;
                    fm.atom_rows[ai][w] = row;
                }
            std::fill(val_bits.begin(), val_bits.end(), 0);
            do {
                for (size_t pi = 0; pi < plan.props.size(); ++pi) {
                    uint32_t mask = 0;
                    for (int w = 0; w < n; ++w)
                        if (val_bits[pi * n + w]) mask |= 1u << w;
                    fm.prop_masks[pi] = mask;
                }

                ++result.models_checked;
                ev.run(fm);
                uint32_t ant_true = (n >= 32) ? 0xffffffffu : ((1u << n) - 1);
                for (const Formula* g : s.ant) ant_true &= ev.sat_mask(g);
                uint32_t con_true = 0;
                for (const Formula* d : s.con) con_true |= ev.sat_mask(d);
                uint32_t failing = ant_true & ~con_true;
                if (failing) {
                    result.status = CountermodelSearch::Status::Found;
                    result.model = materialize(fm, plan);
                    result.state = __builtin_ctz(failing);
                    return result;
                }
                if (max_models && result.models_checked >= max_models) {
                    result.status = CountermodelSearch::Status::BudgetExhausted;
                    return result;
                }
            } while (advance(val_bits));
        } while (advance(edge_bits));
    }
    result.status = CountermodelSearch::Status::NoneWithinBound;
    return result;
}

}  // namespace tpdl
