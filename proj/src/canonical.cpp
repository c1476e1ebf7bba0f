#include "tpdl/canonical.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "tpdl/closure.hpp"

namespace tpdl {

ValidityOracle::Answer ValidityOracle::query(const Sequent& s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    ++queries_;
    CountermodelSearch found = find_countermodel_bounded(s, bound_, max_models_);
    Answer a;
    switch (found.status) {
        case CountermodelSearch::Status::Found: a = Answer::Invalid; break;
        case CountermodelSearch::Status::NoneWithinBound: a = Answer::Valid; break;
        default: a = Answer::Unknown; break;
    }
    memo_.emplace(s, a);
    return a;
}

Sequent saturate(const Sequent& s, ValidityOracle& oracle) {
    if (oracle.query(s) != ValidityOracle::Answer::Invalid)
        throw std::runtime_error("saturate: input sequent has no countermodel within bound " +
                                 std::to_string(oracle.bound()));
    FormulaSet xi = fl_set(sequent_formulas(s));
    Sequent cur = s;
    for (const Formula* f : xi) {
        if (fs_contains(cur.ant, f) || fs_contains(cur.con, f)) continue;
        Sequent right{cur.ant, fs_insert(cur.con, f)};
        if (oracle.query(right) == ValidityOracle::Answer::Invalid) {
            cur = right;
        } else {
            cur.ant = fs_insert(cur.ant, f);
        }
    }
    // A state refuting cur makes each added formula either true or false, so
    // one of the two extensions keeps the very same countermodel.  Reaching
    // this error means the oracle answered inconsistently (e.g. ran out of
    // budget mid-way).
    if (oracle.query(cur) != ValidityOracle::Answer::Invalid)
        throw std::runtime_error("saturate: saturation lost invalidity at " + render_sequent(cur));
    return cur;
}

std::optional<CanonicalModel> canonical_counter_model(const Sequent& s, ValidityOracle& oracle) {
    ValidityOracle::Answer first = oracle.query(s);
    if (first == ValidityOracle::Answer::Valid) return std::nullopt;
    if (first == ValidityOracle::Answer::Unknown)
        throw std::runtime_error("canonical_counter_model: oracle budget exhausted on input");

    CanonicalModel out;
    out.saturated = saturate(s, oracle);
    FormulaSet xi = fs_union(out.saturated.ant, out.saturated.con);

    // States: the divisions of the closure the oracle cannot refute, i.e.
    // those with a countermodel.  The saturated sequent itself is one of
    // them and becomes the designated state.
    for (const Sequent& d : divisions(xi)) {
        if (oracle.query(d) != ValidityOracle::Answer::Invalid) continue;
        if (d == out.saturated) out.designated = static_cast<int>(out.state_sequents.size());
        out.state_sequents.push_back(d);
    }
    if (out.designated < 0)
        throw std::runtime_error("canonical_counter_model: saturated division not among states");

    int n = static_cast<int>(out.state_sequents.size());
    for (int i = 0; i < n; ++i) out.model.states.push_back("w" + std::to_string(i + 1));

    std::set<std::string> atoms;
    for (const Formula* f : xi) collect_atom_programs(f, atoms);
    for (const std::string& a : atoms) {
        Rel rel(n, std::vector<bool>(n, false));
        bool any = false;
        for (int i = 0; i < n; ++i) {
            const Sequent& src = out.state_sequents[static_cast<size_t>(i)];
            for (int j = 0; j < n; ++j) {
                const Formula* step =
                    f_box(p_atom(a), char_wff(out.state_sequents[static_cast<size_t>(j)]));
                Sequent probe{src.ant, fs_insert(src.con, step)};
                if (oracle.query(probe) == ValidityOracle::Answer::Invalid) {
                    rel[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
                    any = true;
                }
            }
        }
        if (any) out.model.edges.emplace(a, std::move(rel));
    }

    out.model.valuation.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (const Formula* f : out.state_sequents[static_cast<size_t>(i)].ant)
            if (f->kind == FKind::Prop)
                out.model.valuation[static_cast<size_t>(i)].insert(f->name);

    ModelChecker mc(out.model);
    if (mc.sequent_holds_at(out.designated, s))
        throw std::runtime_error("canonical_counter_model: model fails to refute input at w" +
                                 std::to_string(out.designated + 1));
    return out;
}

}  // namespace tpdl
