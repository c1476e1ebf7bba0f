// kripke.hpp -- Kripke models, the compositional model checker, and the
// bounded countermodel search used as the semantic validity oracle.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tpdl/sequent.hpp"

namespace tpdl {

// Rel[w][v] == true means there is an edge from state w to state v.
using Rel = std::vector<std::vector<bool>>;

struct KripkeModel {
    std::vector<std::string> states;               // index is the state id
    std::map<std::string, Rel> edges;              // atomic program -> relation
    std::vector<std::set<std::string>> valuation;  // props true at each state

    int size() const { return static_cast<int>(states.size()); }
    int state_index(const std::string& name) const;  // -1 when unknown
};

// Text format, one directive per line ('#' starts a comment):
//   states: w1 w2 w3
//   prog a: w1->w2 w2->w2
//   val w1: p q
// Programs and valuations not mentioned are empty.
KripkeModel parse_model(const std::string& text);
std::string render_model(const KripkeModel& m);

// Evaluates formulas and program relations over one model, memoizing per
// interned handle.  Composite programs: sequence composes, choice unions,
// star takes the reflexive-transitive closure, and a test ?f keeps the
// diagonal at states satisfying f.  [-prog]f quantifies over predecessors.
class ModelChecker {
  public:
    explicit ModelChecker(const KripkeModel& m) : model_(m) {}

    const std::vector<bool>& sat(const Formula* f);
    const Rel& program_relation(const Program* p);
    bool satisfies(int state, const Formula* f);
    bool sequent_holds_at(int state, const Sequent& s);

  private:
    const KripkeModel& model_;
    std::unordered_map<const Formula*, std::vector<bool>> formula_memo_;
    std::unordered_map<const Program*, Rel> program_memo_;
};

bool satisfies(const KripkeModel& m, int state, const Formula* f);
bool sequent_holds_at(const KripkeModel& m, int state, const Sequent& s);

// Exhaustive search for a model and state where the sequent fails, over all
// models with up to max_states states whose propositions and atomic programs
// are the ones occurring in the sequent.  The enumeration order is fixed:
// state count ascending, then the edge assignment (bits ordered by atom,
// source, target), then the valuation (bits by prop, state), and finally the
// designated state, so the first hit is deterministic.  max_models == 0
// means no budget.
struct CountermodelSearch {
    enum class Status { Found, NoneWithinBound, BudgetExhausted };
    Status status = Status::NoneWithinBound;
    KripkeModel model;  // meaningful only when status == Found
    int state = -1;
    uint64_t models_checked = 0;
};
CountermodelSearch find_countermodel_bounded(const Sequent& s, int max_states,
                                             uint64_t max_models = 0);

}  // namespace tpdl
