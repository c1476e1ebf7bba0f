// canonical.hpp -- saturation and the canonical countermodel built from
// divisions of a closed formula set.
//
// Validity is consulted through a bounded-search oracle: a sequent is
// reported Invalid when an exhaustive search finds a countermodel with at
// most `bound` states, Valid when it exhausts the bound.  The constructions
// here only ever *use* Invalid answers, and the finished model is re-checked
// against the input sequent, so a too-small bound can only make construction
// fail loudly, never certify a wrong model.

#pragma once

#include <optional>
#include <unordered_map>

#include "tpdl/kripke.hpp"
#include "tpdl/proof.hpp"

namespace tpdl {

class ValidityOracle {
  public:
    enum class Answer { Valid, Invalid, Unknown };

    explicit ValidityOracle(int bound, uint64_t max_models_per_query = 0)
        : bound_(bound), max_models_(max_models_per_query) {}

    Answer query(const Sequent& s);

    int bound() const { return bound_; }
    uint64_t queries_made() const { return queries_; }

  private:
    int bound_;
    uint64_t max_models_;
    uint64_t queries_ = 0;
    std::unordered_map<Sequent, Answer, SequentHash> memo_;
};

// Extends an oracle-invalid sequent with every missing closure formula, in
// schedule order, preferring the consequent side whenever that stays
// invalid.  The result covers the whole closure of the input and is still
// invalid; throws std::runtime_error if the oracle contradicts itself.
Sequent saturate(const Sequent& s, ValidityOracle& oracle);

// The countermodel over invalid divisions of the saturated sequent's
// closure: states are the divisions the oracle cannot prove, an alpha-edge
// connects two divisions when the source stays invalid with the target's
// characteristic formula boxed into its consequent, and a division makes a
// proposition true exactly when it carries it on the left.
struct CanonicalModel {
    KripkeModel model;
    int designated = -1;                  // the saturated input's division
    std::vector<Sequent> state_sequents;  // aligned with model.states
    Sequent saturated;
};

// Empty when the oracle reports the input valid.  Throws std::runtime_error
// when saturation breaks or the finished model fails to refute the input at
// the designated state.
std::optional<CanonicalModel> canonical_counter_model(const Sequent& s,
                                                      ValidityOracle& oracle);

}  // namespace tpdl
