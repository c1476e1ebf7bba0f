// sequent.hpp -- sequents over canonical formula sets.
//
// A sequent "G |- D" holds at a state when some formula of D is true there
// whenever every formula of G is; commas are read as set union, so both
// sides are genuine sets.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "tpdl/closure.hpp"

namespace tpdl {

struct Sequent {
    FormulaSet ant;  // antecedent (G)
    FormulaSet con;  // consequent (D)
    bool operator==(const Sequent&) const = default;
};

struct SequentHash {
    size_t operator()(const Sequent& s) const noexcept;
};

bool sequent_is_pdl(const Sequent& s);
FormulaSet sequent_formulas(const Sequent& s);  // ant ∪ con

// Text format: comma-separated formulas, "|-" between the sides, either side
// possibly empty ("p, q |- r", "|- p", "p |-", "|-").
std::string render_sequent(const Sequent& s);
Sequent parse_sequent(std::string_view text);

}  // namespace tpdl
