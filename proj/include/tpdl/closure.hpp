// closure.hpp -- canonical formula sets and the Fischer-Ladner closure.
//
// A FormulaSet is a vector of interned formula handles kept sorted by
// schedule_less (ascending length, ties by rendered text) with no duplicates.
// That canonical layout makes set equality plain vector equality and gives
// every algorithm in the toolkit one fixed iteration order.

#pragma once

#include <initializer_list>
#include <vector>

#include "tpdl/syntax.hpp"

namespace tpdl {

using FormulaSet = std::vector<const Formula*>;

FormulaSet fs_make(std::initializer_list<const Formula*> items);
bool fs_contains(const FormulaSet& s, const Formula* f);
bool fs_intersects(const FormulaSet& a, const FormulaSet& b);
bool fs_subset(const FormulaSet& a, const FormulaSet& b);
FormulaSet fs_insert(FormulaSet s, const Formula* f);
FormulaSet fs_erase(FormulaSet s, const Formula* f);
FormulaSet fs_union(const FormulaSet& a, const FormulaSet& b);
FormulaSet fs_intersection(const FormulaSet& a, const FormulaSet& b);
FormulaSet fs_difference(const FormulaSet& a, const FormulaSet& b);

// Normalizes an arbitrary listing into the canonical (schedule) order.
FormulaSet default_schedule(const FormulaSet& items);

// Fischer-Ladner closure.  fl(f) always contains f, never exceeds length(f)
// in cardinality, and is closed: g in fl(f) implies fl(g) is a subset of
// fl(f).  fl_box(f) is the box-decomposition part: empty unless f is a box
// or converse box, and always a subset of fl(f).
FormulaSet fl(const Formula* f);
FormulaSet fl_box(const Formula* f);
FormulaSet fl_set(const FormulaSet& items);

// The shapes the proof-search game can still decompose: implications and
// boxes over composite programs (sequence, choice, star, test).
bool is_reducible_shape(const Formula* f);
FormulaSet reducible(const FormulaSet& items);

}  // namespace tpdl
