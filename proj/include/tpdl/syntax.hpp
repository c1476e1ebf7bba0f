// syntax.hpp -- formula and program ASTs for PDL with converse boxes,
// hash-consed so that structural equality is pointer equality.
//
// Formulas:  false | p | (f -> g) | [prog]f | [-prog]f
// Programs:  a | prog;prog | prog+prog | prog* | ?f
//
// Everything else (~, &, |, <->, true, <prog>f, <-prog>f) is surface sugar
// that the parser and the f_* helpers expand into the core connectives.

#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tpdl {

enum class FKind { False, Prop, Implies, Box, RevBox };
enum class PKind { Atom, Seq, Choice, Star, Test };

struct Program;

// Nodes are immutable and owned by the intern tables; user code only ever
// holds `const Formula*` / `const Program*` handles.  Two handles denote the
// same term iff they are equal as pointers.
struct Formula {
    FKind kind;
    std::string name;               // Prop
    const Formula* lhs = nullptr;   // Implies
    const Formula* rhs = nullptr;   // Implies
    const Program* prog = nullptr;  // Box / RevBox
    const Formula* body = nullptr;  // Box / RevBox
    int len = 0;                    // term length (see length())
    bool pdl = true;                // free of [-prog] anywhere
    std::string text;               // cached rendering, parenthesized form
};

struct Program {
    PKind kind;
    std::string name;               // Atom
    const Program* lhs = nullptr;   // Seq / Choice
    const Program* rhs = nullptr;   // Seq / Choice
    const Program* sub = nullptr;   // Star
    const Formula* test = nullptr;  // Test
    int len = 0;
    bool pdl = true;
    std::string text;               // cached rendering, parenthesized form
};

// Core constructors (interning).
const Formula* f_false();
const Formula* f_prop(std::string_view name);
const Formula* f_implies(const Formula* lhs, const Formula* rhs);
const Formula* f_box(const Program* prog, const Formula* body);
const Formula* f_revbox(const Program* prog, const Formula* body);

const Program* p_atom(std::string_view name);
const Program* p_seq(const Program* lhs, const Program* rhs);
const Program* p_choice(const Program* lhs, const Program* rhs);
const Program* p_star(const Program* sub);
const Program* p_test(const Formula* test);

// Abbreviations, expanded eagerly:
//   ~f        := f -> false
//   true      := false -> false
//   f | g     := (f -> false) -> g
//   f & g     := (f -> (g -> false)) -> false
//   f <-> g   := (f -> g) & (g -> f)
//   <prog>f   := ~[prog]~f
//   <-prog>f  := ~[-prog]~f
const Formula* f_top();
const Formula* f_not(const Formula* f);
const Formula* f_or(const Formula* lhs, const Formula* rhs);
const Formula* f_and(const Formula* lhs, const Formula* rhs);
const Formula* f_iff(const Formula* lhs, const Formula* rhs);
const Formula* f_diamond(const Program* prog, const Formula* body);
const Formula* f_revdiamond(const Program* prog, const Formula* body);

// Term length:
//   |false| = |p| = |a| = 1          |f -> g|   = |f| + |g| + 1
//   |[prog]f| = |[-prog]f| = |prog| + |f|
//   |p;q| = |p+q| = |p| + |q| + 1    |p*| = |p| + 1     |?f| = |f| + 1
inline int length(const Formula* f) { return f->len; }
inline int length(const Program* p) { return p->len; }

inline bool is_pdl(const Formula* f) { return f->pdl; }
inline bool is_pdl(const Program* p) { return p->pdl; }

// Textual form that parse_formula() accepts back; the outermost "->" is
// printed without enclosing parentheses, every nested one with them.
std::string render(const Formula* f);
std::string render(const Program* p);

// Total order used everywhere a set of formulas needs a canonical listing:
// ascending term length, ties broken by the rendered string.
bool schedule_less(const Formula* a, const Formula* b);

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Parses the concrete syntax described above.  Binary operators must be
// parenthesized except at the top level of a formula and immediately inside
// [ ] / < > brackets.  Throws ParseError with an offset on bad input.
const Formula* parse_formula(std::string_view text);

// Atom inventories, used by model enumeration and the CLI.
void collect_props(const Formula* f, std::set<std::string>& out);
void collect_props(const Program* p, std::set<std::string>& out);
void collect_atom_programs(const Formula* f, std::set<std::string>& out);
void collect_atom_programs(const Program* p, std::set<std::string>& out);

}  // namespace tpdl
