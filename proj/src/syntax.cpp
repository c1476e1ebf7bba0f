// syntax.cpp -- interning, rendering and parsing of formulas and programs.

#include "tpdl/syntax.hpp"

#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

namespace tpdl {

namespace {

// The cached `text` of a node is already a complete, unambiguous rendering
// (binary nodes carry their parentheses), so it doubles as the interning key.
// Function-local statics so construction in another translation unit's
// initializers finds live pools.
struct Pools {
    std::unordered_map<std::string, std::unique_ptr<Formula>> formulas;
    std::unordered_map<std::string, std::unique_ptr<Program>> programs;
    std::mutex mutex;
};

Pools& pools() {
    static Pools p;
    return p;
}

const Formula* intern(Formula f) {
    Pools& p = pools();
    std::lock_guard<std::mutex> lock(p.mutex);
    auto it = p.formulas.find(f.text);
    if (it != p.formulas.end()) return it->second.get();
    auto owned = std::make_unique<Formula>(std::move(f));
    const Formula* raw = owned.get();
    p.formulas.emplace(raw->text, std::move(owned));
    return raw;
}

const Program* intern(Program pr) {
    Pools& p = pools();
    std::lock_guard<std::mutex> lock(p.mutex);
    auto it = p.programs.find(pr.text);
    if (it != p.programs.end()) return it->second.get();
    auto owned = std::make_unique<Program>(std::move(pr));
    const Program* raw = owned.get();
    p.programs.emplace(raw->text, std::move(owned));
    return raw;
}

bool valid_name(std::string_view s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'))
            return false;
    return true;
}

// Binary programs drop their parentheses directly inside [ ] / < >.
std::string_view bracket_view(const Program* p) {
    std::string_view v = p->text;
    if (p->kind == PKind::Seq || p->kind == PKind::Choice) {
        v.remove_prefix(1);
        v.remove_suffix(1);
    }
    return v;
}

std::string_view top_view(const Formula* f) {
    std::string_view v = f->text;
    if (f->kind == FKind::Implies) {
        v.remove_prefix(1);
        v.remove_suffix(1);
    }
    return v;
}

}  // namespace

const Formula* f_false() {
    Formula f;
    f.kind = FKind::False;
    f.len = 1;
    f.text = "false";
    return intern(std::move(f));
}

const Formula* f_prop(std::string_view name) {
    if (!valid_name(name) || name == "false" || name == "true")
        throw std::invalid_argument("invalid proposition name: \"" + std::string(name) + "\"");
    Formula f;
    f.kind = FKind::Prop;
    f.name = std::string(name);
    f.len = 1;
    f.text = f.name;
    return intern(std::move(f));
}

const Formula* f_implies(const Formula* lhs, const Formula* rhs) {
    Formula f;
    f.kind = FKind::Implies;
    f.lhs = lhs;
    f.rhs = rhs;
    f.len = lhs->len + rhs->len + 1;
    f.pdl = lhs->pdl && rhs->pdl;
    f.text = "(" + lhs->text + " -> " + rhs->text + ")";
    return intern(std::move(f));
}

const Formula* f_box(const Program* prog, const Formula* body) {
    Formula f;
    f.kind = FKind::Box;
    f.prog = prog;
    f.body = body;
    f.len = prog->len + body->len;
    f.pdl = prog->pdl && body->pdl;
    f.text = "[" + std::string(bracket_view(prog)) + "]" + body->text;
    return intern(std::move(f));
}

const Formula* f_revbox(const Program* prog, const Formula* body) {
    Formula f;
    f.kind = FKind::RevBox;
    f.prog = prog;
    f.body = body;
    f.len = prog->len + body->len;
    f.pdl = false;
    f.text = "[-" + std::string(bracket_view(prog)) + "]" + body->text;
    return intern(std::move(f));
}

const Program* p_atom(std::string_view name) {
    if (!valid_name(name) || name == "false" || name == "true")
        throw std::invalid_argument("invalid program name: \"" + std::string(name) + "\"");
    Program p;
    p.kind = PKind::Atom;
    p.name = std::string(name);
    p.len = 1;
    p.text = p.name;
    return intern(std::move(p));
}

const Program* p_seq(const Program* lhs, const Program* rhs) {
    Program p;
    p.kind = PKind::Seq;
    p.lhs = lhs;
    p.rhs = rhs;
    p.len = lhs->len + rhs->len + 1;
    p.pdl = lhs->pdl && rhs->pdl;
    p.text = "(" + lhs->text + ";" + rhs->text + ")";
    return intern(std::move(p));
}

const Program* p_choice(const Program* lhs, const Program* rhs) {
    Program p;
    p.kind = PKind::Choice;
    p.lhs = lhs;
    p.rhs = rhs;
    p.len = lhs->len + rhs->len + 1;
    p.pdl = lhs->pdl && rhs->pdl;
    p.text = "(" + lhs->text + "+" + rhs->text + ")";
    return intern(std::move(p));
}

const Program* p_star(const Program* sub) {
    Program p;
    p.kind = PKind::Star;
    p.sub = sub;
    p.len = sub->len + 1;
    p.pdl = sub->pdl;
    p.text = sub->text + "*";
    return intern(std::move(p));
}

const Program* p_test(const Formula* test) {
    Program p;
    p.kind = PKind::Test;
    p.test = test;
    p.len = test->len + 1;
    p.pdl = test->pdl;
    p.text = "?" + test->text;
    return intern(std::move(p));
}

const Formula* f_top() { return f_implies(f_false(), f_false()); }
const Formula* f_not(const Formula* f) { return f_implies(f, f_false()); }
const Formula* f_or(const Formula* lhs, const Formula* rhs) {
    return f_implies(f_not(lhs), rhs);
}
const Formula* f_and(const Formula* lhs, const Formula* rhs) {
    return f_not(f_implies(lhs, f_not(rhs)));
}
const Formula* f_iff(const Formula* lhs, const Formula* rhs) {
    return f_and(f_implies(lhs, rhs), f_implies(rhs, lhs));
}
const Formula* f_diamond(const Program* prog, const Formula* body) {
    return f_not(f_box(prog, f_not(body)));
}
const Formula* f_revdiamond(const Program* prog, const Formula* body) {
    return f_not(f_revbox(prog, f_not(body)));
}

std::string render(const Formula* f) { return std::string(top_view(f)); }
std::string render(const Program* p) { return std::string(bracket_view(p)); }

bool schedule_less(const Formula* a, const Formula* b) {
    if (a->len != b->len) return a->len < b->len;
    return top_view(a) < top_view(b);
}

namespace {

struct Parser {
    std::string_view src;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("parse error at offset " + std::to_string(pos) + ": " + msg);
    }

    void skip_ws() {
        while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
    }

    bool at(char c) {
        skip_ws();
        return pos < src.size() && src[pos] == c;
    }

    bool match(char c) {
        if (!at(c)) return false;
        ++pos;
        return true;
    }

    bool match_word(std::string_view w) {
        skip_ws();
        if (src.substr(pos, w.size()) != w) return false;
        pos += w.size();
        return true;
    }

    void expect(char c, const char* what) {
        if (!match(c)) fail(std::string("expected '") + c + "' " + what);
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        if (pos >= src.size() || src[pos] < 'a' || src[pos] > 'z')
            fail("expected a name");
        while (pos < src.size() &&
               ((src[pos] >= 'a' && src[pos] <= 'z') ||
                (src[pos] >= '0' && src[pos] <= '9') || src[pos] == '_'))
            ++pos;
        return std::string(src.substr(start, pos - start));
    }

    // One binary connective is allowed without parentheses at the top level
    // of the formula (and inside explicit parentheses).
    const Formula* formula() {
        const Formula* lhs = unit();
        if (match_word("<->")) return f_iff(lhs, unit());
        if (match_word("->")) return f_implies(lhs, unit());
        if (at('&')) {
            ++pos;
            return f_and(lhs, unit());
        }
        // Lone '|' only; "|-" belongs to the sequent layer.
        skip_ws();
        if (pos < src.size() && src[pos] == '|' &&
            (pos + 1 >= src.size() || src[pos + 1] != '-')) {
            ++pos;
            return f_or(lhs, unit());
        }
        return lhs;
    }

    const Formula* unit() {
        skip_ws();
        if (pos >= src.size()) fail("expected a formula");
        char c = src[pos];
        if (c == '(') {
            ++pos;
            const Formula* f = formula();
            expect(')', "closing the formula");
            return f;
        }
        if (c == '~') {
            ++pos;
            return f_not(unit());
        }
        if (c == '[') {
            ++pos;
            bool rev = match('-');
            const Program* prog = program();
            expect(']', "after the program");
            const Formula* body = unit();
            return rev ? f_revbox(prog, body) : f_box(prog, body);
        }
        if (c == '<') {
            ++pos;
            bool rev = match('-');
            const Program* prog = program();
            expect('>', "after the program");
            const Formula* body = unit();
            return rev ? f_revdiamond(prog, body) : f_diamond(prog, body);
        }
        if (c >= 'a' && c <= 'z') {
            std::string name = ident();
            if (name == "false") return f_false();
            if (name == "true") return f_top();
            return f_prop(name);
        }
        fail("expected a formula");
    }

    // Same convention as formula(): one unparenthesized binary operator per
    // bracket interior / parenthesis level.
    const Program* program() {
        const Program* lhs = prog_unit();
        if (match(';')) return p_seq(lhs, prog_unit());
        if (match('+')) return p_choice(lhs, prog_unit());
        return lhs;
    }

    const Program* prog_unit() {
        skip_ws();
        if (pos >= src.size()) fail("expected a program");
        const Program* p = nullptr;
        char c = src[pos];
        if (c == '(') {
            ++pos;
            p = program();
            expect(')', "closing the program");
        } else if (c == '?') {
            ++pos;
            p = p_test(unit());
        } else if (c >= 'a' && c <= 'z') {
            std::string name = ident();
            if (name == "false" || name == "true")
                fail("\"" + name + "\" is not a program name");
            p = p_atom(name);
        } else {
            fail("expected a program");
        }
        while (match('*')) p = p_star(p);
        return p;
    }
};

}  // namespace

const Formula* parse_formula(std::string_view text) {
    Parser parser{text};
    const Formula* f = parser.formula();
    parser.skip_ws();
    if (parser.pos != text.size()) parser.fail("unexpected trailing input");
    return f;
}

void collect_props(const Formula* f, std::set<std::string>& out) {
    switch (f->kind) {
        case FKind::False: return;
        case FKind::Prop: out.insert(f->name); return;
        case FKind::Implies:
            collect_props(f->lhs, out);
            collect_props(f->rhs, out);
            return;
        case FKind::Box:
        case FKind::RevBox:
            collect_props(f->prog, out);
            collect_props(f->body, out);
            return;
    }
}

void collect_props(const Program* p, std::set<std::string>& out) {
    switch (p->kind) {
        case PKind::Atom: return;
        case PKind::Seq:
        case PKind::Choice:
            collect_props(p->lhs, out);
            collect_props(p->rhs, out);
            return;
        case PKind::Star: collect_props(p->sub, out); return;
        case PKind::Test: collect_props(p->test, out); return;
    }
}

void collect_atom_programs(const Formula* f, std::set<std::string>& out) {
    switch (f->kind) {
        case FKind::False:
        case FKind::Prop: return;
        case FKind::Implies:
            collect_atom_programs(f->lhs, out);
            collect_atom_programs(f->rhs, out);
            return;
        case FKind::Box:
        case FKind::RevBox:
            collect_atom_programs(f->prog, out);
            collect_atom_programs(f->body, out);
            return;
    }
}

void collect_atom_programs(const Program* p, std::set<std::string>& out) {
    switch (p->kind) {
        case PKind::Atom: out.insert(p->name); return;
        case PKind::Seq:
        case PKind::Choice:
            collect_atom_programs(p->lhs, out);
            collect_atom_programs(p->rhs, out);
            return;
        case PKind::Star: collect_atom_programs(p->sub, out); return;
        case PKind::Test: collect_atom_programs(p->test, out); return;
    }
}

}  // namespace tpdl
