// sequent.cpp -- sequent parsing, rendering and hashing.

#include "tpdl/sequent.hpp"

namespace tpdl {

size_t SequentHash::operator()(const Sequent& s) const noexcept {
    // FNV-1a over the interned handles; the 0/1 markers keep (ant, con) and
    // (con, ant) from colliding.
    size_t h = 1469598103934665603ull;
    auto mix = [&h](size_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    for (const Formula* f : s.ant) mix(reinterpret_cast<size_t>(f));
    mix(0);
    for (const Formula* f : s.con) mix(reinterpret_cast<size_t>(f));
    mix(1);
    return h;
}

bool sequent_is_pdl(const Sequent& s) {
    for (const Formula* f : s.ant)
        if (!is_pdl(f)) return false;
    for (const Formula* f : s.con)
        if (!is_pdl(f)) return false;
    return true;
}

FormulaSet sequent_formulas(const Sequent& s) { return fs_union(s.ant, s.con); }

std::string render_sequent(const Sequent& s) {
    std::string out;
    for (size_t i = 0; i < s.ant.size(); ++i) {
        if (i) out += ", ";
        out += render(s.ant[i]);
    }
    if (!s.ant.empty()) out += ' ';
    out += "|-";
    for (size_t i = 0; i < s.con.size(); ++i) {
        out += i ? ", " : " ";
        out += render(s.con[i]);
    }
    return out;
}

namespace {

// Splits on top-level commas; formulas contain no commas, so this is plain.
FormulaSet parse_side(std::string_view text) {
    FormulaSet out;
    size_t start = 0;
    auto take = [&](std::string_view piece) {
        size_t a = piece.find_first_not_of(" \t");
        if (a == std::string_view::npos)
            throw ParseError("empty formula in sequent: \"" + std::string(text) + "\"");
        size_t b = piece.find_last_not_of(" \t");
        out = fs_insert(std::move(out), parse_formula(piece.substr(a, b - a + 1)));
    };
    bool any_content = text.find_first_not_of(" \t") != std::string_view::npos;
    if (!any_content) {
        if (text.find(',') != std::string_view::npos)
            throw ParseError("empty formula in sequent");
        return out;
    }
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            take(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

Sequent parse_sequent(std::string_view text) {
    size_t turnstile = text.find("|-");
    if (turnstile == std::string_view::npos)
        throw ParseError("sequent is missing \"|-\": \"" + std::string(text) + "\"");
    Sequent s;
    s.ant = parse_side(text.substr(0, turnstile));
    s.con = parse_side(text.substr(turnstile + 2));
    return s;
}

}  // namespace tpdl
