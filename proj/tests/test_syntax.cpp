#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "tpdl/syntax.hpp"

using namespace tpdl;

TEST_CASE("interning gives pointer equality for equal terms") {
    CHECK(f_prop("p") == f_prop("p"));
    CHECK(f_prop("p") != f_prop("q"));
    CHECK(f_implies(f_prop("p"), f_false()) == f_implies(f_prop("p"), f_false()));
    CHECK(p_star(p_atom("a")) == p_star(p_atom("a")));
    CHECK(f_box(p_atom("a"), f_prop("p")) != f_revbox(p_atom("a"), f_prop("p")));
    CHECK(f_not(f_prop("p")) == f_implies(f_prop("p"), f_false()));
}

TEST_CASE("term lengths") {
    const Formula* p = f_prop("p");
    const Program* a = p_atom("a");

    CHECK(length(f_false()) == 1);
    CHECK(length(p) == 1);
    CHECK(length(a) == 1);
    CHECK(length(f_implies(p, p)) == 3);
    CHECK(length(f_box(a, p)) == 2);          // |prog| + |body|, no +1
    CHECK(length(f_revbox(a, p)) == 2);
    CHECK(length(p_seq(a, a)) == 3);
    CHECK(length(p_choice(a, a)) == 3);
    CHECK(length(p_star(a)) == 2);
    CHECK(length(p_test(p)) == 2);

    // Star-of-test boxes, the shape the game examples revolve around.
    const Formula* star_p = f_box(p_star(p_test(p)), p);
    CHECK(length(star_p) == 4);
    CHECK(length(f_box(p_test(p), star_p)) == 6);

    // p -> [-a]<a>p
    const Formula* round_trip = f_implies(p, f_revbox(a, f_diamond(a, p)));
    CHECK(length(round_trip) == 9);
}

TEST_CASE("abbreviations expand to the core connectives") {
    const Formula* p = f_prop("p");
    const Formula* q = f_prop("q");
    const Program* a = p_atom("a");

    CHECK(f_top() == f_implies(f_false(), f_false()));
    CHECK(f_not(p) == f_implies(p, f_false()));
    CHECK(f_or(p, q) == f_implies(f_not(p), q));
    CHECK(f_and(p, q) == f_not(f_implies(p, f_not(q))));
    CHECK(f_iff(p, q) == f_and(f_implies(p, q), f_implies(q, p)));
    CHECK(f_diamond(a, p) == f_not(f_box(a, f_not(p))));
    CHECK(f_revdiamond(a, p) == f_not(f_revbox(a, f_not(p))));
}

TEST_CASE("pdl fragment flag") {
    const Formula* p = f_prop("p");
    const Program* a = p_atom("a");

    CHECK(is_pdl(f_box(p_star(a), p)));
    CHECK_FALSE(is_pdl(f_revbox(a, p)));
    CHECK_FALSE(is_pdl(f_implies(p, f_revbox(a, p))));
    CHECK_FALSE(is_pdl(f_box(p_test(f_revbox(a, p)), p)));  // buried in a test program
    CHECK_FALSE(is_pdl(p_test(f_revbox(a, p))));
}

TEST_CASE("rendering") {
    const Formula* p = f_prop("p");
    const Formula* q = f_prop("q");
    const Program* a = p_atom("a");
    const Program* b = p_atom("b");

    CHECK(render(f_false()) == "false");
    CHECK(render(f_implies(p, q)) == "p -> q");
    CHECK(render(f_implies(f_implies(p, q), p)) == "(p -> q) -> p");
    CHECK(render(f_box(p_seq(a, b), p)) == "[a;b]p");
    CHECK(render(f_revbox(p_star(a), p)) == "[-a*]p");
    CHECK(render(f_box(p_star(p_test(p)), p)) == "[?p*]p");
    CHECK(render(f_diamond(a, p)) == "[a](p -> false) -> false");
    CHECK(render(p_choice(p_seq(a, b), p_star(b))) == "(a;b)+b*");
}

TEST_CASE("parsing the concrete syntax") {
    CHECK(parse_formula("false") == f_false());
    CHECK(parse_formula("true") == f_top());
    CHECK(parse_formula("p -> q") == f_implies(f_prop("p"), f_prop("q")));
    CHECK(parse_formula("~p") == f_not(f_prop("p")));
    CHECK(parse_formula("p & q") == f_and(f_prop("p"), f_prop("q")));
    CHECK(parse_formula("p | q") == f_or(f_prop("p"), f_prop("q")));
    CHECK(parse_formula("p <-> q") == f_iff(f_prop("p"), f_prop("q")));
    CHECK(parse_formula("[a]p") == f_box(p_atom("a"), f_prop("p")));
    CHECK(parse_formula("[-a]p") == f_revbox(p_atom("a"), f_prop("p")));
    CHECK(parse_formula("<a>p") == f_diamond(p_atom("a"), f_prop("p")));
    CHECK(parse_formula("<-a>p") == f_revdiamond(p_atom("a"), f_prop("p")));
    CHECK(parse_formula("[a;b]p") ==
          f_box(p_seq(p_atom("a"), p_atom("b")), f_prop("p")));
    CHECK(parse_formula("[a+b]p") ==
          f_box(p_choice(p_atom("a"), p_atom("b")), f_prop("p")));
    CHECK(parse_formula("[a*]p") == f_box(p_star(p_atom("a")), f_prop("p")));
    CHECK(parse_formula("[?p]q") == f_box(p_test(f_prop("p")), f_prop("q")));
    CHECK(parse_formula("[(?p)*]p") == f_box(p_star(p_test(f_prop("p"))), f_prop("p")));
    CHECK(parse_formula("[?p*]p") == parse_formula("[(?p)*]p"));
    CHECK(parse_formula("p -> [-a]<a>p") ==
          f_implies(f_prop("p"), f_revbox(p_atom("a"), f_diamond(p_atom("a"), f_prop("p")))));
    CHECK(parse_formula("[(a;b)+c*]p") ==
          f_box(p_choice(p_seq(p_atom("a"), p_atom("b")), p_star(p_atom("c"))), f_prop("p")));

    CHECK_THROWS_AS(parse_formula(""), ParseError);
    CHECK_THROWS_AS(parse_formula("p ->"), ParseError);
    CHECK_THROWS_AS(parse_formula("p -> q -> r"), ParseError);  // needs parentheses
    CHECK_THROWS_AS(parse_formula("[a p"), ParseError);
    CHECK_THROWS_AS(parse_formula("[true]p"), ParseError);
    CHECK_THROWS_AS(parse_formula("p)"), ParseError);
    CHECK_THROWS_AS(parse_formula("P"), ParseError);
}

TEST_CASE("render/parse round trip on random formulas") {
    helpers::Gen gen(20260814);
    for (int i = 0; i < 500; ++i) {
        const Formula* f = gen.formula(1 + gen.pick(20));
        CAPTURE(render(f));
        CHECK(parse_formula(render(f)) == f);
    }
}

TEST_CASE("random generator hits requested lengths exactly") {
    helpers::Gen gen(7);
    for (int i = 0; i < 300; ++i) {
        int want = 1 + gen.pick(25);
        CHECK(length(gen.formula(want)) == want);
    }
}

TEST_CASE("schedule order is total and length-major") {
    const Formula* p = f_prop("p");
    const Formula* q = f_prop("q");
    CHECK(schedule_less(p, q));
    CHECK_FALSE(schedule_less(q, p));
    CHECK_FALSE(schedule_less(p, p));
    CHECK(schedule_less(q, f_implies(p, p)));  // shorter first, whatever the text

    helpers::Gen gen(99);
    for (int i = 0; i < 200; ++i) {
        const Formula* f = gen.formula(1 + gen.pick(12));
        const Formula* g = gen.formula(1 + gen.pick(12));
        if (f == g)
            CHECK((!schedule_less(f, g) && !schedule_less(g, f)));
        else
            CHECK(schedule_less(f, g) != schedule_less(g, f));
    }
}

TEST_CASE("atom inventories") {
    const Formula* f = parse_formula("[a;(?q)*](p -> [-b]r)");
    std::set<std::string> props, progs;
    collect_props(f, props);
    collect_atom_programs(f, progs);
    CHECK(props == std::set<std::string>{"p", "q", "r"});
    CHECK(progs == std::set<std::string>{"a", "b"});
}
