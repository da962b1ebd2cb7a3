#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stlmine/formula.hpp"
#include "stlmine/parser.hpp"
#include "stlmine/util.hpp"

#include "oracle.hpp"

using namespace stlmine;

TEST_CASE("formatting canonical forms") {
    CHECK(format_tree(make_true()) == "true");
    CHECK(format_tree(make_atom("x1", Relation::Greater, Num{3.0})) == "(x1 > 3)");
    CHECK(format_tree(make_atom("u", Relation::LessEqual, Num{-1.5})) == "(u <= -1.5)");
    auto a = make_atom("x1", Relation::Greater, Num{1.0});
    auto b = make_atom("x2", Relation::LessEqual, Num{2.0});
    CHECK(format_tree(make_not(a)) == "!(x1 > 1)");
    CHECK(format_tree(make_and(a, b)) == "((x1 > 1) & (x2 <= 2))");
    CHECK(format_tree(make_or(a, b)) == "((x1 > 1) | (x2 <= 2))");
    CHECK(format_tree(make_eventually(Num{0.0}, Num{5.0}, a)) == "F[0,5] (x1 > 1)");
    CHECK(format_tree(make_globally(Num{0.5}, Num{1.5}, a)) == "G[0.5,1.5] (x1 > 1)");
    CHECK(format_tree(make_until(Num{1.0}, Num{2.0}, a, b)) ==
          "((x1 > 1) U[1,2] (x2 <= 2))");
    CHECK(format_tree(make_atom("x1", Relation::Greater, Num::placeholder("k1"))) ==
          "(x1 > ?k1)");
}

TEST_CASE("parsing known strings") {
    CHECK(parse_formula("(x1 > 3)").text() == "(x1 > 3)");
    CHECK(parse_formula("true").text() == "true");
    CHECK(parse_formula("!(x1 <= 2)").text() == "!(x1 <= 2)");
    CHECK(parse_formula("F[0,5] (x1 > 0)").text() == "F[0,5] (x1 > 0)");
    CHECK(parse_formula("G[1,2] !(v > 0)").text() == "G[1,2] !(v > 0)");
    CHECK(parse_formula("((x1 > 1) U[1,2] (x2 <= 0))").text() ==
          "((x1 > 1) U[1,2] (x2 <= 0))");
    // redundant outer parentheses collapse
    CHECK(parse_formula("((x1 > 3))").text() == "(x1 > 3)");
    CHECK(parse_formula("(F[0,5] (x1 > 0))").text() == "F[0,5] (x1 > 0)");
    // conjunction binds tighter than disjunction
    CHECK(parse_formula("(x > 1) & (x > 2) | (x > 3)").text() ==
          "(((x > 1) & (x > 2)) | (x > 3))");
    // until is right-associative
    CHECK(parse_formula("(x > 1) U[0,1] (x > 2) U[0,2] (x > 3)").text() ==
          "((x > 1) U[0,1] ((x > 2) U[0,2] (x > 3)))");
    // numbers: signs and exponents
    CHECK(parse_formula("(x > -2.5e-1)").text() == "(x > -0.25)");
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_formula("(x1 >"), Error);
    CHECK_THROWS_AS(parse_formula("(x1 >> 3)"), Error);
    CHECK_THROWS_AS(parse_formula("(x1 > 3"), Error);
    CHECK_THROWS_AS(parse_formula("F[2,1] (x > 0)"), Error);   // empty interval
    CHECK_THROWS_AS(parse_formula("F[1,1] (x > 0)"), Error);   // a < b required
    CHECK_THROWS_AS(parse_formula("F[-1,1] (x > 0)"), Error);  // a >= 0 required
    CHECK_THROWS_AS(parse_formula("(x1 > 3) trailing"), Error);
    CHECK_THROWS_AS(parse_formula(""), Error);
    CHECK_THROWS_AS(parse_formula("(x1 > ?k)"), Error);  // placeholders need parse_template
    CHECK_THROWS_AS(parse_template("((x > ?k) & (y > ?k))"), Error);  // duplicate name
    CHECK_NOTHROW(parse_template("((x > ?k1) & (y > ?k2))"));
}

TEST_CASE("parse of formatted tree is identity") {
    std::mt19937_64 rng(2024);
    oracle::RandomFormulaOptions opt;
    opt.max_depth = 4;
    for (int it = 0; it < 500; ++it) {
        NodePtr f = oracle::random_concrete(rng, {"x1", "x2", "v'"}, 0.5, opt);
        Formula parsed = parse_formula(format_tree(f));
        CHECK(tree_equal(parsed.root(), f));
    }
}

TEST_CASE("parametric round trip keeps placeholders and hints do not print") {
    ParametricFormula p = parse_template("((x2 > ?k1) U[?a1,?b1] (x1 <= ?k2))");
    CHECK(p.has_placeholders());
    CHECK(p.text() == "((x2 > ?k1) U[?a1,?b1] (x1 <= ?k2))");
    ParametricFormula round = parse_template(p.text());
    CHECK(tree_equal(round.root(), p.root()));
}

TEST_CASE("tree size counts nodes") {
    CHECK(tree_size(make_true()) == 1);
    CHECK(parse_formula("(x > 1)").size() == 1);
    CHECK(parse_formula("!(x > 1)").size() == 2);
    CHECK(parse_formula("((x > 1) & (y > 2))").size() == 3);
    CHECK(parse_formula("F[0,1] ((x > 1) | (y > 2))").size() == 4);
    CHECK(parse_formula("((x > 1) U[0,1] !(y > 2))").size() == 4);
}

TEST_CASE("collect_nodes is preorder and subtree/replace are consistent") {
    Formula f = parse_formula("((x > 1) U[0,1] ((y > 2) & (z <= 3)))");
    auto nodes = collect_nodes(f.root());
    REQUIRE(static_cast<int>(nodes.size()) == f.size());
    CHECK(nodes[0]->kind == NodeKind::Until);
    CHECK(nodes[1]->kind == NodeKind::Atom);  // left child before right subtree
    CHECK(nodes[2]->kind == NodeKind::And);
    for (int i = 0; i < f.size(); ++i) {
        NodePtr sub = subtree_at(f.root(), i);
        REQUIRE(sub);
        CHECK(sub.get() == nodes[static_cast<std::size_t>(i)]);
        NodePtr same = replace_subtree(f.root(), i, sub);
        CHECK(tree_equal(same, f.root()));
    }
    NodePtr swapped = replace_subtree(f.root(), 2, make_true());
    CHECK(format_tree(swapped) == "((x > 1) U[0,1] true)");
}

TEST_CASE("canonicalize_params renames placeholders in preorder") {
    ParametricFormula p =
        parse_template("((x > ?foo) U[?lo,?hi] F[?q,?r] (y <= ?bar))");
    NodePtr c = canonicalize_params(p.root());
    CHECK(format_tree(c) == "((x > ?k1) U[?a1,?b1] F[?a2,?b2] (y <= ?k2))");
    // idempotent
    CHECK(format_tree(canonicalize_params(c)) == format_tree(c));
}

TEST_CASE("canonicalize_params preserves hints") {
    ParametricFormula p = parse_template("(x > ?foo)");
    Num n = Num::placeholder("foo");
    n.hint = 7.5;
    NodePtr with_hint = make_atom("x", Relation::Greater, n);
    NodePtr c = canonicalize_params(with_hint);
    CHECK(c->threshold.param == "k1");
    CHECK(c->threshold.hint == doctest::Approx(7.5));
}

TEST_CASE("negation normal form") {
    auto nnf_text = [](const std::string& s) { return nnf(parse_formula(s)).text(); };
    CHECK(nnf_text("!(x > 1)") == "(x <= 1)");
    CHECK(nnf_text("!(x <= 1)") == "(x > 1)");
    CHECK(nnf_text("!!(x > 1)") == "(x > 1)");
    CHECK(nnf_text("!((x > 1) & (y <= 2))") == "((x <= 1) | (y > 2))");
    CHECK(nnf_text("!((x > 1) | (y <= 2))") == "((x <= 1) & (y > 2))");
    CHECK(nnf_text("!F[0,1] (x > 1)") == "G[0,1] (x <= 1)");
    CHECK(nnf_text("!G[0,1] (x > 1)") == "F[0,1] (x <= 1)");
    // no dual operator exists for until or true: negation stays, children normalize
    CHECK(nnf_text("!((x > 1) U[0,1] !(y > 2))") == "!((x > 1) U[0,1] (y <= 2))");
    CHECK(nnf_text("!true") == "!true");
    CHECK(nnf_text("G[0,2] !((x > 1) | F[1,2] (y <= 0))") ==
          "G[0,2] ((x <= 1) & G[1,2] (y > 0))");
}

TEST_CASE("threshold shift examples") {
    auto shifted = [](const std::string& s, double c) {
        return shift(parse_formula(s), c).text();
    };
    CHECK(shifted("(x > 3)", 1.0) == "(x > 4)");
    CHECK(shifted("(x <= 3)", 1.0) == "(x <= 2)");
    CHECK(shifted("(x > 3)", -0.5) == "(x > 2.5)");
    CHECK(shifted("((x > 1) & F[0,2] (y <= 5))", 2.0) == "((x > 3) & F[0,2] (y <= 3))");
    // under negation the shift direction flips so robustness still drops by c
    CHECK(shifted("!(x > 3)", 1.0) == "!(x > 2)");
    CHECK(shifted("!((x > 1) U[0,1] (y <= 2))", 1.0) == "!((x > 0) U[0,1] (y <= 3))");
    CHECK(shifted("true", 5.0) == "true");
}

TEST_CASE("interval validation on literal bounds") {
    CHECK_THROWS_AS(make_eventually(Num{2.0}, Num{1.0}, make_true()), Error);
    CHECK_THROWS_AS(make_eventually(Num{-1.0}, Num{1.0}, make_true()), Error);
    CHECK_THROWS_AS(make_until(Num{1.0}, Num{1.0}, make_true(), make_true()), Error);
    // placeholder bounds are validated at instantiation time instead
    CHECK_NOTHROW(make_eventually(Num::placeholder("a"), Num::placeholder("b"),
                                  make_true()));
}

TEST_CASE("formula wrappers validate their contents") {
    CHECK_THROWS_AS(Formula(make_atom("x", Relation::Greater, Num::placeholder("k"))),
                    Error);
    NodePtr dup = make_and(make_atom("x", Relation::Greater, Num::placeholder("k")),
                           make_atom("y", Relation::Greater, Num::placeholder("k")));
    CHECK_THROWS_AS(ParametricFormula{dup}, Error);
    CHECK_FALSE(parse_template("(x > 1)").has_placeholders());
}

TEST_CASE("number formatting round trips") {
    for (double v : {0.0, 1.0, -1.5, 0.1, 1e-17, 12345.6789, 3.0000000000000004}) {
        CHECK(format_number(v) == format_number(v));
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(3.0) == "3");
    CHECK(format_number(-0.25) == "-0.25");
}
