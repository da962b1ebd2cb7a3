#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "stlmine/genetic.hpp"
#include "stlmine/parser.hpp"
#include "stlmine/pstl.hpp"

using namespace stlmine;

namespace {
const std::vector<std::string> kVars = {"x1", "x2"};
}

TEST_CASE("initial population has the requested size and shape") {
    std::mt19937_64 rng(1);
    for (int ne : {4, 10, 40, 80}) {
        auto pop = generate_initial_formulae(ne, 4, kVars, rng);
        REQUIRE(static_cast<int>(pop.size()) == ne);
        for (const auto& p : pop) {
            CHECK(p.has_placeholders());
            CHECK(p.size() <= 4);
            // canonical placeholder names parse back
            CHECK_NOTHROW(parse_template(p.text()));
        }
    }
}

TEST_CASE("initial population leads with the enumerated template family") {
    std::mt19937_64 rng(7);
    auto pop = generate_initial_formulae(40, 4, kVars, rng);
    // 20 family members must be distinct
    std::set<std::string> seen;
    for (int i = 0; i < 20; ++i) seen.insert(pop[static_cast<std::size_t>(i)].text());
    CHECK(static_cast<int>(seen.size()) == 20);
    int atoms_under_fg = 0, pairs_under_fg = 0, untils = 0;
    for (int i = 0; i < 20; ++i) {
        const NodePtr& r = pop[static_cast<std::size_t>(i)].root();
        if (r->kind == NodeKind::Until) {
            ++untils;
            CHECK(r->left->kind == NodeKind::Atom);
            CHECK(r->right->kind == NodeKind::Atom);
        } else {
            REQUIRE((r->kind == NodeKind::Eventually || r->kind == NodeKind::Globally));
            if (r->left->kind == NodeKind::Atom)
                ++atoms_under_fg;
            else {
                REQUIRE((r->left->kind == NodeKind::And || r->left->kind == NodeKind::Or));
                ++pairs_under_fg;
            }
        }
    }
    CHECK(atoms_under_fg + pairs_under_fg + untils == 20);
    CHECK(untils > 0);
    CHECK(atoms_under_fg > 0);
}

TEST_CASE("the until seed family covers the reference classifier shape") {
    // Drawing the family many times must eventually include
    // (x2 > ?_) U[?_,?_] (x1 <= ?_), the shape of the target classifier.
    std::mt19937_64 rng(3);
    bool found = false;
    for (int rep = 0; rep < 40 && !found; ++rep) {
        auto pop = generate_initial_formulae(40, 4, kVars, rng);
        for (const auto& p : pop) {
            const NodePtr& r = p.root();
            if (r->kind == NodeKind::Until && r->left->kind == NodeKind::Atom &&
                r->left->variable == "x2" && r->left->rel == Relation::Greater &&
                r->right->kind == NodeKind::Atom && r->right->variable == "x1" &&
                r->right->rel == Relation::LessEqual)
                found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("recombination preserves total size and yields valid templates") {
    std::mt19937_64 rng(5);
    ParametricFormula a = parse_template("((x1 > ?k1) U[?a1,?b1] (x2 <= ?k2))");
    ParametricFormula b = parse_template("F[?a1,?b1] ((x1 > ?k1) & (x2 > ?k2))");
    for (int it = 0; it < 300; ++it) {
        auto [c1, c2] = recombine(a, b, rng);
        CHECK(c1.size() + c2.size() == a.size() + b.size());
        CHECK_NOTHROW(parse_template(c1.text()));
        CHECK_NOTHROW(parse_template(c2.text()));
    }
}

TEST_CASE("recombination preserves hint values") {
    std::mt19937_64 rng(9);
    ParametricFormula a = with_hints(parse_template("((x1 > ?k1) & (x2 <= ?k2))"),
                                     {{"k1", 1.5}, {"k2", 1.5}});
    ParametricFormula b = with_hints(parse_template("F[?a1,?b1] (x1 > ?k1)"),
                                     {{"a1", 2.5}, {"b1", 2.5}, {"k1", 2.5}});
    for (int it = 0; it < 50; ++it) {
        auto [c1, c2] = recombine(a, b, rng);
        for (const ParametricFormula* c : {&c1, &c2})
            for (const Node* nd : collect_nodes(c->root())) {
                if (nd->threshold.is_param())
                    CHECK((nd->threshold.hint == 1.5 || nd->threshold.hint == 2.5));
                if (nd->lower.is_param()) CHECK(nd->lower.hint == 2.5);
            }
    }
}

TEST_CASE("mutation always changes the tree and keeps it valid") {
    std::mt19937_64 rng(17);
    const char* seeds[] = {
        "(x1 > ?k1)",
        "((x1 > ?k1) & (x2 <= ?k2))",
        "F[?a1,?b1] (x1 > ?k1)",
        "G[?a1,?b1] ((x1 > ?k1) | (x2 <= ?k2))",
        "((x1 > ?k1) U[?a1,?b1] (x2 <= ?k2))",
        "!((x1 > ?k1) & (x2 > ?k2))",
    };
    for (const char* s : seeds) {
        ParametricFormula p = parse_template(s);
        for (int it = 0; it < 200; ++it) {
            ParametricFormula m = mutate(p, kVars, rng);
            CHECK_FALSE(tree_equal(m.root(), p.root()));
            CHECK_NOTHROW(parse_template(m.text()));
        }
    }
}

TEST_CASE("mutation reaches every advertised move") {
    std::mt19937_64 rng(23);
    ParametricFormula fg = parse_template("F[?a1,?b1] (x1 > ?k1)");
    bool saw_swap_fg = false, saw_to_until = false, saw_flip = false, saw_not = false,
         saw_subst = false;
    for (int it = 0; it < 400; ++it) {
        ParametricFormula m = mutate(fg, kVars, rng);
        const NodePtr& r = m.root();
        if (r->kind == NodeKind::Globally) saw_swap_fg = true;
        if (r->kind == NodeKind::Until) {
            saw_to_until = true;
            // fresh atom left, original child right
            CHECK(r->left->kind == NodeKind::Atom);
            CHECK(r->right->kind == NodeKind::Atom);
            CHECK(r->right->variable == "x1");
        }
        if (r->kind == NodeKind::Not) saw_not = true;
        if (r->kind == NodeKind::Eventually && r->left->kind == NodeKind::Atom) {
            if (r->left->rel == Relation::LessEqual) saw_flip = true;
            if (r->left->variable == "x2") saw_subst = true;
        }
    }
    CHECK(saw_swap_fg);
    CHECK(saw_to_until);
    CHECK(saw_flip);
    CHECK(saw_subst);
    CHECK(saw_not);

    // UntilToF keeps the right child
    ParametricFormula u = parse_template("((x1 > ?k1) U[?a1,?b1] (x2 <= ?k2))");
    bool saw_until_to_f = false, saw_and_or = false;
    for (int it = 0; it < 300; ++it) {
        ParametricFormula m = mutate(u, kVars, rng);
        if (m.root()->kind == NodeKind::Eventually &&
            m.root()->left->kind == NodeKind::Atom &&
            m.root()->left->variable == "x2")
            saw_until_to_f = true;
    }
    ParametricFormula a = parse_template("((x1 > ?k1) & (x2 <= ?k2))");
    for (int it = 0; it < 100; ++it)
        if (mutate(a, kVars, rng).root()->kind == NodeKind::Or) saw_and_or = true;
    CHECK(saw_until_to_f);
    CHECK(saw_and_or);

    // negation toggle unwraps an existing negation
    ParametricFormula n = parse_template("!((x1 > ?k1) & (x2 <= ?k2))");
    bool saw_unwrap = false;
    for (int it = 0; it < 100; ++it)
        if (mutate(n, kVars, rng).root()->kind == NodeKind::And) saw_unwrap = true;
    CHECK(saw_unwrap);
}

TEST_CASE("single-variable alphabets never substitute variables") {
    std::mt19937_64 rng(29);
    ParametricFormula p = parse_template("F[?a1,?b1] (x1 > ?k1)");
    for (int it = 0; it < 200; ++it) {
        ParametricFormula m = mutate(p, {"x1"}, rng);
        for (const Node* nd : collect_nodes(m.root()))
            if (nd->kind == NodeKind::Atom) CHECK(nd->variable == "x1");
    }
}

TEST_CASE("evolve produces exactly the requested number of children") {
    std::mt19937_64 rng(31);
    auto parents = generate_initial_formulae(10, 4, kVars, rng);
    for (int ne : {1, 2, 7, 20}) {
        auto kids = evolve(parents, 0.1, ne, kVars, rng);
        CHECK(static_cast<int>(kids.size()) == ne);
        for (const auto& k : kids) CHECK_NOTHROW(parse_template(k.text()));
    }
    // alpha = 1: every child is a mutation (odd counts remain reachable)
    auto all_mut = evolve(parents, 1.0, 5, kVars, rng);
    CHECK(static_cast<int>(all_mut.size()) == 5);
}

TEST_CASE("evolve draws two distinct parents for recombination") {
    std::mt19937_64 rng(37);
    // two parents with disjoint variables: recombined children can only mix
    // them, never pair a parent with itself (which would keep sizes 1+1)
    std::vector<ParametricFormula> parents = {parse_template("(x1 > ?k1)"),
                                              parse_template("F[?a1,?b1] (x2 <= ?k2)")};
    for (int it = 0; it < 100; ++it) {
        auto kids = evolve(parents, 0.0, 2, kVars, rng);
        REQUIRE(kids.size() == 2);
        CHECK(kids[0].size() + kids[1].size() == 3);
    }
}
