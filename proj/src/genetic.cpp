#include "stlmine/genetic.hpp"

#include <algorithm>

namespace stlmine {

namespace {

int uniform_int(std::mt19937_64& rng, int n) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

NodePtr placeholder_atom(const std::string& var, Relation rel) {
    return make_atom(var, rel, Num::placeholder("k"));
}

NodePtr random_atom(const std::vector<std::string>& variables, std::mt19937_64& rng) {
    const std::string& var = variables[uniform_int(rng, static_cast<int>(variables.size()))];
    Relation rel = uniform_int(rng, 2) == 0 ? Relation::Greater : Relation::LessEqual;
    return placeholder_atom(var, rel);
}

Num ph_a() { return Num::placeholder("a"); }
Num ph_b() { return Num::placeholder("b"); }

// Uniform random template tree with exactly placeholder numerics and at most
// `budget` nodes.
NodePtr random_tree(int budget, const std::vector<std::string>& variables, std::mt19937_64& rng) {
    if (budget <= 1) return random_atom(variables, rng);
    enum { kAtom, kNot, kF, kG, kAnd, kOr, kU };
    static const int unary_min = 2, binary_min = 3;
    while (true) {
        int pick = uniform_int(rng, 7);
        if (pick == kAtom) return random_atom(variables, rng);
        if (pick == kNot || pick == kF || pick == kG) {
            if (budget < unary_min) continue;
            NodePtr child = random_tree(budget - 1, variables, rng);
            if (pick == kNot) return make_not(std::move(child));
            if (pick == kF) return make_eventually(ph_a(), ph_b(), std::move(child));
            return make_globally(ph_a(), ph_b(), std::move(child));
        }
        if (budget < binary_min) continue;
        int left_budget = 1 + uniform_int(rng, budget - 2);  // in [1, budget-2]
        NodePtr l = random_tree(left_budget, variables, rng);
        NodePtr r = random_tree(budget - 1 - left_budget, variables, rng);
        if (pick == kAnd) return make_and(std::move(l), std::move(r));
        if (pick == kOr) return make_or(std::move(l), std::move(r));
        return make_until(ph_a(), ph_b(), std::move(l), std::move(r));
    }
}

}  // namespace

std::vector<ParametricFormula> generate_initial_formulae(int Ne, int s,
                                                         const std::vector<std::string>& variables,
                                                         std::mt19937_64& rng) {
    if (Ne < 4) throw Error("population size must be at least 4");
    if (s < 1) throw Error("max initial formula size must be at least 1");
    if (variables.empty()) throw Error("no variables to build formulas over");

    // Bodies: atoms and pairwise conjunctions/disjunctions of two atoms.
    std::vector<NodePtr> atoms;
    for (const std::string& v : variables) {
        atoms.push_back(placeholder_atom(v, Relation::Greater));
        atoms.push_back(placeholder_atom(v, Relation::LessEqual));
    }
    std::vector<NodePtr> bodies = atoms;
    for (size_t i = 0; i < atoms.size(); ++i)
        for (size_t j = i; j < atoms.size(); ++j) {
            bodies.push_back(make_and(atoms[i], atoms[j]));
            bodies.push_back(make_or(atoms[i], atoms[j]));
        }

    std::vector<NodePtr> family;
    for (const NodePtr& b : bodies) {
        family.push_back(make_eventually(ph_a(), ph_b(), b));
        family.push_back(make_globally(ph_a(), ph_b(), b));
    }
    for (const NodePtr& l : atoms)
        for (const NodePtr& r : atoms) family.push_back(make_until(ph_a(), ph_b(), l, r));

    int n_l = std::min(Ne / 2, static_cast<int>(family.size()));
    std::vector<ParametricFormula> out;
    out.reserve(Ne);
    if (n_l == static_cast<int>(family.size())) {
        for (const NodePtr& f : family) out.emplace_back(canonicalize_params(f));
    } else {
        // uniform draw without replacement
        std::vector<int> idx(family.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        for (int k = 0; k < n_l; ++k) {
            int pick = k + uniform_int(rng, static_cast<int>(idx.size()) - k);
            std::swap(idx[k], idx[pick]);
            out.emplace_back(canonicalize_params(family[idx[k]]));
        }
    }
    while (static_cast<int>(out.size()) < Ne)
        out.emplace_back(canonicalize_params(random_tree(s, variables, rng)));
    return out;
}

std::pair<ParametricFormula, ParametricFormula> recombine(const ParametricFormula& a,
                                                          const ParametricFormula& b,
                                                          std::mt19937_64& rng) {
    int ia = uniform_int(rng, tree_size(a.root()));
    int ib = uniform_int(rng, tree_size(b.root()));
    NodePtr sub_a = subtree_at(a.root(), ia);
    NodePtr sub_b = subtree_at(b.root(), ib);
    NodePtr child1 = replace_subtree(a.root(), ia, sub_b);
    NodePtr child2 = replace_subtree(b.root(), ib, sub_a);
    return {ParametricFormula(canonicalize_params(child1)),
            ParametricFormula(canonicalize_params(child2))};
}

namespace {

enum class Move { FlipRel, SwapFG, ToUntil, UntilToF, SwapAndOr, SubstVar, ToggleNot };

std::vector<Move> applicable_moves(const Node& n, int variable_count) {
    switch (n.kind) {
        case NodeKind::Atom: {
            std::vector<Move> m{Move::FlipRel};
            if (variable_count > 1) m.push_back(Move::SubstVar);
            return m;
        }
        case NodeKind::Not:
            return {Move::ToggleNot};
        case NodeKind::And:
        case NodeKind::Or:
            return {Move::SwapAndOr, Move::ToggleNot};
        case NodeKind::Eventually:
        case NodeKind::Globally:
            return {Move::SwapFG, Move::ToUntil, Move::ToggleNot};
        case NodeKind::Until:
            return {Move::UntilToF, Move::ToggleNot};
        case NodeKind::True:
            return {Move::ToggleNot};
    }
    return {};
}

NodePtr apply_move(const NodePtr& n, Move move, const std::vector<std::string>& variables,
                   std::mt19937_64& rng) {
    switch (move) {
        case Move::FlipRel:
            return make_atom(n->variable,
                             n->rel == Relation::Greater ? Relation::LessEqual : Relation::Greater,
                             n->threshold);
        case Move::SubstVar: {
            std::vector<std::string> others;
            for (const std::string& v : variables)
                if (v != n->variable) others.push_back(v);
            const std::string& pick = others[uniform_int(rng, static_cast<int>(others.size()))];
            return make_atom(pick, n->rel, n->threshold);
        }
        case Move::SwapFG:
            return n->kind == NodeKind::Eventually
                       ? make_globally(n->lower, n->upper, n->left)
                       : make_eventually(n->lower, n->upper, n->left);
        case Move::ToUntil:
            return make_until(n->lower, n->upper, random_atom(variables, rng), n->left);
        case Move::UntilToF:
            return make_eventually(n->lower, n->upper, n->right);
        case Move::SwapAndOr:
            return n->kind == NodeKind::And ? make_or(n->left, n->right)
                                            : make_and(n->left, n->right);
        case Move::ToggleNot:
            if (n->kind == NodeKind::Not) return n->left;
            return make_not(n);
    }
    throw Error("unreachable");
}

}  // namespace

ParametricFormula mutate(const ParametricFormula& a, const std::vector<std::string>& variables,
                         std::mt19937_64& rng) {
    if (variables.empty()) throw Error("no variables for mutation");
    int idx = uniform_int(rng, tree_size(a.root()));
    NodePtr target = subtree_at(a.root(), idx);
    std::vector<Move> menu = applicable_moves(*target, static_cast<int>(variables.size()));
    Move move = menu[uniform_int(rng, static_cast<int>(menu.size()))];
    NodePtr mutated = apply_move(target, move, variables, rng);
    return ParametricFormula(canonicalize_params(replace_subtree(a.root(), idx, mutated)));
}

std::vector<ParametricFormula> evolve(const std::vector<ParametricFormula>& parents, double alpha,
                                      int Ne, const std::vector<std::string>& variables,
                                      std::mt19937_64& rng) {
    if (parents.size() < 2) throw Error("evolve requires at least 2 parents");
    std::vector<ParametricFormula> out;
    out.reserve(Ne);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (static_cast<int>(out.size()) < Ne) {
        if (unit(rng) <= alpha) {
            const ParametricFormula& parent = parents[uniform_int(rng, static_cast<int>(parents.size()))];
            out.push_back(mutate(parent, variables, rng));
        } else {
            int i = uniform_int(rng, static_cast<int>(parents.size()));
            int j = uniform_int(rng, static_cast<int>(parents.size()) - 1);
            if (j >= i) ++j;
            auto [c1, c2] = recombine(parents[i], parents[j], rng);
            out.push_back(std::move(c1));
            if (static_cast<int>(out.size()) < Ne) out.push_back(std::move(c2));
        }
    }
    return out;
}

}  // namespace stlmine
