#pragma once

#include <random>

#include "stlmine/formula.hpp"

namespace stlmine {

// Seed population: an enumerated family of shallow templates plus uniform
// random trees.  The family consists of F[?a,?b] B and G[?a,?b] B where B is
// an atom (v > ?k) / (v <= ?k) or a conjunction/disjunction of two atoms, and
// A1 U[?a,?b] A2 over atom pairs.  min(Ne/2, family size) members are drawn
// from the family (uniformly, without replacement, when it is larger); the
// rest are random trees of size <= s whose leaves are placeholder atoms.
std::vector<ParametricFormula> generate_initial_formulae(int Ne, int s,
                                                         const std::vector<std::string>& variables,
                                                         std::mt19937_64& rng);

// Swaps one uniformly chosen subtree of each parent; placeholder names are
// re-uniquified (value hints survive).
std::pair<ParametricFormula, ParametricFormula> recombine(const ParametricFormula& a,
                                                          const ParametricFormula& b,
                                                          std::mt19937_64& rng);

// Applies one uniformly chosen applicable move at one uniformly chosen node:
// inequality flip, F <-> G, F/G -> U (fresh atom on the left), U -> F of the
// right child, And <-> Or, atom-variable substitution, or negation toggle on
// a non-atom subtree.
ParametricFormula mutate(const ParametricFormula& a, const std::vector<std::string>& variables,
                         std::mt19937_64& rng);

// Draws offspring until exactly Ne exist: with probability alpha mutate one
// uniformly chosen parent (1 child), otherwise recombine two distinct parents
// (2 children).
std::vector<ParametricFormula> evolve(const std::vector<ParametricFormula>& parents, double alpha,
                                      int Ne, const std::vector<std::string>& variables,
                                      std::mt19937_64& rng);

}  // namespace stlmine
