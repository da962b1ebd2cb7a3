#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "stlmine/util.hpp"

namespace stlmine {

enum class NodeKind { True, Atom, Not, And, Or, Eventually, Globally, Until };
enum class Relation { Greater, LessEqual };

/// A numeric slot in a formula tree: either a literal value or a named
/// placeholder. Placeholders carry an optional hint (best known value from a
/// previous optimization) used to warm-start parameter learning.
struct Num {
    double value = 0.0;
    std::string param;  // empty => literal
    double hint = std::numeric_limits<double>::quiet_NaN();

    Num() = default;
    Num(double v) : value(v) {}  // NOLINT: implicit by design
    static Num placeholder(const std::string& name) {
        Num n;
        n.param = name;
        return n;
    }
    bool is_param() const { return !param.empty(); }
    bool operator==(const Num& o) const { return value == o.value && param == o.param; }
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::True;
    // Atom fields
    std::string variable;
    Relation rel = Relation::Greater;
    Num threshold;
    // Temporal interval
    Num lower, upper;
    // Children: Not/Eventually/Globally use `left` only.
    NodePtr left, right;
};

// Node factories. Interval bounds are validated when both are literal.
NodePtr make_true();
NodePtr make_atom(std::string variable, Relation rel, Num threshold);
NodePtr make_not(NodePtr child);
NodePtr make_and(NodePtr l, NodePtr r);
NodePtr make_or(NodePtr l, NodePtr r);
NodePtr make_eventually(Num a, Num b, NodePtr child);
NodePtr make_globally(Num a, Num b, NodePtr child);
NodePtr make_until(Num a, Num b, NodePtr l, NodePtr r);

bool tree_equal(const NodePtr& a, const NodePtr& b);
int tree_size(const NodePtr& n);
std::string format_tree(const NodePtr& n);

/// Pre-order list of nodes (root first).
std::vector<const Node*> collect_nodes(const NodePtr& root);
/// Subtree rooted at pre-order index `idx`.
NodePtr subtree_at(const NodePtr& root, int idx);
/// New tree with the subtree at pre-order index `idx` replaced.
NodePtr replace_subtree(const NodePtr& root, int idx, const NodePtr& replacement);
/// Renames every placeholder canonically in pre-order (k1.., a1/b1..),
/// preserving hints. Literal slots are untouched.
NodePtr canonicalize_params(const NodePtr& root);

/// A concrete STL formula: no placeholders, every interval 0 <= a < b.
class Formula {
public:
    Formula() : root_(make_true()) {}
    explicit Formula(NodePtr root);

    const NodePtr& root() const { return root_; }
    int size() const { return tree_size(root_); }
    std::string text() const { return format_tree(root_); }
    bool operator==(const Formula& o) const { return tree_equal(root_, o.root_); }

private:
    NodePtr root_;
};

/// A formula template: thresholds and interval endpoints may be placeholders.
/// Placeholder names are unique; temporal placeholders appear only in interval
/// positions and threshold placeholders only in atoms (by construction of Num
/// slots, so only uniqueness needs checking).
class ParametricFormula {
public:
    ParametricFormula() : root_(make_true()) {}
    explicit ParametricFormula(NodePtr root);

    const NodePtr& root() const { return root_; }
    int size() const { return tree_size(root_); }
    std::string text() const { return format_tree(root_); }
    bool has_placeholders() const;
    bool operator==(const ParametricFormula& o) const { return tree_equal(root_, o.root_); }

private:
    NodePtr root_;
};

/// Negation normal form: negations eliminated by flipping atom relations and
/// dualizing F/G; ¬(φ U ψ) and ¬true have no dual in this grammar and keep
/// their Not node. Robustness-preserving, bit for bit.
Formula nnf(const Formula& f);

/// Translates every atom threshold by c (x>k -> x>k+c, x<=k -> x<=k-c) so that
/// robustness(shift(f,c), x, i) == robustness(f, x, i) - c up to rounding.
/// Residual negations are handled by recursing with -c, which keeps the law
/// exact, so this accepts any formula, NNF or not.
Formula shift(const Formula& f, double c);

}  // namespace stlmine
