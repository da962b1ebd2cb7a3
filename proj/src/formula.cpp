#include "stlmine/formula.hpp"

#include <map>
#include <set>

namespace stlmine {

namespace {

void validate_interval(const Num& a, const Num& b) {
    if (a.is_param() || b.is_param()) return;
    if (!(a.value >= 0.0)) throw Error("interval lower bound must be >= 0, got " + format_number(a.value));
    if (!(a.value < b.value))
        throw Error("interval requires a < b, got [" + format_number(a.value) + "," + format_number(b.value) + "]");
}

NodePtr node(Node n) { return std::make_shared<const Node>(std::move(n)); }

}  // namespace

NodePtr make_true() {
    Node n;
    n.kind = NodeKind::True;
    return node(std::move(n));
}

NodePtr make_atom(std::string variable, Relation rel, Num threshold) {
    if (variable.empty()) throw Error("atom requires a variable name");
    Node n;
    n.kind = NodeKind::Atom;
    n.variable = std::move(variable);
    n.rel = rel;
    n.threshold = std::move(threshold);
    if (!n.threshold.is_param() && !std::isfinite(n.threshold.value))
        throw Error("atom threshold must be finite");
    return node(std::move(n));
}

NodePtr make_not(NodePtr child) {
    Node n;
    n.kind = NodeKind::Not;
    n.left = std::move(child);
    return node(std::move(n));
}

NodePtr make_and(NodePtr l, NodePtr r) {
    Node n;
    n.kind = NodeKind::And;
    n.left = std::move(l);
    n.right = std::move(r);
    return node(std::move(n));
}

NodePtr make_or(NodePtr l, NodePtr r) {
    Node n;
    n.kind = NodeKind::Or;
    n.left = std::move(l);
    n.right = std::move(r);
    return node(std::move(n));
}

NodePtr make_eventually(Num a, Num b, NodePtr child) {
    validate_interval(a, b);
    Node n;
    n.kind = NodeKind::Eventually;
    n.lower = std::move(a);
    n.upper = std::move(b);
    n.left = std::move(child);
    return node(std::move(n));
}

NodePtr make_globally(Num a, Num b, NodePtr child) {
    validate_interval(a, b);
    Node n;
    n.kind = NodeKind::Globally;
    n.lower = std::move(a);
    n.upper = std::move(b);
    n.left = std::move(child);
    return node(std::move(n));
}

NodePtr make_until(Num a, Num b, NodePtr l, NodePtr r) {
    validate_interval(a, b);
    Node n;
    n.kind = NodeKind::Until;
    n.lower = std::move(a);
    n.upper = std::move(b);
    n.left = std::move(l);
    n.right = std::move(r);
    return node(std::move(n));
}

bool tree_equal(const NodePtr& a, const NodePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::True:
            return true;
        case NodeKind::Atom:
            return a->variable == b->variable && a->rel == b->rel && a->threshold == b->threshold;
        case NodeKind::Not:
            return tree_equal(a->left, b->left);
        case NodeKind::And:
        case NodeKind::Or:
            return tree_equal(a->left, b->left) && tree_equal(a->right, b->right);
        case NodeKind::Eventually:
        case NodeKind::Globally:
            return a->lower == b->lower && a->upper == b->upper && tree_equal(a->left, b->left);
        case NodeKind::Until:
            return a->lower == b->lower && a->upper == b->upper && tree_equal(a->left, b->left) &&
                   tree_equal(a->right, b->right);
    }
    return false;
}

int tree_size(const NodePtr& n) {
    if (!n) return 0;
    return 1 + tree_size(n->left) + tree_size(n->right);
}

namespace {

std::string format_num(const Num& v) {
    if (v.is_param()) return "?" + v.param;
    return format_number(v.value);
}

std::string interval_text(const Node& n) {
    return "[" + format_num(n.lower) + "," + format_num(n.upper) + "]";
}

}  // namespace

std::string format_tree(const NodePtr& n) {
    if (!n) return "";
    switch (n->kind) {
        case NodeKind::True:
            return "true";
        case NodeKind::Atom:
            return "(" + n->variable + (n->rel == Relation::Greater ? " > " : " <= ") +
                   format_num(n->threshold) + ")";
        case NodeKind::Not:
            return "!" + format_tree(n->left);
        case NodeKind::And:
            return "(" + format_tree(n->left) + " & " + format_tree(n->right) + ")";
        case NodeKind::Or:
            return "(" + format_tree(n->left) + " | " + format_tree(n->right) + ")";
        case NodeKind::Eventually:
            return "F" + interval_text(*n) + " " + format_tree(n->left);
        case NodeKind::Globally:
            return "G" + interval_text(*n) + " " + format_tree(n->left);
        case NodeKind::Until:
            return "(" + format_tree(n->left) + " U" + interval_text(*n) + " " + format_tree(n->right) + ")";
    }
    return "";
}

namespace {

void collect_rec(const NodePtr& n, std::vector<const Node*>& out) {
    if (!n) return;
    out.push_back(n.get());
    collect_rec(n->left, out);
    collect_rec(n->right, out);
}

NodePtr subtree_rec(const NodePtr& n, int& idx) {
    if (!n) return nullptr;
    if (idx == 0) return n;
    --idx;
    if (auto r = subtree_rec(n->left, idx)) return r;
    return subtree_rec(n->right, idx);
}

NodePtr replace_rec(const NodePtr& n, int& idx, const NodePtr& replacement) {
    if (!n) return nullptr;
    if (idx == 0) {
        --idx;
        return replacement;
    }
    --idx;
    Node copy = *n;
    if (n->left) {
        copy.left = replace_rec(n->left, idx, replacement);
        if (idx < 0) return node(std::move(copy));
    }
    if (n->right) copy.right = replace_rec(n->right, idx, replacement);
    return node(std::move(copy));
}

struct Renamer {
    int next_threshold = 1;
    int next_interval = 1;

    Num rename_threshold(const Num& v) {
        if (!v.is_param()) return v;
        Num out = v;
        out.param = "k" + std::to_string(next_threshold++);
        return out;
    }
    std::pair<Num, Num> rename_interval(const Num& a, const Num& b) {
        if (!a.is_param() && !b.is_param()) return {a, b};
        int id = next_interval++;
        Num na = a, nb = b;
        if (a.is_param()) na.param = "a" + std::to_string(id);
        if (b.is_param()) nb.param = "b" + std::to_string(id);
        return {na, nb};
    }

    NodePtr walk(const NodePtr& n) {
        if (!n) return nullptr;
        Node copy = *n;
        if (n->kind == NodeKind::Atom) {
            copy.threshold = rename_threshold(n->threshold);
        } else if (n->kind == NodeKind::Eventually || n->kind == NodeKind::Globally ||
                   n->kind == NodeKind::Until) {
            std::tie(copy.lower, copy.upper) = rename_interval(n->lower, n->upper);
        }
        copy.left = walk(n->left);
        copy.right = walk(n->right);
        return node(std::move(copy));
    }
};

}  // namespace

std::vector<const Node*> collect_nodes(const NodePtr& root) {
    std::vector<const Node*> out;
    collect_rec(root, out);
    return out;
}

NodePtr subtree_at(const NodePtr& root, int idx) {
    if (idx < 0 || idx >= tree_size(root)) throw Error("subtree index out of range");
    int i = idx;
    return subtree_rec(root, i);
}

NodePtr replace_subtree(const NodePtr& root, int idx, const NodePtr& replacement) {
    if (idx < 0 || idx >= tree_size(root)) throw Error("subtree index out of range");
    int i = idx;
    NodePtr out = replace_rec(root, i, replacement);
    return out;
}

NodePtr canonicalize_params(const NodePtr& root) {
    Renamer r;
    return r.walk(root);
}

namespace {

void check_concrete(const NodePtr& n) {
    if (!n) return;
    if (n->kind == NodeKind::Atom && n->threshold.is_param())
        throw Error("formula contains unresolved placeholder ?" + n->threshold.param);
    if (n->lower.is_param() || n->upper.is_param())
        throw Error("formula contains unresolved interval placeholder");
    if (n->kind == NodeKind::Eventually || n->kind == NodeKind::Globally || n->kind == NodeKind::Until)
        validate_interval(n->lower, n->upper);
    check_concrete(n->left);
    check_concrete(n->right);
}

void collect_params(const NodePtr& n, std::vector<std::string>& names) {
    if (!n) return;
    if (n->threshold.is_param()) names.push_back(n->threshold.param);
    if (n->lower.is_param()) names.push_back(n->lower.param);
    if (n->upper.is_param()) names.push_back(n->upper.param);
    collect_params(n->left, names);
    collect_params(n->right, names);
}

}  // namespace

Formula::Formula(NodePtr root) : root_(std::move(root)) {
    if (!root_) throw Error("empty formula");
    check_concrete(root_);
}

ParametricFormula::ParametricFormula(NodePtr root) : root_(std::move(root)) {
    if (!root_) throw Error("empty formula template");
    std::vector<std::string> names;
    collect_params(root_, names);
    std::set<std::string> seen;
    for (const auto& name : names)
        if (!seen.insert(name).second) throw Error("duplicate placeholder ?" + name);
}

bool ParametricFormula::has_placeholders() const {
    std::vector<std::string> names;
    collect_params(root_, names);
    return !names.empty();
}

namespace {

NodePtr nnf_rec(const NodePtr& n, bool negated) {
    switch (n->kind) {
        case NodeKind::True:
            // no dual constant in the grammar; keep the negation
            return negated ? make_not(n) : n;
        case NodeKind::Atom:
            if (!negated) return n;
            return make_atom(n->variable,
                             n->rel == Relation::Greater ? Relation::LessEqual : Relation::Greater,
                             n->threshold);
        case NodeKind::Not:
            return nnf_rec(n->left, !negated);
        case NodeKind::And:
            return negated ? make_or(nnf_rec(n->left, true), nnf_rec(n->right, true))
                           : make_and(nnf_rec(n->left, false), nnf_rec(n->right, false));
        case NodeKind::Or:
            return negated ? make_and(nnf_rec(n->left, true), nnf_rec(n->right, true))
                           : make_or(nnf_rec(n->left, false), nnf_rec(n->right, false));
        case NodeKind::Eventually:
            return negated ? make_globally(n->lower, n->upper, nnf_rec(n->left, true))
                           : make_eventually(n->lower, n->upper, nnf_rec(n->left, false));
        case NodeKind::Globally:
            return negated ? make_eventually(n->lower, n->upper, nnf_rec(n->left, true))
                           : make_globally(n->lower, n->upper, nnf_rec(n->left, false));
        case NodeKind::Until: {
            // Until has no dual here (no Release operator); normalize the
            // children and keep a single Not on top when negated.
            NodePtr u = make_until(n->lower, n->upper, nnf_rec(n->left, false), nnf_rec(n->right, false));
            return negated ? make_not(u) : u;
        }
    }
    throw Error("unreachable");
}

NodePtr shift_rec(const NodePtr& n, double c) {
    switch (n->kind) {
        case NodeKind::True:
            return n;
        case NodeKind::Atom: {
            Num t = n->threshold;
            t.value = n->rel == Relation::Greater ? t.value + c : t.value - c;
            return make_atom(n->variable, n->rel, t);
        }
        case NodeKind::Not:
            return make_not(shift_rec(n->left, -c));
        case NodeKind::And:
            return make_and(shift_rec(n->left, c), shift_rec(n->right, c));
        case NodeKind::Or:
            return make_or(shift_rec(n->left, c), shift_rec(n->right, c));
        case NodeKind::Eventually:
            return make_eventually(n->lower, n->upper, shift_rec(n->left, c));
        case NodeKind::Globally:
            return make_globally(n->lower, n->upper, shift_rec(n->left, c));
        case NodeKind::Until:
            return make_until(n->lower, n->upper, shift_rec(n->left, c), shift_rec(n->right, c));
    }
    throw Error("unreachable");
}

}  // namespace

Formula nnf(const Formula& f) { return Formula(nnf_rec(f.root(), false)); }

Formula shift(const Formula& f, double c) { return Formula(shift_rec(f.root(), c)); }

}  // namespace stlmine
