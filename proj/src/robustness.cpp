#include "stlmine/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stlmine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct WindowOffsets {
    int lo;  // ceil(a/dt - 1e-9)
    int hi;  // floor(b/dt + 1e-9)
};

WindowOffsets window_offsets(const Node& n, double dt) {
    return {static_cast<int>(std::ceil(n.lower.value / dt - 1e-9)),
            static_cast<int>(std::floor(n.upper.value / dt + 1e-9))};
}

// Evaluates the robustness signal of each node over only the index range its
// parent needs, so a top-level query at one index touches a bounded slice of
// the trace per subformula.
struct Evaluator {
    const Trace& x;
    int n;

    // out[i - lo] = rho(node, x, i) for i in [lo, hi]; requires 0 <= lo <= hi < n.
    std::vector<double> eval(const Node& nd, int lo, int hi) const {
        int m = hi - lo + 1;
        std::vector<double> out(m);
        switch (nd.kind) {
            case NodeKind::True:
                std::fill(out.begin(), out.end(), kInf);
                return out;
            case NodeKind::Atom: {
                int v = x.var_index(nd.variable);
                const auto& row = x.values[v];
                double k = nd.threshold.value;
                if (nd.rel == Relation::Greater)
                    for (int i = lo; i <= hi; ++i) out[i - lo] = row[i] - k;
                else
                    for (int i = lo; i <= hi; ++i) out[i - lo] = k - row[i];
                return out;
            }
            case NodeKind::Not: {
                out = eval(*nd.left, lo, hi);
                for (double& v : out) v = -v;
                return out;
            }
            case NodeKind::And:
            case NodeKind::Or: {
                out = eval(*nd.left, lo, hi);
                std::vector<double> r = eval(*nd.right, lo, hi);
                if (nd.kind == NodeKind::And)
                    for (int i = 0; i < m; ++i) out[i] = std::min(out[i], r[i]);
                else
                    for (int i = 0; i < m; ++i) out[i] = std::max(out[i], r[i]);
                return out;
            }
            case NodeKind::Eventually:
            case NodeKind::Globally: {
                auto [wa, wb] = window_offsets(nd, x.dt);
                int clo = lo + wa, chi = std::min(hi + wb, n - 1);
                std::vector<double> c;
                if (clo <= chi) c = eval(*nd.left, clo, chi);
                bool is_f = nd.kind == NodeKind::Eventually;
                for (int i = lo; i <= hi; ++i) {
                    int jlo = i + wa, jhi = std::min(i + wb, n - 1);
                    double acc = is_f ? -kInf : kInf;
                    for (int j = jlo; j <= jhi; ++j)
                        acc = is_f ? std::max(acc, c[j - clo]) : std::min(acc, c[j - clo]);
                    out[i - lo] = acc;
                }
                return out;
            }
            case NodeKind::Until: {
                auto [wa, wb] = window_offsets(nd, x.dt);
                int rlo = lo + wa, rhi = std::min(hi + wb, n - 1);
                std::vector<double> r;
                if (rlo <= rhi) r = eval(*nd.right, rlo, rhi);
                int llo = lo, lhi = std::min(hi + wb, n - 1) - 1;
                std::vector<double> l;
                if (llo <= lhi) l = eval(*nd.left, llo, lhi);
                for (int i = lo; i <= hi; ++i) {
                    int jlo = i + wa, jhi = std::min(i + wb, n - 1);
                    double best = -kInf;
                    double prefix_min = kInf;  // inf of left over [i, j): empty at j = i
                    for (int j = i; j <= jhi; ++j) {
                        if (j >= jlo) best = std::max(best, std::min(r[j - rlo], prefix_min));
                        if (j < jhi) prefix_min = std::min(prefix_min, l[j - llo]);
                    }
                    out[i - lo] = best;
                }
                return out;
            }
        }
        throw Error("unreachable");
    }
};

void check_variables(const NodePtr& nd, const Trace& x) {
    if (!nd) return;
    if (nd->kind == NodeKind::Atom && x.var_index(nd->variable) < 0)
        throw Error("trace has no variable '" + nd->variable + "'");
    check_variables(nd->left, x);
    check_variables(nd->right, x);
}

}  // namespace

double robustness(const Formula& f, const Trace& x, int i) {
    if (i < 0 || i >= x.sample_count())
        throw Error("sample index " + std::to_string(i) + " out of range");
    check_variables(f.root(), x);
    Evaluator ev{x, x.sample_count()};
    return ev.eval(*f.root(), i, i)[0];
}

bool satisfies(const Formula& f, const Trace& x) { return robustness(f, x, 0) > 0.0; }

}  // namespace stlmine
