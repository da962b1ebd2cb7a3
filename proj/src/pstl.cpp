#include "stlmine/pstl.hpp"

#include <algorithm>
#include <cmath>

namespace stlmine {

ParameterSpace::ParameterSpace(std::vector<ParamDim> dims, double grid_step)
    : dims_(std::move(dims)), grid_step_(grid_step) {
    if (!(grid_step_ > 0)) throw Error("parameter space requires grid_step > 0");
    for (const auto& d : dims_)
        if (!(d.lo <= d.hi))
            throw Error("parameter '" + d.name + "' has empty range [" + format_number(d.lo) +
                        "," + format_number(d.hi) + "]");
    for (size_t i = 0; i < dims_.size(); ++i)
        for (size_t j = i + 1; j < dims_.size(); ++j)
            if (dims_[i].name == dims_[j].name)
                throw Error("duplicate parameter '" + dims_[i].name + "'");
}

int ParameterSpace::index_of(const std::string& name) const {
    for (size_t i = 0; i < dims_.size(); ++i)
        if (dims_[i].name == name) return static_cast<int>(i);
    return -1;
}

ParameterConfiguration ParameterSpace::center() const {
    std::vector<double> u(dims_.size(), 0.5);
    return from_unit_cube(u, *this);
}

namespace {

Num resolve(const Num& v, const ParameterConfiguration& theta, int& used) {
    if (!v.is_param()) return v;
    auto it = theta.find(v.param);
    if (it == theta.end()) throw Error("missing value for placeholder ?" + v.param);
    ++used;
    return Num(it->second);
}

NodePtr instantiate_rec(const NodePtr& n, const ParameterConfiguration& theta, int& used) {
    if (!n) return nullptr;
    switch (n->kind) {
        case NodeKind::True:
            return n;
        case NodeKind::Atom:
            return make_atom(n->variable, n->rel, resolve(n->threshold, theta, used));
        case NodeKind::Not:
            return make_not(instantiate_rec(n->left, theta, used));
        case NodeKind::And:
            return make_and(instantiate_rec(n->left, theta, used),
                            instantiate_rec(n->right, theta, used));
        case NodeKind::Or:
            return make_or(instantiate_rec(n->left, theta, used),
                           instantiate_rec(n->right, theta, used));
        case NodeKind::Eventually:
            return make_eventually(resolve(n->lower, theta, used), resolve(n->upper, theta, used),
                                   instantiate_rec(n->left, theta, used));
        case NodeKind::Globally:
            return make_globally(resolve(n->lower, theta, used), resolve(n->upper, theta, used),
                                 instantiate_rec(n->left, theta, used));
        case NodeKind::Until:
            return make_until(resolve(n->lower, theta, used), resolve(n->upper, theta, used),
                              instantiate_rec(n->left, theta, used),
                              instantiate_rec(n->right, theta, used));
    }
    throw Error("unreachable");
}

}  // namespace

Formula instantiate(const ParametricFormula& p, const ParameterConfiguration& theta) {
    int used = 0;
    NodePtr root = instantiate_rec(p.root(), theta, used);
    if (used != static_cast<int>(theta.size())) {
        for (const auto& [name, _] : theta) {
            bool found = false;
            for (const Node* nd : collect_nodes(p.root()))
                if ((nd->threshold.is_param() && nd->threshold.param == name) ||
                    (nd->lower.is_param() && nd->lower.param == name) ||
                    (nd->upper.is_param() && nd->upper.param == name))
                    found = true;
            if (!found) throw Error("configuration names unknown placeholder ?" + name);
        }
    }
    return Formula(std::move(root));
}

namespace {

void collect_dims(const NodePtr& n, const Dataset& d, std::vector<ParamDim>& dims) {
    if (!n) return;
    if (n->kind == NodeKind::Atom && n->threshold.is_param()) {
        ParamDim dim;
        dim.name = n->threshold.param;
        dim.kind = ParamKind::Threshold;
        dim.variable = n->variable;
        std::tie(dim.lo, dim.hi) = d.variable_range(n->variable);
        dims.push_back(std::move(dim));
    }
    if (n->kind == NodeKind::Eventually || n->kind == NodeKind::Globally ||
        n->kind == NodeKind::Until) {
        int a_idx = -1, b_idx = -1;
        if (n->lower.is_param()) {
            ParamDim dim;
            dim.name = n->lower.param;
            dim.kind = ParamKind::TemporalLower;
            dim.lo = 0.0;
            dim.hi = d.horizon();
            a_idx = static_cast<int>(dims.size());
            dims.push_back(std::move(dim));
        }
        if (n->upper.is_param()) {
            ParamDim dim;
            dim.name = n->upper.param;
            dim.kind = ParamKind::TemporalUpper;
            dim.lo = 0.0;
            dim.hi = d.horizon();
            b_idx = static_cast<int>(dims.size());
            dims.push_back(std::move(dim));
        }
        if (a_idx >= 0 && b_idx >= 0) {
            dims[a_idx].pair = b_idx;
            dims[b_idx].pair = a_idx;
        } else if (a_idx >= 0) {
            dims[a_idx].partner_value = n->upper.value;
        } else if (b_idx >= 0) {
            dims[b_idx].partner_value = n->lower.value;
        }
    }
    collect_dims(n->left, d, dims);
    collect_dims(n->right, d, dims);
}

}  // namespace

ParameterSpace default_space(const ParametricFormula& p, const Dataset& d) {
    if (d.total() == 0) throw Error("default_space on empty dataset");
    d.check();
    std::vector<ParamDim> dims;
    collect_dims(p.root(), d, dims);
    return ParameterSpace(std::move(dims), d.dt());
}

namespace {

Num hinted(const Num& v, const ParameterConfiguration& theta) {
    if (!v.is_param()) return v;
    auto it = theta.find(v.param);
    if (it == theta.end()) return v;
    Num out = v;
    out.hint = it->second;
    return out;
}

NodePtr with_hints_rec(const NodePtr& n, const ParameterConfiguration& theta) {
    if (!n) return nullptr;
    Node copy = *n;
    copy.threshold = hinted(n->threshold, theta);
    copy.lower = hinted(n->lower, theta);
    copy.upper = hinted(n->upper, theta);
    copy.left = with_hints_rec(n->left, theta);
    copy.right = with_hints_rec(n->right, theta);
    return std::make_shared<const Node>(std::move(copy));
}

}  // namespace

ParametricFormula with_hints(const ParametricFormula& p, const ParameterConfiguration& theta) {
    return ParametricFormula(with_hints_rec(p.root(), theta));
}

std::vector<double> to_unit_cube(const ParameterConfiguration& theta, const ParameterSpace& space) {
    if (static_cast<int>(theta.size()) != space.size())
        throw Error("configuration dimension mismatch: got " + std::to_string(theta.size()) +
                    ", space has " + std::to_string(space.size()));
    std::vector<double> u(space.size());
    for (int i = 0; i < space.size(); ++i) {
        const ParamDim& dim = space.dim(i);
        auto it = theta.find(dim.name);
        if (it == theta.end()) throw Error("configuration missing parameter '" + dim.name + "'");
        double width = dim.hi - dim.lo;
        u[i] = width > 0 ? (it->second - dim.lo) / width : 0.5;
    }
    return u;
}

ParameterConfiguration from_unit_cube(const std::vector<double>& u, const ParameterSpace& space) {
    if (static_cast<int>(u.size()) != space.size())
        throw Error("unit-cube point dimension mismatch: got " + std::to_string(u.size()) +
                    ", space has " + std::to_string(space.size()));
    std::vector<double> vals(space.size());
    for (int i = 0; i < space.size(); ++i) {
        const ParamDim& dim = space.dim(i);
        double ui = std::clamp(u[i], 0.0, 1.0);
        vals[i] = dim.lo + ui * (dim.hi - dim.lo);
    }
    // Repair every temporal interval to a < b.
    double step = space.grid_step();
    for (int i = 0; i < space.size(); ++i) {
        const ParamDim& dim = space.dim(i);
        if (dim.kind == ParamKind::TemporalLower && dim.pair >= 0) {
            double& a = vals[i];
            double& b = vals[dim.pair];
            if (a > b) std::swap(a, b);
            if (a == b) {
                if (b + step <= space.dim(dim.pair).hi)
                    b += step;
                else if (a - step >= dim.lo)
                    a -= step;
                else
                    b = a + step;  // box narrower than one grid step
            }
        } else if (dim.kind == ParamKind::TemporalLower) {
            // literal upper endpoint: only a can move
            double b = dim.partner_value;
            if (!(vals[i] < b)) vals[i] = std::max(dim.lo, b - step);
            if (!(vals[i] < b))
                throw Error("cannot repair interval for parameter '" + dim.name + "'");
        } else if (dim.kind == ParamKind::TemporalUpper && dim.pair < 0) {
            // literal lower endpoint: only b can move
            double a = dim.partner_value;
            if (!(a < vals[i])) vals[i] = a + step;
        }
    }
    ParameterConfiguration theta;
    for (int i = 0; i < space.size(); ++i) theta[space.dim(i).name] = vals[i];
    return theta;
}

}  // namespace stlmine
