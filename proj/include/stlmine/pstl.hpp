#pragma once

#include <map>

#include "stlmine/dataset.hpp"
#include "stlmine/formula.hpp"

namespace stlmine {

enum class ParamKind { Threshold, TemporalLower, TemporalUpper };

// One search dimension of a template.  Temporal dimensions remember their
// partner endpoint: `pair` indexes the partner dimension when it is itself a
// placeholder, otherwise `partner_value` holds the literal endpoint.
struct ParamDim {
    std::string name;
    ParamKind kind = ParamKind::Threshold;
    std::string variable;  // thresholds: the variable of the owning atom
    int pair = -1;
    double partner_value = std::numeric_limits<double>::quiet_NaN();
    double lo = 0.0;
    double hi = 0.0;
};

using ParameterConfiguration = std::map<std::string, double>;

// Box over the placeholders of one template, ordered by first occurrence in a
// pre-order walk.  grid_step is the nudge used to repair a >= b after
// projection back from the unit cube.
class ParameterSpace {
public:
    ParameterSpace(std::vector<ParamDim> dims, double grid_step);

    int size() const { return static_cast<int>(dims_.size()); }
    const std::vector<ParamDim>& dims() const { return dims_; }
    const ParamDim& dim(int i) const { return dims_[i]; }
    int index_of(const std::string& name) const;  // -1 if absent
    double grid_step() const { return grid_step_; }

    // Center of the box, with a < b enforced on temporal pairs.
    ParameterConfiguration center() const;

private:
    std::vector<ParamDim> dims_;
    double grid_step_;
};

// Replaces every placeholder with its value; rejects missing or extra names
// and intervals with a >= b after substitution.
Formula instantiate(const ParametricFormula& p, const ParameterConfiguration& theta);

// Threshold placeholders get the data envelope of their atom's variable;
// temporal placeholders get [0, horizon].
ParameterSpace default_space(const ParametricFormula& p, const Dataset& d);

// Copy of the template whose placeholders carry theta's values as hints
// (used to warm-start parameter learning on descendants).
ParametricFormula with_hints(const ParametricFormula& p, const ParameterConfiguration& theta);

// Affine map between the space box and [0,1]^n (dimension order = space
// order).  from_unit_cube repairs temporal pairs that violate a < b by
// swapping the two values and, if still equal, nudging them one grid step
// apart (preferring to raise b, lowering a when b is pinned at its bound).
std::vector<double> to_unit_cube(const ParameterConfiguration& theta, const ParameterSpace& space);
ParameterConfiguration from_unit_cube(const std::vector<double>& u, const ParameterSpace& space);

}  // namespace stlmine
