#pragma once

#include "stlmine/formula.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {

// Quantitative semantics on the sample grid.  Temporal operators quantify
// over samples j with t_j in [t_i + a, t_i + b]; window membership uses
// j_lo = ceil(a/dt - 1e-9), j_hi = floor(b/dt + 1e-9) in grid steps.  An
// empty window yields -inf under sup and +inf under inf; the inner inf of
// Until runs from the evaluation index i up to (excluding) the witness j.
double robustness(const Formula& f, const Trace& x, int i);

// robustness(f, x, 0) > 0; zero robustness counts as non-satisfying.
bool satisfies(const Formula& f, const Trace& x);

}  // namespace stlmine
