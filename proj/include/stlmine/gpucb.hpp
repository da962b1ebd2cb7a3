#pragma once

#include <functional>

#include "stlmine/gp.hpp"

namespace stlmine {

struct UcbConfig {
    int n_init = 10;         // initial space-filling design size
    int max_iter = 40;       // total score-evaluation budget (includes the design)
    double delta = 0.1;      // beta_t = 2 log(t^2 pi^2 / (6 delta))
    std::uint64_t seed = 0;
    double eps_stop = 1e-3;  // stop when acquisition - incumbent < eps_stop ...
    int k_stop = 5;          // ... for this many consecutive rounds
    int refit_every = 5;     // hyperparameter refit period (in observations)
    double fail_below = -1e8;  // scores at or below this count as failed evaluations
};

// Thrown when the whole evaluation budget produced only failed scores.
struct NoFiniteScore : Error {
    NoFiniteScore() : Error("no finite score within the evaluation budget") {}
};

struct UcbRound {
    std::vector<double> u;
    double y = 0.0;
    double noise_estimate = 0.0;
    double acquisition = std::numeric_limits<double>::quiet_NaN();  // NaN during the design
    double incumbent = std::numeric_limits<double>::quiet_NaN();
};

struct OptimizeResult {
    std::vector<double> u_best;   // observed point with the best posterior mean
    double estimated_best = 0.0;  // posterior mean at u_best
    int evaluations = 0;
    std::vector<UcbRound> history;
};

// score(u) -> (y, noise_estimate).  Maximizes over [0,1]^dim: evaluates an
// initial scrambled-Halton design (warm_starts, if given, replace its first
// points), then repeatedly fits the GP and evaluates the maximizer of
// mean + sqrt(beta)*std over 1024 rotated-Halton candidates refined by a
// coordinate pattern search.  Failed evaluations (non-finite y, or
// y <= fail_below) enter the emulator at a pessimistic floor so the search
// avoids the region, and are never returned as the best point.  Deterministic
// for a fixed seed.  Throws if the whole budget yields only failures.
OptimizeResult optimize(
    const std::function<std::pair<double, double>(const std::vector<double>&)>& score, int dim,
    const UcbConfig& cfg, const std::vector<std::vector<double>>& warm_starts = {});

// Deterministic Halton point (1-based index) with a per-dimension rotation
// offset, used for the design and the candidate sets.
std::vector<double> halton_point(int index, int dim, const std::vector<double>& rotation);

}  // namespace stlmine
