#pragma once

#include "stlmine/dataset.hpp"
#include "stlmine/genetic.hpp"
#include "stlmine/gpucb.hpp"
#include "stlmine/pstl.hpp"

namespace stlmine {

// Score assigned when a formula's robustness statistics are non-finite
// (vacuous candidates such as bare `true` or windows past the horizon).
constexpr double kFailedDiscrimination = -1e9;

struct ScoredCandidate {
    ParametricFormula tpl;
    ParameterConfiguration best_theta;
    double g_score = 0.0;
    double noise_estimate = 0.0;
    double fitness = 0.0;  // set when a pool is ranked; depends on the pool's g_avg

    Formula instantiated() const { return instantiate(tpl, best_theta); }
    int size() const { return tree_size(tpl.root()); }
};

struct Generation {
    std::vector<ScoredCandidate> members;  // descending fitness
    int index = 0;
};

enum class SelectionMode { Roulette, Trunc };

struct RogeConfig {
    int Ne = 40;           // population size (even, >= 4)
    int Ng = 20;           // maximum generations (0 = score the seeds only)
    double alpha = 0.1;    // mutation probability
    int s = 4;             // max size of random seed trees
    std::uint64_t seed = 0;
    UcbConfig gpucb_light{10, 40};   // per-candidate parameter learning
    UcbConfig gpucb_final{10, 200};  // final refinement of the winner
    double penalty_p = 0.87055056329612413;  // 0.5^(1/5): size-5 formulas lose half their score
    SelectionMode selection = SelectionMode::Trunc;  // keep the fittest; roulette available
    double early_stop_eps = 1e-4;  // stop after k generations improving less than this
    int early_stop_k = 5;
    int max_threads = 1;

    void check() const;
};

// Discrimination score: (mean_p - mean_n) / (std_p + std_n + 1e-9) and the
// standard error of the numerator over the same denominator.  Non-finite
// robustness statistics yield {kFailedDiscrimination, 0}.
std::pair<double, double> discrimination(const Formula& f, const Dataset& d, int max_threads = 1);

// g_avg * (1 - p^size(f)): grows with formula size, halving the average score
// at size 5 under the default base.
double size_penalty(const Formula& f, double g_avg, double p = 0.87055056329612413);

// GP-UCB search over the template's parameter space; the returned g_score is
// the evaluated (not emulated) discrimination at best_theta.  Placeholder
// hints on the template seed the initial design.  A template whose every
// evaluation fails comes back with g_score = kFailedDiscrimination.  When
// opt_out is non-null it receives the optimizer rounds (empty on failure).
ScoredCandidate learning_parameters(const ParametricFormula& p, const Dataset& d,
                                    const ParameterSpace& space, const UcbConfig& cfg,
                                    int max_threads = 1, OptimizeResult* opt_out = nullptr);

// Sets fitness = G - size_penalty under the pool's own g_avg (average of the
// pool's non-failed g_scores) and sorts by descending fitness, ties broken by
// smaller size then formula text.
void rank_pool(std::vector<ScoredCandidate>& pool, double penalty_p);

// Fitness-proportional selection without replacement over shifted fitness
// (f - min f + eps).  Failed candidates are drawn only after every non-failed
// one is exhausted; all-equal fitness falls back to truncation, as does
// SelectionMode::Trunc.  The input must be ranked.
std::vector<ScoredCandidate> sample(const std::vector<ScoredCandidate>& pool, int count,
                                    SelectionMode mode, std::mt19937_64& rng);

struct MiningOutcome {
    Generation final_gen;
    std::vector<double> best_fitness_curve;  // one entry per scored generation
    int generations_run = 0;                 // loop iterations actually executed
};

// The full structure-search loop: seed templates, learn parameters, then per
// generation sample Ne/2 parents, evolve Ne offspring, learn their
// parameters, and sample Ne survivors from the merged 2Ne pool.  Stops early
// when the best fitness improves by less than early_stop_eps for
// early_stop_k consecutive generations.
MiningOutcome roge(const Dataset& d, const RogeConfig& cfg);

// Threshold translation: sweeps alpha over the training robustness values,
// minimizes training misclassification (ties: midpoint of the widest
// zero-error gap, then the value nearest (mean_p + mean_n)/2) and returns
// shift(nnf(f), alpha).
Formula calibrate(const Formula& f, const Dataset& d, int max_threads = 1);
double calibration_alpha(const Formula& f, const Dataset& d, int max_threads = 1);

struct MiningResult {
    Formula best_formula;       // calibrated
    Formula raw_formula;        // best candidate before calibration
    ParameterConfiguration theta;
    double g_score = 0.0;
    double fitness = 0.0;
    double calibration = 0.0;   // the alpha applied by the final shift
    double training_misclassification = 0.0;
    int generations_run = 0;
    std::uint64_t seed = 0;
    std::vector<double> best_fitness_curve;
    std::vector<UcbRound> refinement_history;  // final GP-UCB pass, round by round
};

// roge + final-refinement GP-UCB pass on the argmax-G candidate + calibrate.
MiningResult mine(const Dataset& d, const RogeConfig& cfg);

}  // namespace stlmine
