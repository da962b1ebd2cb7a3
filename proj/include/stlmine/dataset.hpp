#pragma once

#include "stlmine/formula.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {

// A labeled corpus: positives carry label +1, negatives -1.  All traces share
// variable names, dt (1e-6 relative tolerance at load) and sample count.
struct Dataset {
    std::vector<Trace> positives;
    std::vector<Trace> negatives;

    int total() const { return static_cast<int>(positives.size() + negatives.size()); }
    const Trace& first() const;
    double dt() const { return first().dt; }
    int sample_count() const { return first().sample_count(); }
    double horizon() const { return first().horizon(); }

    // Envelope of one variable over every trace in both classes.
    std::pair<double, double> variable_range(const std::string& name) const;

    // Shared-schema invariants; throws on violation.
    void check() const;
};

struct RobustnessStats {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    int n = 0;
    bool finite = true;  // false when any trace produced a non-finite robustness
};

struct Confusion {
    int false_positives = 0;  // negatives classified satisfying
    int false_negatives = 0;  // positives classified non-satisfying
    int total = 0;
    double rate() const { return total == 0 ? 0.0 : double(false_positives + false_negatives) / total; }
};

// Loads `<root>/positive/*.csv` and `<root>/negative/*.csv` (sorted by file
// name).  CSV schema: header `time,<var1>,...,<varn>`, rows at uniformly
// increasing times.
Dataset load_dataset(const std::string& root);
Trace load_trace_csv(const std::string& path);

// Mean/std of {robustness(f, x, 0) : x in traces}.  max_threads as in
// parallel_for; results do not depend on the thread count.
RobustnessStats robustness_stats(const Formula& f, const std::vector<Trace>& traces,
                                 int max_threads = 1);

Confusion confusion(const Formula& f, const Dataset& d, int max_threads = 1);
double misclassification_rate(const Formula& f, const Dataset& d, int max_threads = 1);

}  // namespace stlmine
