#include "stlmine/cross_validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "stlmine/util.hpp"

namespace stlmine {
namespace {

std::vector<int> deal_folds(std::size_t n, int k, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> fold(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos)
        fold[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
    return fold;
}

struct Stats {
    double mean = 0.0, stddev = 0.0;
};

Stats fold_stats(const std::vector<FoldResult>& folds, double FoldResult::*field) {
    Stats s;
    if (folds.empty()) return s;
    for (const FoldResult& f : folds) s.mean += f.*field;
    s.mean /= folds.size();
    double var = 0.0;
    for (const FoldResult& f : folds) {
        double dlt = f.*field - s.mean;
        var += dlt * dlt;
    }
    s.stddev = std::sqrt(var / folds.size());
    return s;
}

}  // namespace

void stratified_folds(std::size_t n_pos, std::size_t n_neg, int k,
                      std::uint64_t seed, std::vector<int>& pos_fold,
                      std::vector<int>& neg_fold) {
    if (k < 2) throw Error("cross-validation requires k >= 2");
    if (n_pos < static_cast<std::size_t>(k) || n_neg < static_cast<std::size_t>(k))
        throw Error("cross-validation requires at least k traces per class");
    pos_fold = deal_folds(n_pos, k, split_seed(seed, 0x5F01D, 1));
    neg_fold = deal_folds(n_neg, k, split_seed(seed, 0x5F01D, 2));
}

CvReport kfold_cv(const Dataset& d, int k, const RogeConfig& cfg) {
    cfg.check();
    d.check();
    std::vector<int> pos_fold, neg_fold;
    stratified_folds(d.positives.size(), d.negatives.size(), k, cfg.seed,
                     pos_fold, neg_fold);

    CvReport report;
    report.folds = k;
    report.seed = cfg.seed;
    report.fold_results.reserve(static_cast<std::size_t>(k));

    for (int f = 0; f < k; ++f) {
        Dataset train, val;
        for (std::size_t i = 0; i < d.positives.size(); ++i)
            (pos_fold[i] == f ? val : train).positives.push_back(d.positives[i]);
        for (std::size_t i = 0; i < d.negatives.size(); ++i)
            (neg_fold[i] == f ? val : train).negatives.push_back(d.negatives[i]);

        RogeConfig fold_cfg = cfg;
        fold_cfg.seed = split_seed(cfg.seed, 0xCF, static_cast<std::uint64_t>(f));

        auto start = std::chrono::steady_clock::now();
        MiningResult mined = mine(train, fold_cfg);
        Confusion cm = confusion(mined.best_formula, val, cfg.max_threads);
        auto stop = std::chrono::steady_clock::now();

        FoldResult r;
        r.fold = f;
        r.misclassification = cm.rate();
        std::size_t val_neg = val.negatives.size(), val_pos = val.positives.size();
        r.false_positive_rate =
            val_neg == 0 ? 0.0 : static_cast<double>(cm.false_positives) / val_neg;
        r.false_negative_rate =
            val_pos == 0 ? 0.0 : static_cast<double>(cm.false_negatives) / val_pos;
        r.formula = mined.best_formula.text();
        r.g_score = mined.g_score;
        r.wall_seconds = std::chrono::duration<double>(stop - start).count();
        report.total_wall_seconds += r.wall_seconds;
        report.fold_results.push_back(std::move(r));
    }

    Stats mis = fold_stats(report.fold_results, &FoldResult::misclassification);
    Stats fp = fold_stats(report.fold_results, &FoldResult::false_positive_rate);
    Stats fn = fold_stats(report.fold_results, &FoldResult::false_negative_rate);
    report.mean_misclassification = mis.mean;
    report.std_misclassification = mis.stddev;
    report.mean_false_positive_rate = fp.mean;
    report.std_false_positive_rate = fp.stddev;
    report.mean_false_negative_rate = fn.mean;
    report.std_false_negative_rate = fn.stddev;
    return report;
}

}  // namespace stlmine
