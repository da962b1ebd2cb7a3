#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stlmine/dataset.hpp"
#include "stlmine/roge.hpp"

namespace stlmine {

struct FoldResult {
    int fold = 0;
    double misclassification = 0.0;    // validation errors / validation size
    double false_positive_rate = 0.0;  // FP / validation negatives
    double false_negative_rate = 0.0;  // FN / validation positives
    std::string formula;               // calibrated formula mined on the training split
    double g_score = 0.0;              // training discrimination of the raw formula
    double wall_seconds = 0.0;
};

struct CvReport {
    int folds = 0;
    std::uint64_t seed = 0;
    std::vector<FoldResult> fold_results;
    double mean_misclassification = 0.0, std_misclassification = 0.0;
    double mean_false_positive_rate = 0.0, std_false_positive_rate = 0.0;
    double mean_false_negative_rate = 0.0, std_false_negative_rate = 0.0;
    double total_wall_seconds = 0.0;
};

// Seeded stratified fold assignment: independently shuffles each class and
// deals indices round-robin, so per-class fold sizes differ by at most one.
// Writes one fold id (0..k-1) per trace into pos_fold / neg_fold.
void stratified_folds(std::size_t n_pos, std::size_t n_neg, int k,
                      std::uint64_t seed, std::vector<int>& pos_fold,
                      std::vector<int>& neg_fold);

// k-fold cross-validation of the full mining pipeline: for every fold, mines
// and calibrates a classifier on the other k-1 folds (with a fold-specific
// seed derived from cfg.seed) and scores it on the held-out fold.  Means and
// standard deviations are across folds (population std).  Requires k >= 2 and
// at least k traces in each class.
CvReport kfold_cv(const Dataset& d, int k, const RogeConfig& cfg);

}  // namespace stlmine
